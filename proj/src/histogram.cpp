#include "histoclust/histogram.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace histoclust {

namespace {

constexpr double kWeightRepairTol = 1e-6;
constexpr double kInternalTol = 1e-9;

bool all_finite(const std::vector<Bin>& bins) {
    for (const auto& b : bins) {
        if (!std::isfinite(b.lower) || !std::isfinite(b.upper) || !std::isfinite(b.weight))
            return false;
    }
    return true;
}

// Linear-interpolation sample quantile (order statistic at rank p*(n-1)).
double sample_quantile(const std::vector<double>& sorted, double p) {
    const double pos = p * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace

Histogram Histogram::from_bins(std::vector<Bin> bins) {
    if (bins.empty()) throw EmptyBins();
    if (!all_finite(bins)) throw Error("histogram bins contain non-finite values");

    double sum = 0.0;
    for (std::size_t h = 0; h < bins.size(); ++h) {
        const auto& b = bins[h];
        if (b.weight <= 0.0)
            throw NonPositiveWeight("bin " + std::to_string(h) + " has weight " + std::to_string(b.weight));
        if (!(b.lower < b.upper))
            throw NonContiguousBins("bin " + std::to_string(h) + " has non-positive width");
        if (h > 0) {
            const double gap = bins[h].lower - bins[h - 1].upper;
            const double scale = std::max(1.0, std::abs(bins[h - 1].upper));
            if (std::abs(gap) > kInternalTol * scale)
                throw NonContiguousBins("gap between bins " + std::to_string(h - 1) + " and " +
                                        std::to_string(h));
            bins[h].lower = bins[h - 1].upper;
        }
        sum += b.weight;
    }
    if (std::abs(sum - 1.0) >= kWeightRepairTol)
        throw WeightSumMismatch("bin weights sum to " + std::to_string(sum));

    Histogram h;
    h.knot_t_.reserve(bins.size() + 1);
    h.knot_q_.reserve(bins.size() + 1);
    h.knot_t_.push_back(0.0);
    h.knot_q_.push_back(bins.front().lower);
    double cum = 0.0;
    for (const auto& b : bins) {
        cum += b.weight / sum;
        h.knot_t_.push_back(cum);
        h.knot_q_.push_back(b.upper);
    }
    h.knot_t_.back() = 1.0;
    h.compute_moments();
    return h;
}

Histogram Histogram::from_samples(std::vector<double> samples, std::size_t num_bins) {
    if (samples.empty()) throw EmptySamples();
    if (num_bins < 1) throw Error("num_bins must be >= 1");
    std::sort(samples.begin(), samples.end());

    if (samples.front() == samples.back()) {
        // constant data: single near-degenerate bin around the value
        const double v = samples.front();
        const double half = 0.5e-12 * std::max(1.0, std::abs(v));
        return from_bins({{v - half, v + half, 1.0}});
    }

    std::vector<double> t(num_bins + 1), q(num_bins + 1);
    for (std::size_t j = 0; j <= num_bins; ++j) {
        t[j] = static_cast<double>(j) / static_cast<double>(num_bins);
        q[j] = sample_quantile(samples, t[j]);
    }
    return from_knots(std::move(t), std::move(q));
}

Histogram Histogram::from_knots(std::vector<double> t, std::vector<double> q) {
    if (t.size() != q.size() || t.size() < 2)
        throw Error("quantile knots need matching t/q sequences of length >= 2");
    if (std::abs(t.front()) > kInternalTol || std::abs(t.back() - 1.0) > kInternalTol)
        throw Error("quantile knots must cover t in [0, 1]");
    t.front() = 0.0;
    t.back() = 1.0;

    Histogram h;
    h.knot_t_.push_back(t.front());
    h.knot_q_.push_back(q.front());
    for (std::size_t i = 1; i < t.size(); ++i) {
        if (t[i] < t[i - 1] - kInternalTol) throw Error("quantile knots not sorted in t");
        if (q[i] < q[i - 1] - kInternalTol) throw Error("quantile function not monotone");
        if (t[i] <= h.knot_t_.back()) continue;  // collapse duplicate breakpoints
        h.knot_t_.push_back(t[i]);
        h.knot_q_.push_back(std::max(q[i], h.knot_q_.back()));
    }
    if (h.knot_t_.size() < 2 || h.knot_t_.back() != 1.0)
        throw Error("quantile knots must cover t in [0, 1]");
    h.compute_moments();
    return h;
}

void Histogram::compute_moments() {
    double m1 = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i + 1 < knot_t_.size(); ++i) {
        const double dt = knot_t_[i + 1] - knot_t_[i];
        const double a = knot_q_[i], b = knot_q_[i + 1];
        m1 += dt * 0.5 * (a + b);
        m2 += dt * (a * a + a * b + b * b) / 3.0;
    }
    mean_ = m1;
    std_ = std::sqrt(std::max(0.0, m2 - m1 * m1));
}

double Histogram::quantile(double t) const {
    if (t < 0.0 || t > 1.0) throw OutOfDomain("quantile argument " + std::to_string(t));
    if (t <= 0.0) return knot_q_.front();
    if (t >= 1.0) return knot_q_.back();
    const auto it = std::upper_bound(knot_t_.begin(), knot_t_.end(), t);
    const auto i = static_cast<std::size_t>(it - knot_t_.begin()) - 1;
    const double dt = knot_t_[i + 1] - knot_t_[i];
    const double frac = (t - knot_t_[i]) / dt;
    return knot_q_[i] + frac * (knot_q_[i + 1] - knot_q_[i]);
}

Histogram Histogram::centered() const {
    Histogram h(*this);
    for (auto& q : h.knot_q_) q -= mean_;
    h.compute_moments();
    return h;
}

std::vector<Bin> Histogram::bins() const {
    std::vector<Bin> out;
    out.reserve(bin_count());
    for (std::size_t i = 0; i + 1 < knot_t_.size(); ++i)
        out.push_back({knot_q_[i], knot_q_[i + 1], knot_t_[i + 1] - knot_t_[i]});
    return out;
}

Refinement common_refinement(const Histogram& h1, const Histogram& h2) {
    const auto& ta = h1.knot_t();
    const auto& tb = h2.knot_t();

    Refinement r;
    r.breaks.reserve(ta.size() + tb.size());
    std::merge(ta.begin(), ta.end(), tb.begin(), tb.end(), std::back_inserter(r.breaks));
    r.breaks.erase(std::unique(r.breaks.begin(), r.breaks.end()), r.breaks.end());

    const auto segments_of = [](const Histogram& h, const std::vector<double>& breaks) {
        std::vector<Refinement::Segment> segs(breaks.size() - 1);
        const auto& t = h.knot_t();
        const auto& q = h.knot_q();
        std::size_t i = 0;
        for (std::size_t s = 0; s + 1 < breaks.size(); ++s) {
            const double u0 = breaks[s];
            while (i + 2 < t.size() && t[i + 1] <= u0) ++i;
            const double slope = (q[i + 1] - q[i]) / (t[i + 1] - t[i]);
            segs[s] = {q[i] + slope * (u0 - t[i]), slope};
        }
        return segs;
    };
    r.a = segments_of(h1, r.breaks);
    r.b = segments_of(h2, r.breaks);
    return r;
}

HistogramMatrix::HistogramMatrix(std::vector<std::string> variable_names,
                                 std::vector<std::string> object_ids,
                                 std::vector<std::vector<Histogram>> cells)
    : variable_names_(std::move(variable_names)),
      object_ids_(std::move(object_ids)),
      cells_(std::move(cells)) {
    if (cells_.empty() || variable_names_.empty())
        throw Error("histogram matrix needs n >= 1 objects and p >= 1 variables");
    if (object_ids_.size() != cells_.size())
        throw Error("object id count does not match object count");
    for (const auto& row : cells_)
        if (row.size() != variable_names_.size())
            throw Error("histogram matrix is not rectangular");
}

}  // namespace histoclust
