#include "histoclust/wasserstein.hpp"

#include <algorithm>
#include <cmath>

namespace histoclust {

std::string scheme_name(Scheme s) {
    switch (s) {
        case Scheme::Standard: return "standard";
        case Scheme::GcAwd: return "gc-awd";
        case Scheme::CdcAwd: return "cdc-awd";
    }
    return "standard";
}

Scheme scheme_from_name(const std::string& name) {
    if (name == "standard") return Scheme::Standard;
    if (name == "gc-awd" || name == "gc_awd") return Scheme::GcAwd;
    if (name == "cdc-awd" || name == "cdc_awd") return Scheme::CdcAwd;
    throw Error("unknown scheme '" + name + "' (expected standard, gc-awd or cdc-awd)");
}

WeightSystem WeightSystem::unit(Scheme s, std::size_t clusters, std::size_t p) {
    WeightSystem w;
    w.scheme = s;
    const std::size_t rows = s == Scheme::Standard ? 0 : (s == Scheme::GcAwd ? 1 : clusters);
    w.mean_weights.assign(rows, std::vector<double>(p, 1.0));
    w.disp_weights.assign(rows, std::vector<double>(p, 1.0));
    return w;
}

double WeightSystem::mean_weight(std::size_t k, std::size_t j) const {
    if (scheme == Scheme::Standard) return 1.0;
    const std::size_t row = scheme == Scheme::GcAwd ? 0 : k;
    if (row >= mean_weights.size()) throw InvalidCluster("weight row " + std::to_string(k));
    return mean_weights[row][j];
}

double WeightSystem::disp_weight(std::size_t k, std::size_t j) const {
    if (scheme == Scheme::Standard) return 1.0;
    const std::size_t row = scheme == Scheme::GcAwd ? 0 : k;
    if (row >= disp_weights.size()) throw InvalidCluster("weight row " + std::to_string(k));
    return disp_weights[row][j];
}

void WeightSystem::validate(double tol) const {
    const auto check = [tol](const std::vector<std::vector<double>>& rows, const char* what) {
        for (const auto& row : rows) {
            double prod = 1.0;
            for (double w : row) {
                if (!(w > 0.0)) throw Error(std::string(what) + " weight not positive");
                prod *= w;
            }
            if (std::abs(prod - 1.0) > tol)
                throw Error(std::string(what) + " weight row product " + std::to_string(prod) + " != 1");
        }
    };
    check(mean_weights, "mean");
    check(disp_weights, "dispersion");
}

namespace {

// ∫ (qa(t) - qb(t) + shift)^2 dt over the refinement; the difference is
// linear on each sub-interval so each term integrates exactly.
double integrate_sq_diff(const Refinement& r, double shift) {
    double acc = 0.0;
    for (std::size_t s = 0; s < r.size(); ++s) {
        const double w = r.breaks[s + 1] - r.breaks[s];
        const double d0 = r.a[s].offset - r.b[s].offset + shift;
        const double d1 = r.a[s].slope - r.b[s].slope;
        acc += w * (d0 * d0 + d0 * d1 * w + d1 * d1 * w * w / 3.0);
    }
    return acc;
}

// ∫ qa(t) * qb(t) dt, exact per sub-interval.
double integrate_product(const Refinement& r) {
    double acc = 0.0;
    for (std::size_t s = 0; s < r.size(); ++s) {
        const double w = r.breaks[s + 1] - r.breaks[s];
        const double a0 = r.a[s].offset, a1 = r.a[s].slope;
        const double b0 = r.b[s].offset, b1 = r.b[s].slope;
        acc += w * (a0 * b0 + 0.5 * (a0 * b1 + a1 * b0) * w + a1 * b1 * w * w / 3.0);
    }
    return acc;
}

}  // namespace

double dist2(const Histogram& h1, const Histogram& h2) {
    return integrate_sq_diff(common_refinement(h1, h2), 0.0);
}

double centered_dist2(const Histogram& h1, const Histogram& h2) {
    return integrate_sq_diff(common_refinement(h1, h2), h2.mean() - h1.mean());
}

double r_qq(const Histogram& h1, const Histogram& h2) {
    const double s1 = h1.stddev(), s2 = h2.stddev();
    if (s1 <= 0.0 || s2 <= 0.0) throw ZeroDispersion();
    const double cross = integrate_product(common_refinement(h1, h2));
    const double r = (cross - h1.mean() * h2.mean()) / (s1 * s2);
    return std::clamp(r, -1.0, 1.0);
}

DistanceDecomposition decompose(const Histogram& h1, const Histogram& h2) {
    DistanceDecomposition d;
    const double s1 = h1.stddev(), s2 = h2.stddev();
    const double dm = h1.mean() - h2.mean();
    d.location = dm * dm;
    d.size = (s1 - s2) * (s1 - s2);
    d.r_qq = (s1 > 0.0 && s2 > 0.0) ? r_qq(h1, h2) : 1.0;
    d.shape = 2.0 * s1 * s2 * (1.0 - d.r_qq);
    d.total = d.location + d.size + d.shape;
    return d;
}

double multivar_dist2(const std::vector<Histogram>& a, const std::vector<Histogram>& b) {
    if (a.size() != b.size())
        throw DimensionMismatch("object descriptions have " + std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()) + " variables");
    double acc = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) acc += dist2(a[j], b[j]);
    return acc;
}

double adaptive_dist2(const std::vector<Histogram>& a, const std::vector<Histogram>& g,
                      const WeightSystem& w, std::size_t k) {
    if (a.size() != g.size())
        throw DimensionMismatch("object descriptions have " + std::to_string(a.size()) + " vs " +
                                std::to_string(g.size()) + " variables");
    if (w.scheme == Scheme::Standard) return multivar_dist2(a, g);
    double acc = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double dm = a[j].mean() - g[j].mean();
        acc += w.mean_weight(k, j) * dm * dm;
        acc += w.disp_weight(k, j) * centered_dist2(a[j], g[j]);
    }
    return acc;
}

}  // namespace histoclust
