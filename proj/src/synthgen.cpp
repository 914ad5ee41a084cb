#include "histoclust/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

#include "histoclust/evaluation.hpp"

namespace histoclust {

namespace {

constexpr double kSkewZero = 1e-12;
constexpr double kNormalKurtTol = 1e-8;
constexpr double kCoefTol = 1e-10;

// Pearson quadratic coefficients for the standardized distribution,
// normalized so p'/p = -(c1 + x) / (c0 + c1 x + c2 x^2).
struct Coefs {
    double c0, c1, c2;
};

Coefs pearson_coefs(double beta1, double beta2) {
    double denom = 10.0 * beta2 - 12.0 * beta1 - 18.0;
    if (std::abs(denom) < kCoefTol) {
        beta2 += 1e-7;  // off the singular curve; well below moment noise
        denom = 10.0 * beta2 - 12.0 * beta1 - 18.0;
    }
    return {(4.0 * beta2 - 3.0 * beta1) / denom, std::sqrt(beta1) * (beta2 + 3.0) / denom,
            (2.0 * beta2 - 3.0 * beta1 - 6.0) / denom};
}

double gamma_draw(std::mt19937_64& rng, double shape) {
    std::gamma_distribution<double> g(shape, 1.0);
    return g(rng);
}

double beta_draw(std::mt19937_64& rng, double a, double b) {
    const double x = gamma_draw(rng, a);
    const double y = gamma_draw(rng, b);
    return x / (x + y);
}

}  // namespace

bool MomentSpec::feasible() const {
    return std > 0.0 && kurtosis > 1.0 + skewness * skewness;
}

void MomentSpec::validate() const {
    if (!(std > 0.0)) throw InfeasibleMoments("std must be positive");
    if (!(kurtosis > 1.0 + skewness * skewness))
        throw InfeasibleMoments("kurtosis " + std::to_string(kurtosis) +
                                " <= 1 + skewness^2 = " + std::to_string(1.0 + skewness * skewness));
}

PearsonType pearson_type(const MomentSpec& spec) {
    spec.validate();
    const double beta1 = spec.skewness * spec.skewness;
    const double beta2 = spec.kurtosis;

    if (beta1 < kSkewZero) {
        if (std::abs(beta2 - 3.0) < kNormalKurtTol) return PearsonType::Normal;
        return beta2 < 3.0 ? PearsonType::II : PearsonType::VII;
    }
    if (std::abs(2.0 * beta2 - 3.0 * beta1 - 6.0) < kCoefTol) return PearsonType::III;

    const auto [c0, c1, c2] = pearson_coefs(beta1, beta2);
    const double kappa = c1 * c1 / (4.0 * c0 * c2);
    if (kappa < 0.0) return PearsonType::I;
    if (std::abs(kappa - 1.0) < kCoefTol) return PearsonType::V;
    return kappa > 1.0 ? PearsonType::VI : PearsonType::IV;
}

PearsonSampler::PearsonSampler(const MomentSpec& spec) : spec_(spec) {
    spec.validate();
    flip_ = spec.skewness < 0.0;
    const double skew = std::abs(spec.skewness);
    const double beta1 = skew * skew;
    const double beta2 = spec.kurtosis;
    type_ = pearson_type(spec);

    switch (type_) {
        case PearsonType::Normal:
            break;
        case PearsonType::II:
            // symmetric beta, p1 = shape
            p1_ = 3.0 * (beta2 - 1.0) / (2.0 * (3.0 - beta2));
            break;
        case PearsonType::VII:
            // scaled Student t, p1 = dof, p2 = scale
            p1_ = (4.0 * beta2 - 6.0) / (beta2 - 3.0);
            p2_ = std::sqrt((p1_ - 2.0) / p1_);
            break;
        case PearsonType::III: {
            // gamma: p1 = shape, p2 = scale, p3 = shift
            const auto [c0, c1, c2] = pearson_coefs(beta1, beta2);
            (void)c2;
            p1_ = c0 / (c1 * c1);
            p2_ = c1;
            p3_ = -c0 / c1;
            break;
        }
        case PearsonType::I: {
            // beta on [p3, p4], shapes p1, p2
            const auto [c0, c1, c2] = pearson_coefs(beta1, beta2);
            const double disc = std::sqrt(c1 * c1 - 4.0 * c0 * c2);
            const double a1 = (-c1 - disc) / (2.0 * c2);
            const double a2 = (-c1 + disc) / (2.0 * c2);
            const double lo = std::min(a1, a2), hi = std::max(a1, a2);
            p1_ = (lo + c1) / (c2 * (hi - lo)) + 1.0;
            p2_ = -(hi + c1) / (c2 * (hi - lo)) + 1.0;
            p3_ = lo;
            p4_ = hi;
            break;
        }
        case PearsonType::V: {
            // inverse gamma: p1 = shape, p2 = scale, p3 = shift
            const auto [c0, c1, c2] = pearson_coefs(beta1, beta2);
            (void)c0;
            const double root = -c1 / (2.0 * c2);
            p1_ = 1.0 / c2 - 1.0;
            p2_ = -(root + c1) / c2;
            p3_ = root;
            break;
        }
        case PearsonType::VI: {
            // beta prime: z = p3 + p4 * G(p1)/G(p2)
            Coefs c = pearson_coefs(beta1, beta2);
            double disc = std::sqrt(c.c1 * c.c1 - 4.0 * c.c0 * c.c2);
            double a1 = (-c.c1 - disc) / (2.0 * c.c2);
            double a2 = (-c.c1 + disc) / (2.0 * c.c2);
            double lo = std::min(a1, a2), hi = std::max(a1, a2);
            if (lo > 0.0) {
                // support left of the roots: mirror and sample the negated
                // distribution (skew sign handled via flip_)
                flip_ = !flip_;
                c = pearson_coefs(beta1, beta2);
                c.c1 = -c.c1;
                disc = std::sqrt(c.c1 * c.c1 - 4.0 * c.c0 * c.c2);
                a1 = (-c.c1 - disc) / (2.0 * c.c2);
                a2 = (-c.c1 + disc) / (2.0 * c.c2);
                lo = std::min(a1, a2);
                hi = std::max(a1, a2);
            }
            const double e1 = (lo + c.c1) / (c.c2 * (hi - lo));   // exponent at the far root
            const double e2 = -(hi + c.c1) / (c.c2 * (hi - lo));  // exponent at the near root
            p1_ = e2 + 1.0;
            p2_ = -e1 - e2 - 1.0;
            p3_ = hi;
            p4_ = hi - lo;
            break;
        }
        case PearsonType::IV: {
            // p1 = center b, p2 = half-width a, p3 = sin exponent, p4 = phi rate.
            // No closed-form sampler exists; in phi = arctan((x-b)/a) + pi/2
            // the density is sin^r(phi) exp(-nu*phi) on (0, pi), which we
            // tabulate around its mode and invert.
            const auto [c0, c1, c2] = pearson_coefs(beta1, beta2);
            const double b = -c1 / (2.0 * c2);
            const double a = std::sqrt(c0 / c2 - b * b);
            const double m = 1.0 / (2.0 * c2);
            p1_ = b;
            p2_ = a;
            p3_ = 2.0 * m - 2.0;
            p4_ = (b + c1) / (c2 * a);
            build_inversion_table();
            break;
        }
    }
}

// Tabulate the type IV CDF in phi over the region where the density is
// within exp(-60) of its mode, then invert by linear interpolation. The
// density sin^r(phi) exp(-nu*phi) concentrates sharply for large r, so the
// grid is confined to the effective support rather than all of (0, pi).
void PearsonSampler::build_inversion_table() {
    const double r = p3_;
    const double nu = p4_;
    const double pi = std::numbers::pi;
    const auto log_density = [&](double phi) { return r * std::log(std::sin(phi)) - nu * phi; };

    const double mode = std::atan2(r, nu);  // r*cot(phi) = nu
    const double log_peak = log_density(mode);
    const double step = std::sin(mode) / std::sqrt(r + 1.0);
    const auto expand = [&](double dir) {
        double s = step;
        while (true) {
            const double cand = mode + dir * s;
            if (cand <= 1e-12) return 1e-12;
            if (cand >= pi - 1e-12) return pi - 1e-12;
            if (log_density(cand) < log_peak - 60.0) return cand;
            s *= 2.0;
        }
    };
    const double lo = expand(-1.0), hi = expand(1.0);

    constexpr std::size_t kGrid = 4096;
    inv_grid_.resize(kGrid);
    inv_cdf_.resize(kGrid);
    double prev_f = 0.0, acc = 0.0;
    for (std::size_t i = 0; i < kGrid; ++i) {
        const double phi = lo + (hi - lo) * static_cast<double>(i) / (kGrid - 1);
        const double f = std::exp(log_density(phi) - log_peak);
        if (i > 0) acc += 0.5 * (prev_f + f) * (hi - lo) / (kGrid - 1);
        inv_grid_[i] = phi;
        inv_cdf_[i] = acc;
        prev_f = f;
    }
}

double PearsonSampler::draw_standardized(std::mt19937_64& rng) const {
    switch (type_) {
        case PearsonType::Normal: {
            std::normal_distribution<double> nd;
            return nd(rng);
        }
        case PearsonType::II: {
            const double b = beta_draw(rng, p1_, p1_);
            return (b - 0.5) * std::sqrt(4.0 * (2.0 * p1_ + 1.0));
        }
        case PearsonType::VII: {
            std::student_t_distribution<double> td(p1_);
            return p2_ * td(rng);
        }
        case PearsonType::III:
            return p3_ + p2_ * gamma_draw(rng, p1_);
        case PearsonType::I:
            return p3_ + (p4_ - p3_) * beta_draw(rng, p1_, p2_);
        case PearsonType::V:
            return p3_ + p2_ / gamma_draw(rng, p1_);
        case PearsonType::VI:
            return p3_ + p4_ * gamma_draw(rng, p1_) / gamma_draw(rng, p2_);
        case PearsonType::IV: {
            std::uniform_real_distribution<double> unif(0.0, 1.0);
            const double u = unif(rng) * inv_cdf_.back();
            const auto it = std::upper_bound(inv_cdf_.begin(), inv_cdf_.end(), u);
            std::size_t idx = static_cast<std::size_t>(it - inv_cdf_.begin());
            idx = std::min(std::max<std::size_t>(idx, 1), inv_cdf_.size() - 1);
            const double c_lo = inv_cdf_[idx - 1], c_hi = inv_cdf_[idx];
            const double frac = c_hi > c_lo ? (u - c_lo) / (c_hi - c_lo) : 0.5;
            const double phi = inv_grid_[idx - 1] + frac * (inv_grid_[idx] - inv_grid_[idx - 1]);
            return p1_ + p2_ * std::tan(phi - std::numbers::pi / 2.0);
        }
    }
    return 0.0;
}

double PearsonSampler::operator()(std::mt19937_64& rng) const {
    double z = draw_standardized(rng);
    if (flip_) z = -z;
    return spec_.mean + spec_.std * z;
}

std::vector<double> pearson_sample(const MomentSpec& spec, std::size_t n, std::mt19937_64& rng) {
    const PearsonSampler sampler(spec);
    std::vector<double> out(n);
    for (double& v : out) v = sampler(rng);
    return out;
}

void ExperimentConfig::validate() const {
    if (baselines.empty()) throw Error("experiment config has no clusters");
    const std::size_t p = baselines.front().size();
    if (p == 0) throw Error("experiment config has no variables");
    for (const auto& row : baselines)
        if (row.size() != p) throw Error("experiment baseline table is not rectangular");
    if (n_per_cluster == 0 || samples_per_object == 0 || bins_per_histogram == 0 ||
        replicates == 0 || restarts == 0 || max_iter == 0)
        throw Error("experiment config counts must be positive");
    for (const auto& row : baselines)
        for (const auto& v : row)
            MomentSpec{v.mean.value, v.std.value, v.skewness.value, v.kurtosis.value}.validate();
}

ExperimentConfig experiment1_config() {
    ExperimentConfig c;
    c.baselines = {
        {{{-4.8, 6.0}, {12.0, 1.2}, {-0.05, 0.1}, {3.10, 0.1}},
         {{17.0, 12.0}, {6.0, 0.6}, {0.1, 0.1}, {2.95, 0.1}}},
        {{{-4.8, 6.0}, {9.0, 1.2}, {0.0, 0.1}, {3.00, 0.1}},
         {{-17.0, 12.0}, {4.6, 0.6}, {0.0, 0.1}, {3.00, 0.1}}},
        {{{10.0, 6.0}, {6.0, 1.2}, {0.1, 0.1}, {2.95, 0.1}},
         {{0.0, 12.0}, {3.3, 0.6}, {-0.1, 0.1}, {3.10, 0.1}}},
    };
    c.seed = 420;
    return c;
}

ExperimentConfig experiment2_config() {
    ExperimentConfig c;
    c.baselines = {
        {{{0.0, 0.8}, {3.6, 0.3}, {-0.04, 0.01}, {2.90, 0.03}},
         {{0.0, 2.3}, {4.1, 0.1}, {0.10, 0.01}, {3.20, 0.03}}},
        {{{-0.5, 1.6}, {2.7, 0.2}, {0.03, 0.01}, {3.05, 0.03}},
         {{-3.0, 1.6}, {3.4, 0.2}, {0.03, 0.01}, {3.05, 0.03}}},
        {{{2.8, 2.4}, {1.8, 0.1}, {0.10, 0.01}, {3.20, 0.03}},
         {{1.1, 0.8}, {2.8, 0.3}, {-0.03, 0.01}, {2.90, 0.03}}},
    };
    c.seed = 421;
    return c;
}

void apply_desk_preset(ExperimentConfig& config) {
    config.replicates = 20;
    config.restarts = 10;
    config.samples_per_object = 500;
}

namespace {

// Noisy moment draws can leave the Pearson-feasible region; project back.
MomentSpec project_feasible(MomentSpec s) {
    s.std = std::max(s.std, 1e-6);
    const double floor = 1.0 + s.skewness * s.skewness;
    if (s.kurtosis <= floor) s.kurtosis = floor + 1e-3;
    return s;
}

}  // namespace

std::pair<HistogramMatrix, Partition> generate_dataset(const ExperimentConfig& config,
                                                       std::size_t replicate_index) {
    config.validate();
    std::mt19937_64 rng(config.seed ^ static_cast<std::uint64_t>(replicate_index));
    std::normal_distribution<double> noise;

    const std::size_t kk = config.clusters();
    const std::size_t p = config.variables();
    const std::size_t n = kk * config.n_per_cluster;

    std::vector<std::vector<Histogram>> cells;
    cells.reserve(n);
    Partition labels;
    labels.k = kk;
    labels.assignment.reserve(n);
    std::vector<std::string> ids;
    ids.reserve(n);

    for (std::size_t k = 0; k < kk; ++k) {
        for (std::size_t o = 0; o < config.n_per_cluster; ++o) {
            std::vector<Histogram> row;
            row.reserve(p);
            for (std::size_t j = 0; j < p; ++j) {
                const auto& b = config.baselines[k][j];
                MomentSpec spec{b.mean.value + noise(rng) * b.mean.sd,
                                b.std.value + noise(rng) * b.std.sd,
                                b.skewness.value + noise(rng) * b.skewness.sd,
                                b.kurtosis.value + noise(rng) * b.kurtosis.sd};
                spec = project_feasible(spec);
                auto samples = pearson_sample(spec, config.samples_per_object, rng);
                row.push_back(Histogram::from_samples(std::move(samples), config.bins_per_histogram));
            }
            cells.push_back(std::move(row));
            labels.assignment.push_back(k);
            ids.push_back("c" + std::to_string(k + 1) + "_o" + std::to_string(o + 1));
        }
    }

    std::vector<std::string> vars;
    for (std::size_t j = 0; j < p; ++j) vars.push_back("V" + std::to_string(j + 1));
    return {HistogramMatrix(std::move(vars), std::move(ids), std::move(cells)), std::move(labels)};
}

namespace {

void mean_sd(const std::vector<double>& v, double& mean, double& sd) {
    mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    sd = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
}

}  // namespace

MonteCarloSummary run_monte_carlo(const ExperimentConfig& config, const std::vector<Scheme>& schemes,
                                  std::size_t threads) {
    config.validate();
    const std::size_t reps = config.replicates;
    std::vector<std::vector<double>> cr(schemes.size(), std::vector<double>(reps, 0.0));
    std::vector<std::vector<double>> acc(schemes.size(), std::vector<double>(reps, 0.0));

    const auto worker = [&](std::size_t first, std::size_t step) {
        for (std::size_t rep = first; rep < reps; rep += step) {
            const auto [matrix, truth] = generate_dataset(config, rep);
            DcaOptions opts;
            opts.restarts = config.restarts;
            opts.max_iter = config.max_iter;
            opts.seed = config.seed ^ static_cast<std::uint64_t>(rep);
            for (std::size_t s = 0; s < schemes.size(); ++s) {
                const auto result = run_dca(matrix, config.clusters(), schemes[s], opts);
                cr[s][rep] = corrected_rand(result.partition, truth);
                acc[s][rep] = accuracy(result.partition, truth);
            }
        }
    };

    if (threads <= 1) {
        worker(0, 1);
    } else {
        const std::size_t nt = std::min(threads, reps);
        std::vector<std::thread> pool;
        pool.reserve(nt);
        for (std::size_t t = 0; t < nt; ++t) pool.emplace_back(worker, t, nt);
        for (auto& th : pool) th.join();
    }

    MonteCarloSummary summary;
    for (std::size_t s = 0; s < schemes.size(); ++s) {
        SchemeStats st;
        st.scheme = schemes[s];
        st.cr = std::move(cr[s]);
        st.accuracy = std::move(acc[s]);
        mean_sd(st.cr, st.cr_mean, st.cr_sd);
        mean_sd(st.accuracy, st.accuracy_mean, st.accuracy_sd);
        summary.per_scheme.push_back(std::move(st));
    }
    return summary;
}

}  // namespace histoclust
