#ifndef HISTOCLUST_SYNTHGEN_HPP
#define HISTOCLUST_SYNTHGEN_HPP

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "histoclust/clustering.hpp"
#include "histoclust/histogram.hpp"
#include "histoclust/wasserstein.hpp"

namespace histoclust {

/// First four moments defining a member of the Pearson family.
/// Feasibility: kurtosis > 1 + skewness^2 and std > 0.
struct MomentSpec {
    double mean = 0.0;
    double std = 1.0;
    double skewness = 0.0;
    double kurtosis = 3.0;

    bool feasible() const;
    void validate() const;  // throws InfeasibleMoments
};

enum class PearsonType { Normal, I, II, III, IV, V, VI, VII };

PearsonType pearson_type(const MomentSpec& spec);

/// Pearson-family variate generator. Parameters are derived from the four
/// moments once; operator() draws a single value.
class PearsonSampler {
public:
    explicit PearsonSampler(const MomentSpec& spec);

    PearsonType type() const { return type_; }
    double operator()(std::mt19937_64& rng) const;

private:
    double draw_standardized(std::mt19937_64& rng) const;
    void build_inversion_table();

    MomentSpec spec_;
    PearsonType type_ = PearsonType::Normal;
    bool flip_ = false;  // sampler built for |skewness|, result negated
    // type-dependent parameters (see .cpp for the per-type meaning)
    double p1_ = 0.0, p2_ = 0.0, p3_ = 0.0, p4_ = 0.0;
    // type IV draws by inverting a tabulated CDF (no closed-form sampler)
    std::vector<double> inv_grid_, inv_cdf_;
};

std::vector<double> pearson_sample(const MomentSpec& spec, std::size_t n, std::mt19937_64& rng);

struct ParameterPair {
    double value = 0.0;
    double sd = 0.0;
};

struct VariableBaseline {
    ParameterPair mean, std, skewness, kurtosis;
};

struct ExperimentConfig {
    std::vector<std::vector<VariableBaseline>> baselines;  // clusters x variables
    std::size_t n_per_cluster = 50;
    std::size_t samples_per_object = 1000;
    std::size_t bins_per_histogram = 20;
    std::size_t replicates = 100;
    std::size_t restarts = 50;
    std::size_t max_iter = 100;
    std::uint64_t seed = 0;

    std::size_t clusters() const { return baselines.size(); }
    std::size_t variables() const { return baselines.empty() ? 0 : baselines.front().size(); }
    void validate() const;
};

/// Baseline tables for the two shipped experiments.
ExperimentConfig experiment1_config();
ExperimentConfig experiment2_config();

/// Fast preset: 20 replicates, 10 restarts, 500 samples per object.
void apply_desk_preset(ExperimentConfig& config);

/// One synthetic dataset: per-object moments drawn around the cluster
/// baselines (projected back to feasibility), Pearson samples summarized
/// into equi-depth histograms. Returns the matrix and the true labels.
std::pair<HistogramMatrix, Partition> generate_dataset(const ExperimentConfig& config,
                                                       std::size_t replicate_index);

struct SchemeStats {
    Scheme scheme = Scheme::Standard;
    std::vector<double> cr;        // best-of-restarts corrected Rand per replicate
    std::vector<double> accuracy;  // best-of-restarts accuracy per replicate
    double cr_mean = 0.0, cr_sd = 0.0;
    double accuracy_mean = 0.0, accuracy_sd = 0.0;
};

struct MonteCarloSummary {
    std::vector<SchemeStats> per_scheme;
};

/// Full protocol: per replicate, generate a dataset, run each scheme with
/// multi-restart best-of, score against the true labels. Replicates are
/// independent (per-replicate RNG streams), so thread count never changes
/// the numbers.
MonteCarloSummary run_monte_carlo(const ExperimentConfig& config, const std::vector<Scheme>& schemes,
                                  std::size_t threads = 1);

}  // namespace histoclust

#endif
