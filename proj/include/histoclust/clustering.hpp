#ifndef HISTOCLUST_CLUSTERING_HPP
#define HISTOCLUST_CLUSTERING_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "histoclust/histogram.hpp"
#include "histoclust/wasserstein.hpp"

namespace histoclust {

struct Partition {
    std::vector<std::size_t> assignment;
    std::size_t k = 0;

    std::vector<std::vector<std::size_t>> clusters() const;
    std::vector<std::size_t> sizes() const;
};

struct ClusteringResult {
    Partition partition;
    std::vector<std::vector<Histogram>> prototypes;  // K x p
    WeightSystem weights;
    std::vector<double> criterion_trace;  // criterion value after each full iteration
    double criterion = 0.0;
    std::size_t iterations = 0;
    std::uint64_t seed = 0;
    std::size_t restarts_run = 0;
    bool converged = false;
};

/// Cluster prototype for one variable: the histogram whose quantile function
/// is the pointwise mean of the members' quantile functions, computed
/// exactly on the union of the members' knot breakpoints.
Histogram compute_prototype(const HistogramMatrix& matrix,
                            const std::vector<std::size_t>& members, std::size_t j);

std::vector<std::vector<Histogram>> compute_prototypes(const HistogramMatrix& matrix,
                                                       const Partition& partition);

/// One global weight per variable per component, inversely proportional to
/// the pooled within-cluster inertia of that component; each row multiplies
/// to 1 across variables.
WeightSystem update_weights_gc(const HistogramMatrix& matrix, const Partition& partition,
                               const std::vector<std::vector<Histogram>>& prototypes);

/// Per-cluster version of update_weights_gc: K rows per component.
WeightSystem update_weights_cdc(const HistogramMatrix& matrix, const Partition& partition,
                                const std::vector<std::vector<Histogram>>& prototypes);

/// Assign every object to the prototype minimizing the (adaptive) squared
/// distance; exact ties go to the lowest cluster index.
Partition allocate(const HistogramMatrix& matrix,
                   const std::vector<std::vector<Histogram>>& prototypes,
                   const WeightSystem& weights);

double criterion(const HistogramMatrix& matrix, const Partition& partition,
                 const std::vector<std::vector<Histogram>>& prototypes,
                 const WeightSystem& weights);

/// Balanced random initial partition: shuffled round-robin, so no cluster
/// starts empty for K <= n.
Partition balanced_random_partition(std::size_t n, std::size_t k, std::mt19937_64& rng);

struct DcaOptions {
    std::size_t max_iter = 100;
    std::size_t restarts = 1;
    std::uint64_t seed = 0;
    double criterion_epsilon = 1e-10;  // secondary stop on criterion stall
};

/// Multi-restart dynamic clustering. Restart r uses seed + r; the restart
/// with the lowest final criterion is returned.
ClusteringResult run_dca(const HistogramMatrix& matrix, std::size_t k, Scheme scheme,
                         const DcaOptions& options = {});

}  // namespace histoclust

#endif
