#ifndef HISTOCLUST_EVALUATION_HPP
#define HISTOCLUST_EVALUATION_HPP

#include <optional>
#include <vector>

#include "histoclust/clustering.hpp"
#include "histoclust/histogram.hpp"
#include "histoclust/wasserstein.hpp"

namespace histoclust {

enum class Component : std::size_t { Mean = 0, Dispersion = 1 };
inline constexpr std::size_t kComponents = 2;

/// component x variable x cluster tensor of (possibly weighted) sums of
/// squares, with marginal sums over any subset of axes.
class InertiaTensor {
public:
    InertiaTensor() = default;
    InertiaTensor(std::size_t p, std::size_t k) : p_(p), k_(k), v_(kComponents * p * k, 0.0) {}

    double& at(Component c, std::size_t j, std::size_t k) {
        return v_[(static_cast<std::size_t>(c) * p_ + j) * k_ + k];
    }
    double at(Component c, std::size_t j, std::size_t k) const {
        return v_[(static_cast<std::size_t>(c) * p_ + j) * k_ + k];
    }

    std::size_t p() const { return p_; }
    std::size_t clusters() const { return k_; }

    double total() const;
    double component_total(Component c) const;
    double variable_total(std::size_t j) const;                       // both components
    double cluster_total(std::size_t k) const;                        // both components
    double component_variable(Component c, std::size_t j) const;      // sum over clusters
    double component_cluster(Component c, std::size_t k) const;       // sum over variables
    double variable_cluster(std::size_t j, std::size_t k) const;      // both components

private:
    std::size_t p_ = 0, k_ = 0;
    std::vector<double> v_;
};

struct InertiaBreakdown {
    InertiaTensor tss, wss, bss;
    std::vector<Histogram> general_prototype;
    Scheme scheme = Scheme::Standard;
    std::vector<std::size_t> cluster_sizes;
};

/// BSS/TSS ratios at every granularity of the partition-quality table.
/// Cells whose TSS is below 1e-12 are reported as nullopt, not 0 or 1.
struct QpiReport {
    // per component block: [j][k] cells, per-cluster and per-variable margins
    struct ComponentBlock {
        std::vector<std::vector<std::optional<double>>> cell;  // p x K
        std::vector<std::optional<double>> per_cluster;        // K
        std::vector<std::optional<double>> per_variable;       // p
        std::optional<double> global;
    };
    ComponentBlock mean;
    ComponentBlock dispersion;
    ComponentBlock combined;  // both components summed
    double global_qpi = 0.0;  // BSS/TSS == 1 - WSS/TSS
};

/// Prototype of the whole set E. Plain mean of quantile functions for
/// STANDARD and GC-AWD; for CDC-AWD the mean component is the
/// lambda_{k,mean}-weighted average of cluster mean sums and the dispersion
/// component the lambda_{k,disp}-weighted average of centered quantile
/// functions.
std::vector<Histogram> general_prototype(const HistogramMatrix& matrix,
                                         const ClusteringResult& result);

/// Full TSS/WSS/BSS tensors under the result's scheme and weights.
/// WSS totals the minimized criterion; TSS = WSS + BSS cell by cell.
InertiaBreakdown inertia(const HistogramMatrix& matrix, const ClusteringResult& result);

QpiReport qpi(const InertiaBreakdown& breakdown);

/// Pseudo-F index (BSS/(K-1)) / (WSS/(n-K)). +infinity when WSS is zero.
double ch_index(const InertiaBreakdown& breakdown, std::size_t k, std::size_t n);

/// Hubert-Arabie adjusted Rand index between two partitions, in [-1, 1].
double corrected_rand(const Partition& a, const Partition& b);

/// Fraction of correctly classified objects under the best cluster-label
/// matching (exhaustive over label maps; supports up to 10 clusters).
double accuracy(const Partition& pred, const Partition& truth);

}  // namespace histoclust

#endif
