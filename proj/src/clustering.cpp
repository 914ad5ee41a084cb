#include "histoclust/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace histoclust {

std::vector<std::vector<std::size_t>> Partition::clusters() const {
    std::vector<std::vector<std::size_t>> out(k);
    for (std::size_t i = 0; i < assignment.size(); ++i) out[assignment[i]].push_back(i);
    return out;
}

std::vector<std::size_t> Partition::sizes() const {
    std::vector<std::size_t> out(k, 0);
    for (std::size_t a : assignment) ++out[a];
    return out;
}

Histogram compute_prototype(const HistogramMatrix& matrix,
                            const std::vector<std::size_t>& members, std::size_t j) {
    if (members.empty()) throw EmptyCluster();

    // Union of the members' breakpoints; between them every member is
    // linear, hence so is the mean quantile function.
    std::vector<double> grid;
    for (std::size_t i : members) {
        const auto& t = matrix.cell(i, j).knot_t();
        grid.insert(grid.end(), t.begin(), t.end());
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    std::vector<double> q(grid.size(), 0.0);
    const double inv = 1.0 / static_cast<double>(members.size());
    for (std::size_t i : members) {
        const auto& h = matrix.cell(i, j);
        for (std::size_t s = 0; s < grid.size(); ++s) q[s] += h.quantile(grid[s]);
    }
    for (double& v : q) v *= inv;
    return Histogram::from_knots(std::move(grid), std::move(q));
}

std::vector<std::vector<Histogram>> compute_prototypes(const HistogramMatrix& matrix,
                                                       const Partition& partition) {
    const auto clusters = partition.clusters();
    std::vector<std::vector<Histogram>> protos;
    protos.reserve(partition.k);
    for (const auto& members : clusters) {
        std::vector<Histogram> row;
        row.reserve(matrix.p());
        for (std::size_t j = 0; j < matrix.p(); ++j)
            row.push_back(compute_prototype(matrix, members, j));
        protos.push_back(std::move(row));
    }
    return protos;
}

namespace {

constexpr double kInertiaFloor = 1e-12;

struct ComponentInertia {
    // per cluster x variable pooled residuals for the two components
    std::vector<std::vector<double>> mean;
    std::vector<std::vector<double>> disp;
};

ComponentInertia within_inertia(const HistogramMatrix& matrix, const Partition& partition,
                                const std::vector<std::vector<Histogram>>& prototypes) {
    ComponentInertia w;
    w.mean.assign(partition.k, std::vector<double>(matrix.p(), 0.0));
    w.disp.assign(partition.k, std::vector<double>(matrix.p(), 0.0));
    for (std::size_t i = 0; i < matrix.n(); ++i) {
        const std::size_t k = partition.assignment[i];
        for (std::size_t j = 0; j < matrix.p(); ++j) {
            const auto& y = matrix.cell(i, j);
            const auto& g = prototypes[k][j];
            const double dm = y.mean() - g.mean();
            w.mean[k][j] += dm * dm;
            w.disp[k][j] += centered_dist2(y, g);
        }
    }
    return w;
}

// weight row inversely proportional to the inertia, normalized to product 1
std::vector<double> weight_row(std::vector<double> inertia) {
    for (double& v : inertia) v = std::max(v, kInertiaFloor);
    double log_sum = 0.0;
    for (double v : inertia) log_sum += std::log(v);
    const double log_gm = log_sum / static_cast<double>(inertia.size());
    std::vector<double> row(inertia.size());
    for (std::size_t j = 0; j < inertia.size(); ++j) row[j] = std::exp(log_gm - std::log(inertia[j]));
    double prod = 1.0;
    for (double v : row) prod *= v;
    const double fix = std::pow(prod, -1.0 / static_cast<double>(row.size()));
    for (double& v : row) v *= fix;
    return row;
}

std::vector<double> pooled(const std::vector<std::vector<double>>& per_cluster, std::size_t p) {
    std::vector<double> out(p, 0.0);
    for (const auto& row : per_cluster)
        for (std::size_t j = 0; j < p; ++j) out[j] += row[j];
    return out;
}

}  // namespace

WeightSystem update_weights_gc(const HistogramMatrix& matrix, const Partition& partition,
                               const std::vector<std::vector<Histogram>>& prototypes) {
    const auto w = within_inertia(matrix, partition, prototypes);
    WeightSystem ws;
    ws.scheme = Scheme::GcAwd;
    ws.mean_weights.push_back(weight_row(pooled(w.mean, matrix.p())));
    ws.disp_weights.push_back(weight_row(pooled(w.disp, matrix.p())));
    return ws;
}

WeightSystem update_weights_cdc(const HistogramMatrix& matrix, const Partition& partition,
                                const std::vector<std::vector<Histogram>>& prototypes) {
    const auto w = within_inertia(matrix, partition, prototypes);
    WeightSystem ws;
    ws.scheme = Scheme::CdcAwd;
    for (std::size_t k = 0; k < partition.k; ++k) {
        ws.mean_weights.push_back(weight_row(w.mean[k]));
        ws.disp_weights.push_back(weight_row(w.disp[k]));
    }
    return ws;
}

Partition allocate(const HistogramMatrix& matrix,
                   const std::vector<std::vector<Histogram>>& prototypes,
                   const WeightSystem& weights) {
    Partition p;
    p.k = prototypes.size();
    p.assignment.resize(matrix.n());
    for (std::size_t i = 0; i < matrix.n(); ++i) {
        std::size_t best = 0;
        double best_d = adaptive_dist2(matrix.object(i), prototypes[0], weights, 0);
        for (std::size_t k = 1; k < prototypes.size(); ++k) {
            const double d = adaptive_dist2(matrix.object(i), prototypes[k], weights, k);
            if (d < best_d) {
                best_d = d;
                best = k;
            }
        }
        p.assignment[i] = best;
    }
    return p;
}

double criterion(const HistogramMatrix& matrix, const Partition& partition,
                 const std::vector<std::vector<Histogram>>& prototypes,
                 const WeightSystem& weights) {
    double acc = 0.0;
    for (std::size_t i = 0; i < matrix.n(); ++i)
        acc += adaptive_dist2(matrix.object(i), prototypes[partition.assignment[i]], weights,
                              partition.assignment[i]);
    return acc;
}

Partition balanced_random_partition(std::size_t n, std::size_t k, std::mt19937_64& rng) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    Partition p;
    p.k = k;
    p.assignment.resize(n);
    for (std::size_t pos = 0; pos < n; ++pos) p.assignment[order[pos]] = pos % k;
    return p;
}

namespace {

// Empty clusters keep K fixed: seed each empty cluster with the object
// farthest from its current prototype and make it the cluster's prototype,
// which cannot increase the criterion.
void repair_empty_clusters(const HistogramMatrix& matrix, Partition& partition,
                           std::vector<std::vector<Histogram>>& prototypes,
                           const WeightSystem& weights) {
    for (std::size_t k = 0; k < partition.k; ++k) {
        auto sizes = partition.sizes();
        if (sizes[k] > 0) continue;
        std::size_t worst = matrix.n();
        double worst_d = -1.0;
        for (std::size_t i = 0; i < matrix.n(); ++i) {
            const std::size_t own = partition.assignment[i];
            if (sizes[own] <= 1) continue;
            const double d = adaptive_dist2(matrix.object(i), prototypes[own], weights, own);
            if (d > worst_d) {
                worst_d = d;
                worst = i;
            }
        }
        if (worst == matrix.n()) continue;  // all clusters singletons, nothing movable
        partition.assignment[worst] = k;
        prototypes[k] = matrix.object(worst);
    }
}

ClusteringResult run_single(const HistogramMatrix& matrix, std::size_t k, Scheme scheme,
                            const DcaOptions& options, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Partition partition = balanced_random_partition(matrix.n(), k, rng);
    WeightSystem weights = WeightSystem::unit(scheme, k, matrix.p());

    ClusteringResult res;
    res.seed = seed;
    double prev = std::numeric_limits<double>::infinity();
    std::vector<std::vector<Histogram>> prototypes;

    for (std::size_t iter = 0; iter < options.max_iter; ++iter) {
        prototypes = compute_prototypes(matrix, partition);
        switch (scheme) {
            case Scheme::Standard: break;
            case Scheme::GcAwd: weights = update_weights_gc(matrix, partition, prototypes); break;
            case Scheme::CdcAwd: weights = update_weights_cdc(matrix, partition, prototypes); break;
        }
        Partition next = allocate(matrix, prototypes, weights);
        repair_empty_clusters(matrix, next, prototypes, weights);

        const double delta = criterion(matrix, next, prototypes, weights);
        res.criterion_trace.push_back(delta);
        res.iterations = iter + 1;

        const bool stable = next.assignment == partition.assignment;
        partition = std::move(next);
        if (stable || std::abs(prev - delta) < options.criterion_epsilon) {
            res.converged = true;
            break;
        }
        prev = delta;
    }

    res.partition = std::move(partition);
    res.prototypes = std::move(prototypes);
    res.weights = std::move(weights);
    res.criterion = res.criterion_trace.back();
    return res;
}

}  // namespace

ClusteringResult run_dca(const HistogramMatrix& matrix, std::size_t k, Scheme scheme,
                         const DcaOptions& options) {
    if (k < 1 || k > matrix.n())
        throw KTooLarge("k = " + std::to_string(k) + " with n = " + std::to_string(matrix.n()));
    if (options.max_iter < 1 || options.restarts < 1)
        throw Error("max_iter and restarts must be >= 1");

    ClusteringResult best;
    for (std::size_t r = 0; r < options.restarts; ++r) {
        ClusteringResult cur = run_single(matrix, k, scheme, options, options.seed + r);
        if (r == 0 || cur.criterion < best.criterion) best = std::move(cur);
    }
    best.restarts_run = options.restarts;
    return best;
}

}  // namespace histoclust
