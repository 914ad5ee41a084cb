#include "histoclust/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace histoclust {

double InertiaTensor::total() const {
    return std::accumulate(v_.begin(), v_.end(), 0.0);
}

double InertiaTensor::component_total(Component c) const {
    double acc = 0.0;
    for (std::size_t j = 0; j < p_; ++j)
        for (std::size_t k = 0; k < k_; ++k) acc += at(c, j, k);
    return acc;
}

double InertiaTensor::variable_total(std::size_t j) const {
    double acc = 0.0;
    for (std::size_t c = 0; c < kComponents; ++c)
        for (std::size_t k = 0; k < k_; ++k) acc += at(static_cast<Component>(c), j, k);
    return acc;
}

double InertiaTensor::cluster_total(std::size_t k) const {
    double acc = 0.0;
    for (std::size_t c = 0; c < kComponents; ++c)
        for (std::size_t j = 0; j < p_; ++j) acc += at(static_cast<Component>(c), j, k);
    return acc;
}

double InertiaTensor::component_variable(Component c, std::size_t j) const {
    double acc = 0.0;
    for (std::size_t k = 0; k < k_; ++k) acc += at(c, j, k);
    return acc;
}

double InertiaTensor::component_cluster(Component c, std::size_t k) const {
    double acc = 0.0;
    for (std::size_t j = 0; j < p_; ++j) acc += at(c, j, k);
    return acc;
}

double InertiaTensor::variable_cluster(std::size_t j, std::size_t k) const {
    double acc = 0.0;
    for (std::size_t c = 0; c < kComponents; ++c) acc += at(static_cast<Component>(c), j, k);
    return acc;
}

std::vector<Histogram> general_prototype(const HistogramMatrix& matrix,
                                         const ClusteringResult& result) {
    const std::size_t n = matrix.n();
    const std::size_t p = matrix.p();

    if (result.weights.scheme != Scheme::CdcAwd) {
        std::vector<std::size_t> all(n);
        std::iota(all.begin(), all.end(), 0);
        std::vector<Histogram> g;
        g.reserve(p);
        for (std::size_t j = 0; j < p; ++j) g.push_back(compute_prototype(matrix, all, j));
        return g;
    }

    // CDC-AWD: cluster-weighted averages, separately for the mean and the
    // centered (dispersion) component.
    const auto sizes = result.partition.sizes();
    const std::size_t kk = result.partition.k;
    std::vector<Histogram> g;
    g.reserve(p);
    for (std::size_t j = 0; j < p; ++j) {
        double mean_norm = 0.0, disp_norm = 0.0;
        for (std::size_t k = 0; k < kk; ++k) {
            mean_norm += static_cast<double>(sizes[k]) * result.weights.mean_weight(k, j);
            disp_norm += static_cast<double>(sizes[k]) * result.weights.disp_weight(k, j);
        }

        std::vector<double> grid;
        for (std::size_t i = 0; i < n; ++i) {
            const auto& t = matrix.cell(i, j).knot_t();
            grid.insert(grid.end(), t.begin(), t.end());
        }
        std::sort(grid.begin(), grid.end());
        grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

        double mean_e = 0.0;
        std::vector<double> q(grid.size(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t k = result.partition.assignment[i];
            const auto& h = matrix.cell(i, j);
            mean_e += result.weights.mean_weight(k, j) / mean_norm * h.mean();
            const double cd = result.weights.disp_weight(k, j) / disp_norm;
            for (std::size_t s = 0; s < grid.size(); ++s)
                q[s] += cd * (h.quantile(grid[s]) - h.mean());
        }
        for (double& v : q) v += mean_e;
        g.push_back(Histogram::from_knots(std::move(grid), std::move(q)));
    }
    return g;
}

InertiaBreakdown inertia(const HistogramMatrix& matrix, const ClusteringResult& result) {
    const std::size_t p = matrix.p();
    const std::size_t kk = result.partition.k;

    InertiaBreakdown b;
    b.scheme = result.weights.scheme;
    b.general_prototype = general_prototype(matrix, result);
    b.cluster_sizes = result.partition.sizes();
    b.tss = InertiaTensor(p, kk);
    b.wss = InertiaTensor(p, kk);
    b.bss = InertiaTensor(p, kk);

    for (std::size_t i = 0; i < matrix.n(); ++i) {
        const std::size_t k = result.partition.assignment[i];
        for (std::size_t j = 0; j < p; ++j) {
            const auto& y = matrix.cell(i, j);
            const auto& gk = result.prototypes[k][j];
            const auto& ge = b.general_prototype[j];
            const double lm = result.weights.mean_weight(k, j);
            const double ld = result.weights.disp_weight(k, j);
            const double dk = y.mean() - gk.mean();
            const double de = y.mean() - ge.mean();
            b.wss.at(Component::Mean, j, k) += lm * dk * dk;
            b.wss.at(Component::Dispersion, j, k) += ld * centered_dist2(y, gk);
            b.tss.at(Component::Mean, j, k) += lm * de * de;
            b.tss.at(Component::Dispersion, j, k) += ld * centered_dist2(y, ge);
        }
    }
    for (std::size_t k = 0; k < kk; ++k) {
        const double nk = static_cast<double>(b.cluster_sizes[k]);
        for (std::size_t j = 0; j < p; ++j) {
            const auto& gk = result.prototypes[k][j];
            const auto& ge = b.general_prototype[j];
            const double dm = gk.mean() - ge.mean();
            b.bss.at(Component::Mean, j, k) += result.weights.mean_weight(k, j) * nk * dm * dm;
            b.bss.at(Component::Dispersion, j, k) +=
                result.weights.disp_weight(k, j) * nk * centered_dist2(gk, ge);
        }
    }
    return b;
}

namespace {

constexpr double kTssFloor = 1e-12;

std::optional<double> ratio(double bss, double tss) {
    if (tss < kTssFloor) return std::nullopt;
    return bss / tss;
}

}  // namespace

QpiReport qpi(const InertiaBreakdown& b) {
    const std::size_t p = b.tss.p();
    const std::size_t kk = b.tss.clusters();
    QpiReport r;

    const auto fill_component = [&](Component c, QpiReport::ComponentBlock& blk) {
        blk.cell.assign(p, std::vector<std::optional<double>>(kk));
        for (std::size_t j = 0; j < p; ++j)
            for (std::size_t k = 0; k < kk; ++k)
                blk.cell[j][k] = ratio(b.bss.at(c, j, k), b.tss.at(c, j, k));
        blk.per_cluster.resize(kk);
        for (std::size_t k = 0; k < kk; ++k)
            blk.per_cluster[k] = ratio(b.bss.component_cluster(c, k), b.tss.component_cluster(c, k));
        blk.per_variable.resize(p);
        for (std::size_t j = 0; j < p; ++j)
            blk.per_variable[j] = ratio(b.bss.component_variable(c, j), b.tss.component_variable(c, j));
        blk.global = ratio(b.bss.component_total(c), b.tss.component_total(c));
    };
    fill_component(Component::Mean, r.mean);
    fill_component(Component::Dispersion, r.dispersion);

    r.combined.cell.assign(p, std::vector<std::optional<double>>(kk));
    for (std::size_t j = 0; j < p; ++j)
        for (std::size_t k = 0; k < kk; ++k)
            r.combined.cell[j][k] = ratio(b.bss.variable_cluster(j, k), b.tss.variable_cluster(j, k));
    r.combined.per_cluster.resize(kk);
    for (std::size_t k = 0; k < kk; ++k)
        r.combined.per_cluster[k] = ratio(b.bss.cluster_total(k), b.tss.cluster_total(k));
    r.combined.per_variable.resize(p);
    for (std::size_t j = 0; j < p; ++j)
        r.combined.per_variable[j] = ratio(b.bss.variable_total(j), b.tss.variable_total(j));
    r.combined.global = ratio(b.bss.total(), b.tss.total());

    r.global_qpi = b.tss.total() > 0.0 ? b.bss.total() / b.tss.total() : 0.0;
    return r;
}

double ch_index(const InertiaBreakdown& b, std::size_t k, std::size_t n) {
    if (k < 2 || k >= n)
        throw DegenerateK("CH needs 2 <= K < n, got K = " + std::to_string(k) + ", n = " +
                          std::to_string(n));
    const double bss = b.bss.total();
    const double wss = b.wss.total();
    if (wss <= 0.0) return std::numeric_limits<double>::infinity();
    return (bss / static_cast<double>(k - 1)) / (wss / static_cast<double>(n - k));
}

namespace {

double choose2(double m) { return m * (m - 1.0) / 2.0; }

}  // namespace

double corrected_rand(const Partition& a, const Partition& b) {
    if (a.assignment.size() != b.assignment.size())
        throw LengthMismatch("partitions have different lengths");
    const std::size_t n = a.assignment.size();
    const std::size_t ka = a.k, kb = b.k;

    std::vector<std::vector<double>> cnt(ka, std::vector<double>(kb, 0.0));
    std::vector<double> row(ka, 0.0), col(kb, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        cnt[a.assignment[i]][b.assignment[i]] += 1.0;
        row[a.assignment[i]] += 1.0;
        col[b.assignment[i]] += 1.0;
    }
    double sum_ij = 0.0, sum_i = 0.0, sum_j = 0.0;
    for (std::size_t i = 0; i < ka; ++i)
        for (std::size_t j = 0; j < kb; ++j) sum_ij += choose2(cnt[i][j]);
    for (double v : row) sum_i += choose2(v);
    for (double v : col) sum_j += choose2(v);

    const double expected = sum_i * sum_j / choose2(static_cast<double>(n));
    const double max_index = 0.5 * (sum_i + sum_j);
    if (max_index == expected) return 1.0;  // both partitions trivial
    return (sum_ij - expected) / (max_index - expected);
}

double accuracy(const Partition& pred, const Partition& truth) {
    if (pred.assignment.size() != truth.assignment.size())
        throw LengthMismatch("partitions have different lengths");
    const std::size_t n = pred.assignment.size();
    const std::size_t m = std::max(pred.k, truth.k);
    if (m > 10) throw Error("accuracy label matching supports at most 10 clusters");

    std::vector<std::vector<double>> cnt(m, std::vector<double>(m, 0.0));
    for (std::size_t i = 0; i < n; ++i) cnt[pred.assignment[i]][truth.assignment[i]] += 1.0;

    std::vector<std::size_t> perm(m);
    std::iota(perm.begin(), perm.end(), 0);
    double best = 0.0;
    do {
        double hits = 0.0;
        for (std::size_t r = 0; r < m; ++r) hits += cnt[r][perm[r]];
        best = std::max(best, hits);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best / static_cast<double>(n);
}

}  // namespace histoclust
