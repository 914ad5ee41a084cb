#ifndef HISTOCLUST_TEST_HELPERS_HPP
#define HISTOCLUST_TEST_HELPERS_HPP

#include <cmath>
#include <random>
#include <vector>

#include "histoclust/histogram.hpp"

namespace histoclust::testutil {

/// Random histogram with 2..30 bins on a random support, random positive
/// weights normalized to 1.
inline Histogram random_histogram(std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> nbins(2, 30);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const std::size_t m = nbins(rng);

    const double start = -10.0 + 20.0 * unif(rng);
    std::vector<double> widths(m), weights(m);
    double wsum = 0.0;
    for (std::size_t h = 0; h < m; ++h) {
        widths[h] = 0.05 + 3.0 * unif(rng);
        weights[h] = 0.05 + unif(rng);
        wsum += weights[h];
    }
    std::vector<Bin> bins;
    double lo = start;
    for (std::size_t h = 0; h < m; ++h) {
        bins.push_back({lo, lo + widths[h], weights[h] / wsum});
        lo += widths[h];
    }
    return Histogram::from_bins(std::move(bins));
}

inline Histogram shifted(const Histogram& h, double c) {
    std::vector<Bin> bins = h.bins();
    for (Bin& b : bins) {
        b.lower += c;
        b.upper += c;
    }
    return Histogram::from_bins(std::move(bins));
}

/// Trapezoidal oracle for the squared L2-Wasserstein distance on a dense
/// t-grid; independent of the closed-form quadrature under test.
inline double dist2_trapezoid(const Histogram& h1, const Histogram& h2, std::size_t points) {
    double acc = 0.0;
    double prev = 0.0;
    for (std::size_t i = 0; i < points; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(points - 1);
        const double d = h1.quantile(t) - h2.quantile(t);
        const double f = d * d;
        if (i > 0) acc += 0.5 * (prev + f) / static_cast<double>(points - 1);
        prev = f;
    }
    return acc;
}

/// Random small clustering input: n objects, p variables, grouped loosely
/// around `centers` cluster centers so partitions are non-trivial.
inline HistogramMatrix random_matrix(std::mt19937_64& rng, std::size_t n, std::size_t p,
                                     std::size_t centers) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<std::vector<Histogram>> cells;
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<Histogram> row;
        for (std::size_t j = 0; j < p; ++j) {
            Histogram h = random_histogram(rng);
            const double offset = 8.0 * static_cast<double>((i * (j + 1)) % centers);
            row.push_back(shifted(h, offset + unif(rng)));
        }
        cells.push_back(std::move(row));
        ids.push_back("o" + std::to_string(i));
    }
    std::vector<std::string> vars;
    for (std::size_t j = 0; j < p; ++j) vars.push_back("v" + std::to_string(j));
    return HistogramMatrix(std::move(vars), std::move(ids), std::move(cells));
}

inline double sample_moment(const std::vector<double>& v, int order, double mean, double sd) {
    double acc = 0.0;
    for (double x : v) acc += std::pow((x - mean) / sd, order);
    return acc / static_cast<double>(v.size());
}

struct SampleMoments {
    double mean, sd, skewness, kurtosis;
};

inline SampleMoments moments_of(const std::vector<double>& v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / static_cast<double>(v.size()));
    return {mean, sd, sample_moment(v, 3, mean, sd), sample_moment(v, 4, mean, sd)};
}

}  // namespace histoclust::testutil

#endif
