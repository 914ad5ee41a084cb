#ifndef HISTOCLUST_WASSERSTEIN_HPP
#define HISTOCLUST_WASSERSTEIN_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "histoclust/histogram.hpp"

namespace histoclust {

enum class Scheme { Standard, GcAwd, CdcAwd };

std::string scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);

/// Per-variable, per-component distance weights. One row per component for
/// GC-AWD, K rows for CDC-AWD, no rows for the standard distance (all
/// weights implicitly 1). Every row multiplies to 1 across the p variables.
struct WeightSystem {
    Scheme scheme = Scheme::Standard;
    std::vector<std::vector<double>> mean_weights;
    std::vector<std::vector<double>> disp_weights;

    static WeightSystem unit(Scheme s, std::size_t clusters, std::size_t p);

    double mean_weight(std::size_t k, std::size_t j) const;
    double disp_weight(std::size_t k, std::size_t j) const;

    /// Checks positivity and the product-1 restriction on every row.
    void validate(double tol = 1e-9) const;
};

/// Split of the squared distance into squared mean gap (location), squared
/// std gap (size) and the residual shape term 2*s1*s2*(1 - r_qq).
struct DistanceDecomposition {
    double location = 0.0;
    double size = 0.0;
    double shape = 0.0;
    double total = 0.0;
    double r_qq = 1.0;
};

/// Squared L2-Wasserstein distance, exact piecewise-quadratic quadrature
/// over the common refinement of the two quantile functions.
double dist2(const Histogram& h1, const Histogram& h2);

/// Squared distance between the mean-centered histograms, i.e. the
/// dispersion component dist2(h1, h2) - (mean1 - mean2)^2, computed
/// directly so no cancellation occurs.
double centered_dist2(const Histogram& h1, const Histogram& h2);

/// QQ-plot correlation of the two quantile functions, in (0, 1] for
/// non-degenerate histograms (clamped to [-1, 1] against rounding).
/// Throws ZeroDispersion when either std is zero.
double r_qq(const Histogram& h1, const Histogram& h2);

DistanceDecomposition decompose(const Histogram& h1, const Histogram& h2);

/// Sum of per-variable squared distances between two object descriptions.
double multivar_dist2(const std::vector<Histogram>& a, const std::vector<Histogram>& b);

/// Component-weighted squared distance between an object and a prototype.
/// The weight rows are selected by the scheme (and by k for CDC-AWD);
/// Standard reduces to multivar_dist2.
double adaptive_dist2(const std::vector<Histogram>& a, const std::vector<Histogram>& g,
                      const WeightSystem& w, std::size_t k);

}  // namespace histoclust

#endif
