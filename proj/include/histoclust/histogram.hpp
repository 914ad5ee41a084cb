#ifndef HISTOCLUST_HISTOGRAM_HPP
#define HISTOCLUST_HISTOGRAM_HPP

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "histoclust/errors.hpp"

namespace histoclust {

struct Bin {
    double lower = 0.0;
    double upper = 0.0;
    double weight = 0.0;
};

/// A histogram-valued datum: contiguous weighted bins with a uniform density
/// inside each bin, so the quantile function is piecewise linear in the
/// cumulative probability t. The knot representation (t_h, q_h) is cached at
/// construction and is what all distance computations work on.
class Histogram {
public:
    /// Validating constructor for user-supplied bins. Weights must be
    /// strictly positive and sum to 1 (repaired if off by < 1e-6), bins must
    /// be contiguous with positive width.
    static Histogram from_bins(std::vector<Bin> bins);

    /// Equi-depth construction: bin boundaries at the empirical quantiles
    /// j/num_bins, every bin carrying weight 1/num_bins. Constant samples
    /// become a single bin widened by 1e-12 * max(1, |value|).
    static Histogram from_samples(std::vector<double> samples, std::size_t num_bins);

    /// Direct construction from quantile knots. Used for prototypes (means
    /// of quantile functions) and deserialization; tolerates flat segments
    /// (zero-width bins), which arise for degenerate data.
    static Histogram from_knots(std::vector<double> t, std::vector<double> q);

    double quantile(double t) const;

    double mean() const { return mean_; }
    double stddev() const { return std_; }

    /// The same histogram shifted so its mean is 0. Std is unchanged.
    Histogram centered() const;

    std::size_t bin_count() const { return knot_t_.size() - 1; }
    std::vector<Bin> bins() const;

    const std::vector<double>& knot_t() const { return knot_t_; }
    const std::vector<double>& knot_q() const { return knot_q_; }

    double lower_bound() const { return knot_q_.front(); }
    double upper_bound() const { return knot_q_.back(); }

private:
    Histogram() = default;
    void compute_moments();

    std::vector<double> knot_t_;  // cumulative probabilities, 0 = t_0 < ... < t_H = 1
    std::vector<double> knot_q_;  // quantile values at the knots, non-decreasing
    double mean_ = 0.0;
    double std_ = 0.0;
};

/// Common refinement of two histograms' quantile functions: the merged set
/// of cumulative-probability breakpoints, with per-sub-interval linear
/// coefficients q(t) = offset + slope * (t - breaks[s]).
struct Refinement {
    struct Segment {
        double offset = 0.0;
        double slope = 0.0;
    };
    std::vector<double> breaks;
    std::vector<Segment> a;
    std::vector<Segment> b;

    std::size_t size() const { return a.size(); }
};

Refinement common_refinement(const Histogram& h1, const Histogram& h2);

/// n objects x p histogram variables, the clustering input table.
class HistogramMatrix {
public:
    HistogramMatrix(std::vector<std::string> variable_names,
                    std::vector<std::string> object_ids,
                    std::vector<std::vector<Histogram>> cells);

    std::size_t n() const { return cells_.size(); }
    std::size_t p() const { return variable_names_.size(); }

    const Histogram& cell(std::size_t i, std::size_t j) const { return cells_[i][j]; }
    const std::vector<Histogram>& object(std::size_t i) const { return cells_[i]; }

    const std::vector<std::string>& variable_names() const { return variable_names_; }
    const std::vector<std::string>& object_ids() const { return object_ids_; }

private:
    std::vector<std::string> variable_names_;
    std::vector<std::string> object_ids_;
    std::vector<std::vector<Histogram>> cells_;
};

}  // namespace histoclust

#endif
