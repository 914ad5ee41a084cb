#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "histoclust/histogram.hpp"
#include "helpers.hpp"

using namespace histoclust;
using testutil::random_histogram;

namespace {

double trapezoid_mean(const Histogram& h, std::size_t points) {
    double acc = 0.0, prev = 0.0;
    for (std::size_t i = 0; i < points; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(points - 1);
        const double f = h.quantile(t);
        if (i > 0) acc += 0.5 * (prev + f) / static_cast<double>(points - 1);
        prev = f;
    }
    return acc;
}

double trapezoid_second_moment(const Histogram& h, std::size_t points) {
    double acc = 0.0, prev = 0.0;
    for (std::size_t i = 0; i < points; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(points - 1);
        const double q = h.quantile(t);
        const double f = q * q;
        if (i > 0) acc += 0.5 * (prev + f) / static_cast<double>(points - 1);
        prev = f;
    }
    return acc;
}

}  // namespace

TEST_CASE("single uniform bin has analytic moments") {
    const auto h = Histogram::from_bins({{0.0, 1.0, 1.0}});
    CHECK(h.mean() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(h.stddev() == doctest::Approx(1.0 / std::sqrt(12.0)).epsilon(1e-12));
    CHECK(h.bin_count() == 1);
}

TEST_CASE("two-bin mean matches weighted midpoints and numeric integration") {
    const auto h = Histogram::from_bins({{0.0, 1.0, 0.5}, {1.0, 3.0, 0.5}});
    CHECK(h.mean() == doctest::Approx(1.25).epsilon(1e-12));
    CHECK(h.mean() == doctest::Approx(trapezoid_mean(h, 100001)).epsilon(1e-8));
}

TEST_CASE("bin validation") {
    CHECK_THROWS_AS(Histogram::from_bins({{0.0, 1.0, 0.6}, {2.0, 3.0, 0.4}}), NonContiguousBins);
    CHECK_THROWS_AS(Histogram::from_bins({{0.0, 1.0, 0.0}}), NonPositiveWeight);
    CHECK_THROWS_AS(Histogram::from_bins({{0.0, 1.0, -0.2}, {1.0, 2.0, 1.2}}), NonPositiveWeight);
    CHECK_THROWS_AS(Histogram::from_bins({{1.0, 0.5, 1.0}}), NonContiguousBins);
    CHECK_THROWS_AS(Histogram::from_bins({}), EmptyBins);
    CHECK_THROWS_AS(Histogram::from_bins({{0.0, 1.0, 0.6}, {1.0, 2.0, 0.6}}), WeightSumMismatch);
    // small deviations are repaired
    const auto h = Histogram::from_bins({{0.0, 1.0, 0.5 + 2e-7}, {1.0, 2.0, 0.5}});
    double sum = 0.0;
    for (const auto& b : h.bins()) sum += b.weight;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("equi-depth construction puts boundaries at empirical quantiles") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> samples(1000);
    for (double& v : samples) v = unif(rng);

    const auto h = Histogram::from_samples(samples, 10);
    CHECK(h.bin_count() == 10);
    std::sort(samples.begin(), samples.end());
    const auto bins = h.bins();
    for (std::size_t j = 0; j < 10; ++j) {
        CHECK(bins[j].weight == doctest::Approx(0.1).epsilon(1e-12));
        // boundary j/10 should be close to the corresponding order statistic
        const double pos = 0.1 * static_cast<double>(j) * 999.0;
        const double expect = samples[static_cast<std::size_t>(pos)];
        CHECK(bins[j].lower == doctest::Approx(expect).epsilon(0.01));
    }
    CHECK(h.lower_bound() == samples.front());
    CHECK(h.upper_bound() == samples.back());
}

TEST_CASE("constant samples become a single near-degenerate bin") {
    const auto h = Histogram::from_samples(std::vector<double>(50, 5.0), 7);
    CHECK(h.bin_count() == 1);
    CHECK(h.mean() == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(h.stddev() < 1e-11);
}

TEST_CASE("two samples, one bin") {
    const auto h = Histogram::from_samples({0.0, 1.0}, 1);
    CHECK(h.bin_count() == 1);
    CHECK(h.bins()[0].lower == 0.0);
    CHECK(h.bins()[0].upper == 1.0);
    CHECK(h.bins()[0].weight == doctest::Approx(1.0));
}

TEST_CASE("from_samples rejects empty input") {
    CHECK_THROWS_AS(Histogram::from_samples({}, 4), EmptySamples);
}

TEST_CASE("num_bins = n reproduces the empirical quantile function at knots") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> nd;
    std::vector<double> samples(40);
    for (double& v : samples) v = nd(rng);
    const auto h = Histogram::from_samples(samples, samples.size());
    std::sort(samples.begin(), samples.end());
    for (std::size_t j = 0; j <= samples.size(); ++j) {
        const double t = static_cast<double>(j) / static_cast<double>(samples.size());
        const double pos = t * static_cast<double>(samples.size() - 1);
        const auto lo = static_cast<std::size_t>(pos);
        const double expect =
            lo + 1 < samples.size()
                ? samples[lo] + (pos - static_cast<double>(lo)) * (samples[lo + 1] - samples[lo])
                : samples.back();
        CHECK(h.quantile(t) == doctest::Approx(expect).epsilon(1e-9));
    }
}

TEST_CASE("quantile basics") {
    const auto u = Histogram::from_bins({{0.0, 1.0, 1.0}});
    CHECK(u.quantile(0.25) == doctest::Approx(0.25).epsilon(1e-12));
    const auto h = Histogram::from_bins({{0.0, 1.0, 0.5}, {1.0, 3.0, 0.5}});
    CHECK(h.quantile(0.75) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(h.quantile(0.0) == 0.0);
    CHECK(h.quantile(1.0) == 3.0);
    CHECK_THROWS_AS(h.quantile(-0.01), OutOfDomain);
    CHECK_THROWS_AS(h.quantile(1.01), OutOfDomain);
}

TEST_CASE("quantile is non-decreasing and weights sum to 1 on random histograms") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const auto h = random_histogram(rng);
        double sum = 0.0;
        for (const auto& b : h.bins()) sum += b.weight;
        CHECK(std::abs(sum - 1.0) < 1e-9);
        double prev = h.quantile(0.0);
        for (int i = 1; i <= 1000; ++i) {
            const double q = h.quantile(static_cast<double>(i) / 1000.0);
            CHECK(q >= prev - 1e-12);
            prev = q;
        }
    }
}

TEST_CASE("moments match trapezoidal integration on random histograms") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const auto h = random_histogram(rng);
        const double m1 = trapezoid_mean(h, 100001);
        const double m2 = trapezoid_second_moment(h, 100001);
        const double sd = std::sqrt(std::max(0.0, m2 - m1 * m1));
        CHECK(h.mean() == doctest::Approx(m1).epsilon(1e-6));
        CHECK(h.stddev() == doctest::Approx(sd).epsilon(1e-6));
    }
}

TEST_CASE("uniform[0,2] moments") {
    const auto h = Histogram::from_bins({{0.0, 2.0, 1.0}});
    CHECK(h.mean() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(h.stddev() == doctest::Approx(2.0 / std::sqrt(12.0)).epsilon(1e-12));
}

TEST_CASE("centering") {
    const auto u = Histogram::from_bins({{0.0, 1.0, 1.0}}).centered();
    CHECK(u.lower_bound() == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(u.upper_bound() == doctest::Approx(0.5).epsilon(1e-12));

    const auto h = Histogram::from_bins({{0.0, 1.0, 0.5}, {1.0, 3.0, 0.5}});
    const auto c = h.centered();
    CHECK(std::abs(c.mean()) < 1e-9);
    CHECK(c.stddev() == doctest::Approx(h.stddev()).epsilon(1e-9));
    CHECK(c.lower_bound() == doctest::Approx(-1.25).epsilon(1e-12));

    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        const auto r = random_histogram(rng);
        const auto rc = r.centered();
        CHECK(std::abs(rc.mean()) < 1e-9);
        CHECK(rc.stddev() == doctest::Approx(r.stddev()).epsilon(1e-9));
        const auto rcc = rc.centered();
        for (std::size_t i = 0; i < rc.knot_q().size(); ++i)
            CHECK(rcc.knot_q()[i] == doctest::Approx(rc.knot_q()[i]).epsilon(1e-9));
    }
}

TEST_CASE("common refinement merges cumulative-weight breakpoints") {
    const auto h1 = Histogram::from_bins({{0.0, 1.0, 0.5}, {1.0, 2.0, 0.5}});
    const auto h2 = Histogram::from_bins({{0.0, 1.0, 0.3}, {1.0, 2.0, 0.7}});
    const auto r = common_refinement(h1, h2);
    REQUIRE(r.breaks.size() == 4);
    CHECK(r.breaks[0] == 0.0);
    CHECK(r.breaks[1] == doctest::Approx(0.3));
    CHECK(r.breaks[2] == doctest::Approx(0.5));
    CHECK(r.breaks[3] == 1.0);

    const auto same = common_refinement(h1, h1);
    CHECK(same.breaks == h1.knot_t());
}

TEST_CASE("equi-depth 10-bin vs 4-bin refinement has 12 sub-intervals") {
    // union of breakpoints {0,.1,...,1} and {0,.25,.5,.75,1} has 13 points
    std::mt19937_64 rng(17);
    std::normal_distribution<double> nd;
    std::vector<double> s1(500), s2(500);
    for (double& v : s1) v = nd(rng);
    for (double& v : s2) v = nd(rng) + 1.0;
    const auto h1 = Histogram::from_samples(s1, 10);
    const auto h2 = Histogram::from_samples(s2, 4);
    const auto r = common_refinement(h1, h2);
    CHECK(r.size() == 12);
}

TEST_CASE("refinement segments reproduce both quantile functions") {
    std::mt19937_64 rng(19);
    for (int trial = 0; trial < 20; ++trial) {
        const auto h1 = random_histogram(rng);
        const auto h2 = random_histogram(rng);
        const auto r = common_refinement(h1, h2);
        CHECK(r.breaks.front() == 0.0);
        CHECK(r.breaks.back() == 1.0);
        for (std::size_t s = 0; s < r.size(); ++s) {
            const double mid = 0.5 * (r.breaks[s] + r.breaks[s + 1]);
            const double off = mid - r.breaks[s];
            CHECK(r.a[s].offset + r.a[s].slope * off ==
                  doctest::Approx(h1.quantile(mid)).epsilon(1e-9));
            CHECK(r.b[s].offset + r.b[s].slope * off ==
                  doctest::Approx(h2.quantile(mid)).epsilon(1e-9));
        }
    }
}

TEST_CASE("matrix shape validation") {
    const auto u = Histogram::from_bins({{0.0, 1.0, 1.0}});
    CHECK_THROWS_AS(HistogramMatrix({"v0"}, {"a"}, {{u, u}}), Error);
    CHECK_THROWS_AS(HistogramMatrix({}, {}, {}), Error);
    const HistogramMatrix m({"v0", "v1"}, {"a"}, {{u, u}});
    CHECK(m.n() == 1);
    CHECK(m.p() == 2);
}
