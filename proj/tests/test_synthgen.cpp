#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "histoclust/evaluation.hpp"
#include "histoclust/synthgen.hpp"
#include "helpers.hpp"

using namespace histoclust;
using testutil::moments_of;

namespace {

void check_recovery(const MomentSpec& spec, std::size_t n = 100000) {
    std::mt19937_64 rng(999);
    const auto samples = pearson_sample(spec, n, rng);
    const auto m = moments_of(samples);
    CHECK(std::abs(m.mean - spec.mean) < 3.0 * spec.std / std::sqrt(static_cast<double>(n)) + 1e-9);
    CHECK(std::abs(m.sd - spec.std) < 0.05 * spec.std);
    CHECK(std::abs(m.skewness - spec.skewness) < 0.1);
    CHECK(std::abs(m.kurtosis - spec.kurtosis) < 0.3);
}

}  // namespace

TEST_CASE("feasibility") {
    CHECK((MomentSpec{0, 1, 0, 3}.feasible()));
    CHECK_FALSE((MomentSpec{0, 1, 2, 4}.feasible()));
    CHECK_FALSE((MomentSpec{0, 0, 0, 3}.feasible()));
    const MomentSpec infeasible{0, 1, 2, 4};
    CHECK_THROWS_AS(infeasible.validate(), InfeasibleMoments);
    std::mt19937_64 rng(1);
    CHECK_THROWS_AS(pearson_sample({0, 1, 2, 4}, 10, rng), InfeasibleMoments);
}

TEST_CASE("type selection on the skewness/kurtosis plane") {
    CHECK(pearson_type({0, 1, 0, 3}) == PearsonType::Normal);
    CHECK(pearson_type({0, 1, 0, 1.8}) == PearsonType::II);
    CHECK(pearson_type({0, 1, 0, 4.0}) == PearsonType::VII);
    CHECK(pearson_type({0, 1, 1.0, 4.5}) == PearsonType::III);  // 2k - 3s^2 - 6 = 0
    CHECK(pearson_type({0, 1, 0.8, 2.8}) == PearsonType::I);
    CHECK(pearson_type({0, 1, 0.5, 4.0}) == PearsonType::IV);
    CHECK(pearson_type({0, 1, 2.0, 10.0}) == PearsonType::VI);
}

TEST_CASE("moment recovery per reachable type") {
    check_recovery({0, 1, 0, 3});           // Normal
    check_recovery({0, 1, 0, 1.8});         // II
    check_recovery({0, 1, 0, 2.5});         // II, milder
    check_recovery({0, 1, 0, 4.0});         // VII
    check_recovery({0, 1, 1.0, 4.5});       // III (gamma)
    check_recovery({0, 1, -1.0, 4.5});      // III mirrored
    check_recovery({0, 1, 0.8, 2.8});       // I (beta)
    check_recovery({0, 1, -0.8, 2.8});      // I mirrored
    check_recovery({0, 1, 0.5, 4.0});       // IV
    check_recovery({0, 1, -0.5, 4.0});      // IV mirrored
    check_recovery({0, 1, 2.0, 10.0});      // VI
    check_recovery({0, 1, -2.0, 10.0});     // VI mirrored
    check_recovery({5, 2, 0.1, 3.1});       // shifted/scaled near-normal (IV)
}

TEST_CASE("negative skewness flips the sampled distribution") {
    std::mt19937_64 rng(5);
    const auto pos = pearson_sample({0, 1, 0.8, 2.8}, 50000, rng);
    std::mt19937_64 rng2(5);
    const auto neg = pearson_sample({0, 1, -0.8, 2.8}, 50000, rng2);
    CHECK(moments_of(pos).skewness == doctest::Approx(-moments_of(neg).skewness).epsilon(0.05));
}

TEST_CASE("experiment configs validate and have the documented shape") {
    for (const auto& c : {experiment1_config(), experiment2_config()}) {
        c.validate();
        CHECK(c.clusters() == 3);
        CHECK(c.variables() == 2);
        CHECK(c.n_per_cluster == 50);
        CHECK(c.samples_per_object == 1000);
        CHECK(c.replicates == 100);
        CHECK(c.restarts == 50);
    }
    CHECK(experiment1_config().baselines[0][0].mean.value == doctest::Approx(-4.8));
    CHECK(experiment2_config().baselines[2][1].std.value == doctest::Approx(2.8));
}

TEST_CASE("desk preset") {
    auto c = experiment1_config();
    apply_desk_preset(c);
    CHECK(c.replicates == 20);
    CHECK(c.restarts == 10);
    CHECK(c.samples_per_object == 500);
}

TEST_CASE("generated datasets are balanced, labeled and deterministic") {
    auto config = experiment1_config();
    apply_desk_preset(config);
    const auto [m1, l1] = generate_dataset(config, 3);
    CHECK(m1.n() == 150);
    CHECK(m1.p() == 2);
    auto sizes = l1.sizes();
    REQUIRE(sizes.size() == 3);
    for (auto s : sizes) CHECK(s == 50);

    const auto [m2, l2] = generate_dataset(config, 3);
    CHECK(l1.assignment == l2.assignment);
    for (std::size_t i = 0; i < m1.n(); ++i)
        for (std::size_t j = 0; j < m1.p(); ++j)
            CHECK(m1.cell(i, j).knot_q() == m2.cell(i, j).knot_q());

    const auto [m3, l3] = generate_dataset(config, 4);
    bool differs = false;
    for (std::size_t i = 0; i < m1.n() && !differs; ++i)
        differs = m1.cell(i, 0).knot_q() != m3.cell(i, 0).knot_q();
    CHECK(differs);
}

TEST_CASE("perfectly separated degenerate config recovers labels for all schemes") {
    ExperimentConfig config;
    config.baselines = {
        {{{0.0, 0.0}, {1.0, 0.0}, {0.0, 0.0}, {3.0, 0.0}}},
        {{{100.0, 0.0}, {1.0, 0.0}, {0.0, 0.0}, {3.0, 0.0}}},
    };
    config.n_per_cluster = 10;
    config.samples_per_object = 200;
    config.bins_per_histogram = 10;
    config.replicates = 1;
    config.restarts = 3;
    config.seed = 7;
    const auto summary =
        run_monte_carlo(config, {Scheme::Standard, Scheme::GcAwd, Scheme::CdcAwd});
    for (const auto& s : summary.per_scheme) {
        CHECK(s.cr_mean == doctest::Approx(1.0));
        CHECK(s.accuracy_mean == doctest::Approx(1.0));
    }
}

TEST_CASE("Monte Carlo summaries are independent of the thread count") {
    auto config = experiment1_config();
    apply_desk_preset(config);
    config.replicates = 4;
    config.restarts = 2;
    config.samples_per_object = 200;
    const auto s1 = run_monte_carlo(config, {Scheme::Standard, Scheme::GcAwd}, 1);
    const auto s2 = run_monte_carlo(config, {Scheme::Standard, Scheme::GcAwd}, 3);
    for (std::size_t i = 0; i < s1.per_scheme.size(); ++i) {
        CHECK(s1.per_scheme[i].cr == s2.per_scheme[i].cr);
        CHECK(s1.per_scheme[i].accuracy == s2.per_scheme[i].accuracy);
        CHECK(s1.per_scheme[i].cr_mean == s2.per_scheme[i].cr_mean);
    }
}

TEST_CASE("infeasible noisy draws are projected, not fatal") {
    // huge parameter noise would frequently violate kurtosis > 1 + skew^2
    ExperimentConfig config;
    config.baselines = {
        {{{0.0, 1.0}, {1.0, 0.5}, {0.0, 1.0}, {3.0, 1.5}}},
        {{{10.0, 1.0}, {1.0, 0.5}, {0.0, 1.0}, {3.0, 1.5}}},
    };
    config.n_per_cluster = 20;
    config.samples_per_object = 100;
    config.bins_per_histogram = 8;
    config.replicates = 1;
    config.restarts = 2;
    config.seed = 11;
    const auto [m, labels] = generate_dataset(config, 0);
    CHECK(m.n() == 40);
}
