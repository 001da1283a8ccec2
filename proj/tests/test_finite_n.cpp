#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "bimf/finite_n.hpp"
#include "oracles.hpp"

using namespace bimf;

namespace {
ReducedParams family1(double t, double b) { return make_reduced(1.0 + b, b, t); }
}

TEST_CASE("exact_pressure: beta = 0 collapses to ln 2") {
    std::mt19937 rng(606);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int i = 0; i < 10; ++i) {
        ModelParams p;
        p.j11 = u(rng);
        p.j12 = u(rng);
        p.j22 = u(rng);
        p.h1 = u(rng);
        p.h2 = u(rng);
        p.beta = 0.0;
        for (auto [n1, n2] : {std::pair{3, 5}, {100, 100}, {37, 163}})
            CHECK(std::abs(exact_pressure({n1, n2, p}) - std::numbers::ln2) < 1e-12);
    }
}

TEST_CASE("exact_pressure: matches the literal configuration sum for tiny systems") {
    // pinned smallest case: one spin per population
    const ModelParams p0 = to_model_params(family1(0.75, -0.8));
    CHECK(std::abs(exact_pressure({1, 1, p0}) - oracle::brute_force_pressure(1, 1, p0)) < 1e-12);

    std::mt19937 rng(707);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    std::uniform_int_distribution<int> sz(1, 8);
    for (int i = 0; i < 25; ++i) {
        ModelParams p;
        p.j11 = u(rng);
        p.j12 = u(rng);
        p.j22 = u(rng);
        p.h1 = 0.5 * u(rng);
        p.h2 = 0.5 * u(rng);
        p.beta = std::abs(u(rng));
        const int n1 = sz(rng), n2 = sz(rng);
        p.alpha1 = double(n1) / (n1 + n2);
        CHECK(std::abs(exact_pressure({n1, n2, p}) -
                       oracle::brute_force_pressure(n1, n2, p)) < 1e-12);
    }
}

TEST_CASE("exact_pressure: global and sublattice spin-flip invariance") {
    std::mt19937 rng(808);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 10; ++i) {
        ModelParams p;
        p.j11 = u(rng);
        p.j12 = u(rng);
        p.j22 = u(rng);
        p.h1 = u(rng);
        p.h2 = u(rng);
        p.beta = 0.5 + std::abs(u(rng));
        const int n1 = 60, n2 = 80;
        p.alpha1 = double(n1) / (n1 + n2);
        const double base = exact_pressure({n1, n2, p});

        ModelParams flip_all = p;
        flip_all.h1 = -p.h1;
        flip_all.h2 = -p.h2;
        CHECK(std::abs(exact_pressure({n1, n2, flip_all}) - base) < 1e-12);

        ModelParams flip_one = p;
        flip_one.j12 = -p.j12;
        flip_one.h1 = -p.h1;
        CHECK(std::abs(exact_pressure({n1, n2, flip_one}) - base) < 1e-12);
    }
}

TEST_CASE("exact_pressure: thread count does not change the result") {
    const ModelParams p = to_model_params(family1(0.75, -0.8));
    const double p1 = exact_pressure({150, 250, p}, 1);
    const double p2 = exact_pressure({150, 250, p}, 2);
    const double p4 = exact_pressure({150, 250, p}, 4);
    CHECK(p1 == p2);
    CHECK(p1 == p4);
}

TEST_CASE("exact_pressure: error paths") {
    const ModelParams p = to_model_params(family1(0.75, -0.8));
    CHECK_THROWS_AS(exact_pressure({0, 5, p}), domain_error);
    CHECK_THROWS_AS(exact_pressure({15000, 15000, p}), resource_error);
}

TEST_CASE("sector-count bounds: exhaustive check up to n = 1000") {
    double worst_upper = 1e300;
    double worst_lower = 1e300;
    for (int n = 1; n <= 1000; ++n) {
        const SectorBoundsReport rep = check_sector_bounds(n, 2.0);
        CHECK(rep.violations_upper == 0);
        CHECK(rep.violations_lower == 0);
        worst_upper = std::min(worst_upper, rep.worst_upper_slack);
        worst_lower = std::min(worst_lower, rep.worst_lower_slack);
    }
    CHECK(worst_upper >= 0.0);
    CHECK(worst_lower >= 0.0);
}

TEST_CASE("sector-count bounds: C = 2 is the smallest passing integer") {
    CHECK(smallest_sector_bound_constant(1000) == 2);
    // C = 1 must fail somewhere (n = 2, mu = 0 is the tight sector)
    int violations = 0;
    for (int n = 1; n <= 50; ++n) violations += check_sector_bounds(n, 1.0).violations_lower;
    CHECK(violations > 0);
}

TEST_CASE("sector-count bounds: central slack follows the Stirling prediction") {
    // at mu = 0 the upper-bound slack approaches ln(sqrt(pi n / 2))
    for (int n : {200, 500, 1000}) {
        const double log_central = std::lgamma(n + 1.0) - 2.0 * std::lgamma(n / 2 + 1.0);
        const double slack_center = n * std::numbers::ln2 - log_central;
        const double predicted = 0.5 * std::log(std::numbers::pi * n / 2.0);
        CHECK(std::abs(slack_center - predicted) < 0.01);
        // the worst slack over all sectors is tighter than the central one
        CHECK(check_sector_bounds(n, 2.0).worst_upper_slack < slack_center);
    }
}

TEST_CASE("convergence_study: beta = 0 has zero residual") {
    ModelParams p;
    p.j11 = 1.0;
    p.j12 = -1.0;
    p.j22 = 1.0;
    p.beta = 0.0;
    for (const auto& row : convergence_study(p, {50, 200, 1000}))
        CHECK(std::abs(row.residual) < 1e-12);
}

TEST_CASE("convergence_study: residuals shrink inside the envelope") {
    const ModelParams p = to_model_params(family1(0.5, -0.8));
    const auto rows = convergence_study(p, {100, 1000, 10000});
    REQUIRE(rows.size() == 3);
    double prev = 1e300;
    for (const auto& row : rows) {
        CHECK(std::abs(row.residual) <= row.envelope);
        CHECK(std::abs(row.residual) < prev);
        CHECK(std::abs(row.residual) < 5.0 * std::log((double)row.n) / row.n);
        prev = std::abs(row.residual);
    }
}

TEST_CASE("exact_pressure: sandwich envelope at two thousand spins per population") {
    const ModelParams p = to_model_params(family1(0.75, -0.8));
    const auto rows = convergence_study(p, {4000});
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].n1 == 2000);
    CHECK(rows[0].n2 == 2000);
    CHECK(std::abs(rows[0].residual) < rows[0].envelope);
}

TEST_CASE("convergence_study: odd sizes split nearest to alpha") {
    ModelParams p = to_model_params(family1(0.75, -0.8));
    p.alpha1 = 0.3;
    const auto rows = convergence_study(p, {11});
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].n1 == 3);
    CHECK(rows[0].n2 == 8);
}
