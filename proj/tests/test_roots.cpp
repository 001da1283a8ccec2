#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bimf/roots.hpp"
#include "oracles.hpp"

using namespace bimf;

TEST_CASE("x_tilde: pinned values against the bisection oracle") {
    // frozen from the long-double bisection oracle
    CHECK(std::abs(solve_x_tilde(0.75).root - 0.775516313851923163) < 1e-13);
    CHECK(std::abs(solve_x_tilde(0.5).root - 0.957504024077268741) < 1e-13);
    CHECK(std::abs(solve_x_tilde(0.999).root - 0.05475034309152836) < 1e-12);
    CHECK(solve_x_tilde(0.999).root < 0.06);
}

TEST_CASE("x_tilde: bracket, residual and the sqrt(1-t) lower bound") {
    for (double t = 0.02; t < 1.0; t += 0.0203) {
        const RootResult r = solve_x_tilde(t);
        CHECK(r.residual < 1e-12);
        CHECK(r.root > std::sqrt(1.0 - t));
        CHECK(r.root < 1.0);
        CHECK(r.bracket_lo < r.root);
        CHECK(r.root < r.bracket_hi);
        CHECK(std::abs(r.root - std::tanh(r.root / t)) < 1e-12);
        CHECK(std::abs(r.root - (double)oracle::x_tilde_ld(t)) < 1e-11);
    }
}

TEST_CASE("x_tilde: strictly decreasing in t, limits at both ends") {
    double prev = 2.0;
    for (double t = 0.05; t < 1.0; t += 0.05) {
        const double root = solve_x_tilde(t).root;
        CHECK(root < prev);
        prev = root;
    }
    CHECK(solve_x_tilde(1e-4).root > 1.0 - 1e-12); // tends to one
    CHECK(solve_x_tilde(0.9999).root < 0.02);      // tends to zero
}

TEST_CASE("x_tilde: no positive root at or above t = 1") {
    CHECK_THROWS_AS(solve_x_tilde(1.0), no_root_error);
    CHECK_THROWS_AS(solve_x_tilde(1.7), no_root_error);
    CHECK_THROWS_AS(solve_x_tilde(0.0), domain_error);
    CHECK_THROWS_AS(solve_x_tilde(-0.5), domain_error);
}

TEST_CASE("x_hat: pinned value and consistency with the effective temperature") {
    const RootResult r = solve_x_hat(0.25, -0.3);
    CHECK(std::abs(r.root - 0.890643478561100506) < 1e-13); // frozen oracle value
    CHECK(r.residual < 1e-12);
    // the equation reduces to the x_tilde equation at t/(1+2b)
    CHECK(solve_x_hat(0.3, -0.3).root ==
          doctest::Approx(solve_x_tilde(0.75).root).epsilon(1e-14));
}

TEST_CASE("x_hat: positivity window, lower bound, residual of the stated equation") {
    for (double b = -0.45; b < -0.01; b += 0.04) {
        const double ratio = 1.0 + 2.0 * b;
        for (double t = 0.1 * ratio; t < ratio; t += 0.22 * ratio) {
            const RootResult r = solve_x_hat(t, b);
            CHECK(r.residual < 1e-12);
            CHECK(r.root > std::sqrt(1.0 - t / ratio));
            CHECK(std::abs(r.root - std::tanh(ratio * r.root / t)) < 1e-12);
            CHECK(std::abs(r.root - (double)oracle::x_hat_ld(t, b)) < 1e-11);
        }
    }
}

TEST_CASE("x_hat: error paths") {
    CHECK_THROWS_AS(solve_x_hat(0.5, -0.3), no_root_error);  // t >= 1 + 2b
    CHECK_THROWS_AS(solve_x_hat(0.4, -0.3), no_root_error);  // boundary
    CHECK_THROWS_AS(solve_x_hat(0.1, -0.6), unsupported_case_error);
    CHECK_THROWS_AS(solve_x_hat(0.1, -0.5), unsupported_case_error);
    CHECK_THROWS_AS(solve_x_hat(0.1, 0.2), domain_error);
}

TEST_CASE("t_check: pinned value and figure-consistent bounds") {
    const RootResult r = solve_t_check(-0.3);
    CHECK(std::abs(r.root - 0.268114072804297092) < 1e-13); // frozen oracle value
    CHECK(r.residual < 1e-12);
    // five points exist at t = 0.3, nine at t = 0.25
    CHECK(r.root > 0.25);
    CHECK(r.root < 0.3);
}

TEST_CASE("t_check: stays below the eigenvalue ratio; limit toward b = 0") {
    for (double b = -0.49; b < -0.005; b += 0.017) {
        const RootResult r = solve_t_check(b);
        CHECK(r.root > 0.0);
        CHECK(r.root < 1.0 + 2.0 * b);
        CHECK(r.residual < 1e-12);
        CHECK(std::abs(r.root - (double)oracle::t_check_ld(b)) < 1e-11);
    }
    CHECK(solve_t_check(-1e-4).root > 0.99); // t-check -> 1 as b -> 0
}

TEST_CASE("t_check: the solution is unique on a scan grid") {
    for (double b : {-0.45, -0.3, -0.15, -0.05}) {
        const double ratio = 1.0 + 2.0 * b;
        int sign_changes = 0;
        double prev = 0.0;
        bool have_prev = false;
        for (int i = 1; i < 2000; ++i) {
            const double tc = i / 2000.0;
            const double s = std::sqrt(1.0 - tc);
            const double val = tc * atanh_guarded(s) / s - ratio;
            if (have_prev && (val < 0.0) != (prev < 0.0)) ++sign_changes;
            prev = val;
            have_prev = true;
        }
        CHECK(sign_changes == 1);
    }
    CHECK_THROWS_AS(solve_t_check(0.0), domain_error);
    CHECK_THROWS_AS(solve_t_check(-0.5), domain_error);
    CHECK_THROWS_AS(solve_t_check(0.3), domain_error);
}

TEST_CASE("branch ordering: x_tilde > x_hat wherever both exist; both -> 1 as t -> 0") {
    for (double b : {-0.45, -0.3, -0.1}) {
        const double tc = solve_t_check(b).root;
        for (int i = 1; i <= 8; ++i) {
            const double t = tc * i / 9.0;
            const double xt = solve_x_tilde(t).root;
            const double xh = solve_x_hat(t, b).root;
            // strict ordering holds until both roots collapse onto the
            // double-precision cap below 1
            if (xh < 1.0 - 1e-13)
                CHECK(xt > xh);
            else
                CHECK(xt >= xh);
        }
        CHECK(solve_x_tilde(1e-5).root > 1.0 - 1e-10);
        CHECK(solve_x_hat(1e-5, b).root > 1.0 - 1e-10);
    }
}
