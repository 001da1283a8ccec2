#pragma once

#include <cmath>
#include <functional>
#include <string>

#include "bimf/errors.hpp"
#include "bimf/model.hpp"
#include "bimf/tolerances.hpp"

namespace bimf {

/// Result of a bracketed scalar solve. The root stays strictly inside the
/// reported bracket and the residual is below tol::root_residual.
struct RootResult {
    double root = 0.0;
    double residual = 0.0;
    int iterations = 0;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
};

namespace detail {

/// Bisection to a narrow bracket, then Newton polishing. Newton steps that
/// leave the bracket fall back to bisection. F must change sign on [lo, hi].
template <class F, class DF>
RootResult hybrid_bracketed(F f, DF df, double lo, double hi, const char* what) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return {lo, 0.0, 0, lo, hi};
    if (fhi == 0.0) return {hi, 0.0, 0, lo, hi};
    if ((flo < 0.0) == (fhi < 0.0))
        throw solver_error(std::string(what) + ": no sign change on initial bracket");

    const double lo0 = lo, hi0 = hi;
    int iters = 0;
    while (hi - lo > tol::bisection_width && iters < 200) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        ++iters;
        if (fm == 0.0) return {mid, 0.0, iters, lo0, hi0};
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
    }

    double x = 0.5 * (lo + hi);
    double fx = f(x);
    for (int k = 0; k < 100 && std::abs(fx) > tol::root_residual * 0.1; ++k) {
        ++iters;
        const double d = df(x);
        double xn = (d != 0.0) ? x - fx / d : 0.5 * (lo + hi);
        if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
        const double fn = f(xn);
        // keep the sign-changing bracket tight around the iterate
        if ((fn < 0.0) == (flo < 0.0))
            lo = xn;
        else
            hi = xn;
        if (xn == x && std::abs(fn) >= std::abs(fx)) break;
        x = xn;
        fx = fn;
    }
    return {x, std::abs(fx), iters, lo0, hi0};
}

/// Positive root of x = tanh(x / teff) for teff in (0, 1). Used by both the
/// antidiagonal and the diagonal branch equations, which differ only in the
/// effective temperature. For teff small enough the root is within 1e-12 of
/// 1 and tanh saturates in double precision; that regime is resolved by the
/// fixed-point map directly and the root is capped at 1 - 1e-15.
inline RootResult tanh_branch_root(double teff, const char* what) {
    if (!(teff > 0.0))
        throw domain_error(std::string(what) + ": effective temperature must be > 0");
    if (teff >= 1.0)
        throw no_root_error(std::string(what) +
                            ": no positive root for t >= 1 (only the trivial zero)");

    const auto resid = [teff](double x) { return x - std::tanh(x / teff); };
    const auto dresid = [teff](double x) {
        const double th = std::tanh(x / teff);
        return 1.0 - (1.0 - th * th) / teff;
    };

    const double lo = std::max(std::sqrt(1.0 - teff), 1e-12);
    const double hi = 1.0 - 1e-12;

    if (resid(hi) <= 0.0) {
        // Root indistinguishable from 1 at the bracket edge; iterate the
        // saturating fixed-point map and cap below 1.
        double x = hi;
        int it = 0;
        for (; it < 64; ++it) {
            const double xn = std::tanh(x / teff);
            if (xn == x) break;
            x = xn;
        }
        x = std::min(x, 1.0 - tol::atanh_guard);
        return {x, std::abs(resid(x)), it, lo, 1.0};
    }
    return hybrid_bracketed(resid, dresid, lo, hi, what);
}

} // namespace detail

/// Positive root x~ of x = tanh(x/t) for t in (0,1); the antidiagonal
/// (or, for positive cross-coupling, diagonal) branch ordinate. Always
/// exceeds sqrt(1-t).
inline RootResult solve_x_tilde(double t) {
    return detail::tanh_branch_root(t, "solve_x_tilde");
}

/// Positive root x^ of t atanh(x) = (1+2b) x, i.e. x = tanh((1+2b)x/t), for
/// b in (-1/2, 0) and 0 < t < 1+2b. Reduces to the x~ equation at effective
/// temperature t/(1+2b). Always exceeds sqrt(1 - t/(1+2b)).
inline RootResult solve_x_hat(double t, double b) {
    if (1.0 + 2.0 * b <= 0.0)
        throw unsupported_case_error(
            "solve_x_hat: lambda_min <= 0 regime has no diagonal branch");
    if (b >= 0.0)
        throw domain_error("solve_x_hat: b must lie in (-1/2, 0), got " + std::to_string(b));
    if (!(t > 0.0))
        throw domain_error("solve_x_hat: t must be > 0");
    const double ratio = 1.0 + 2.0 * b;
    if (t >= ratio)
        throw no_root_error("solve_x_hat: no positive root for t >= 1 + 2b");
    RootResult r = detail::tanh_branch_root(t / ratio, "solve_x_hat");
    // report the residual of the stated equation, not the rescaled one
    r.residual = std::abs(r.root - std::tanh(ratio * r.root / t));
    return r;
}

/// Threshold temperature t-check in (0, 1+2b) solving
///   t atanh(sqrt(1-t)) / sqrt(1-t) = 1 + 2b,    b in (-1/2, 0).
/// Below this temperature four additional asymmetric critical points exist.
inline RootResult solve_t_check(double b) {
    const double ratio = 1.0 + 2.0 * b;
    if (!(ratio > 0.0 && ratio < 1.0))
        throw domain_error("solve_t_check: 1 + 2b must lie in (0,1), got " +
                           std::to_string(ratio));

    const auto lhs = [](double tc) {
        const double s = std::sqrt(1.0 - tc);
        return tc * atanh_guarded(s) / s;
    };
    const auto f = [&](double tc) { return lhs(tc) - ratio; };
    const auto df = [](double tc) {
        const double s = std::sqrt(1.0 - tc);
        const double at = atanh_guarded(s);
        return at / s - (s - tc * at) / (2.0 * s * s * s);
    };

    const double lo = 1e-9;
    const double hi = ratio - 1e-9;
    return detail::hybrid_bracketed(f, df, lo, hi, "solve_t_check");
}

} // namespace bimf
