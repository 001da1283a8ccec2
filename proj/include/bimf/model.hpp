#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "bimf/errors.hpp"
#include "bimf/tolerances.hpp"

namespace bimf {

/// Full parameter set of the two-population mean-field model: block
/// couplings j11, j12, j22 (any sign), per-population fields h1, h2,
/// relative size alpha1 of population 1, and inverse temperature beta.
struct ModelParams {
    double j11 = 0.0;
    double j12 = 0.0;
    double j22 = 0.0;
    double h1 = 0.0;
    double h2 = 0.0;
    double alpha1 = 0.5;
    double beta = 1.0;

    double alpha2() const { return 1.0 - alpha1; }

    /// True when the analytic case machinery applies (equal intra-couplings,
    /// equal population sizes).
    bool symmetric_couplings() const {
        const double scale = std::max({1.0, std::abs(j11), std::abs(j22)});
        return std::abs(alpha1 - 0.5) <= 1e-12 && std::abs(j11 - j22) <= 1e-12 * scale;
    }

    bool zero_field() const { return h1 == 0.0 && h2 == 0.0; }

    void validate() const {
        if (!(alpha1 > 0.0 && alpha1 < 1.0))
            throw domain_error("alpha1 must lie in (0,1), got " + std::to_string(alpha1));
        if (!(beta >= 0.0) || !std::isfinite(beta))
            throw domain_error("beta must be finite and >= 0, got " + std::to_string(beta));
        if (!std::isfinite(j11) || !std::isfinite(j12) || !std::isfinite(j22) ||
            !std::isfinite(h1) || !std::isfinite(h2))
            throw domain_error("couplings and fields must be finite");
    }
};

/// A magnetization pair in the closed square [-1,1]^2.
struct Magnetization {
    double mu1 = 0.0;
    double mu2 = 0.0;
};

inline double distance(const Magnetization& x, const Magnetization& y) {
    return std::hypot(x.mu1 - y.mu1, x.mu2 - y.mu2);
}

/// Couplings and temperature rescaled by the leading eigenvalue magnitude of
/// the 2x2 interaction matrix: a = j11/|lm|, b = j12/|lm|, t = 2/(beta |lm|).
/// Both eigenvalues of the original matrix are kept so case dispatch never
/// needs to recompute them.
struct ReducedParams {
    double a = 0.0;
    double b = 0.0;
    double t = 0.0;
    double lambda_max = 0.0;
    double lambda_min = 0.0;
};

/// atanh via the log quotient, clamped to |x| <= 1 - 1e-15 so boundary
/// values do not overflow.
inline double atanh_guarded(double x) {
    const double lim = 1.0 - tol::atanh_guard;
    if (x > lim) x = lim;
    if (x < -lim) x = -lim;
    return 0.5 * std::log((1.0 + x) / (1.0 - x));
}

/// Sector entropy I(x) = ((1+x)ln(1+x) + (1-x)ln(1-x))/2, extended by
/// continuity to I(+-1) = ln 2. Even, strictly convex, I(0) = 0.
inline double entropy(double x) {
    const double ax = std::abs(x);
    if (ax > 1.0)
        throw domain_error("entropy: |x| must be <= 1, got " + std::to_string(x));
    if (ax == 1.0)
        return std::numbers::ln2_v<double>;
    return 0.5 * ((1.0 + x) * std::log1p(x) + (1.0 - x) * std::log1p(-x));
}

/// dI/dx = atanh(x); diverges at the boundary.
inline double entropy_d1(double x) {
    if (std::abs(x) >= 1.0)
        throw domain_error("entropy_d1: |x| must be < 1");
    return atanh_guarded(x);
}

inline double entropy_d2(double x) { return 1.0 / (1.0 - x * x); }

inline double entropy_d3(double x) {
    const double d = 1.0 - x * x;
    return 2.0 * x / (d * d);
}

inline double entropy_d4(double x) {
    const double d = 1.0 - x * x;
    return 2.0 / (d * d) + 8.0 * x * x / (d * d * d);
}

/// Energy-per-spin functional
///   g(m) = (a1^2 j11 m1^2 + 2 a1 a2 j12 m1 m2 + a2^2 j22 m2^2)/2
///          + a1 h1 m1 + a2 h2 m2.
inline double g_value(const ModelParams& p, const Magnetization& m) {
    const double a1 = p.alpha1, a2 = p.alpha2();
    return 0.5 * (a1 * a1 * p.j11 * m.mu1 * m.mu1 +
                  2.0 * a1 * a2 * p.j12 * m.mu1 * m.mu2 +
                  a2 * a2 * p.j22 * m.mu2 * m.mu2) +
           a1 * p.h1 * m.mu1 + a2 * p.h2 * m.mu2;
}

/// Pressure functional f(m) = beta g(m) - a1 I(m1) - a2 I(m2), defined on
/// the closed square via the entropy limit at |m_l| = 1.
inline double f_value(const ModelParams& p, const Magnetization& m) {
    return p.beta * g_value(p, m) - p.alpha1 * entropy(m.mu1) - p.alpha2() * entropy(m.mu2);
}

/// Gradient of f; only defined on the open square.
inline std::array<double, 2> f_gradient(const ModelParams& p, const Magnetization& m) {
    if (std::abs(m.mu1) >= 1.0 || std::abs(m.mu2) >= 1.0)
        throw domain_error("f_gradient: |mu_l| must be < 1 (entropy slope diverges)");
    const double a1 = p.alpha1, a2 = p.alpha2();
    const double g1 = p.beta * (a1 * a1 * p.j11 * m.mu1 + a1 * a2 * p.j12 * m.mu2 + a1 * p.h1) -
                      a1 * atanh_guarded(m.mu1);
    const double g2 = p.beta * (a1 * a2 * p.j12 * m.mu1 + a2 * a2 * p.j22 * m.mu2 + a2 * p.h2) -
                      a2 * atanh_guarded(m.mu2);
    return {g1, g2};
}

/// Symmetric 2x2 Hessian of f.
struct Hessian {
    double dxx = 0.0;
    double dyy = 0.0;
    double dxy = 0.0;

    double det() const { return dxx * dyy - dxy * dxy; }
};

inline Hessian f_hessian(const ModelParams& p, const Magnetization& m) {
    if (std::abs(m.mu1) >= 1.0 || std::abs(m.mu2) >= 1.0)
        throw domain_error("f_hessian: |mu_l| must be < 1");
    const double a1 = p.alpha1, a2 = p.alpha2();
    Hessian h;
    h.dxx = p.beta * a1 * a1 * p.j11 - a1 * entropy_d2(m.mu1);
    h.dyy = p.beta * a2 * a2 * p.j22 - a2 * entropy_d2(m.mu2);
    h.dxy = p.beta * a1 * a2 * p.j12;
    return h;
}

/// Pure third partials d^3f/dmu_l^3. Mixed third partials vanish because the
/// Hessian off-diagonal is constant in m.
inline std::array<double, 2> f_third_pure(const ModelParams& p, const Magnetization& m) {
    if (std::abs(m.mu1) >= 1.0 || std::abs(m.mu2) >= 1.0)
        throw domain_error("f_third_pure: |mu_l| must be < 1");
    return {-p.alpha1 * entropy_d3(m.mu1), -p.alpha2() * entropy_d3(m.mu2)};
}

/// Right-hand side of the coupled tanh fixed-point system whose solutions
/// are exactly the critical points of f:
///   m1 = tanh(beta (a1 j11 m1 + a2 j12 m2 + h1))
///   m2 = tanh(beta (a1 j12 m1 + a2 j22 m2 + h2)).
inline Magnetization mean_field_map(const ModelParams& p, const Magnetization& m) {
    const double a1 = p.alpha1, a2 = p.alpha2();
    return {std::tanh(p.beta * (a1 * p.j11 * m.mu1 + a2 * p.j12 * m.mu2 + p.h1)),
            std::tanh(p.beta * (a1 * p.j12 * m.mu1 + a2 * p.j22 * m.mu2 + p.h2))};
}

/// m - mean_field_map(m); zero exactly at critical points of f.
inline std::array<double, 2> mean_field_residual(const ModelParams& p, const Magnetization& m) {
    const Magnetization t = mean_field_map(p, m);
    return {m.mu1 - t.mu1, m.mu2 - t.mu2};
}

inline double mean_field_residual_norm(const ModelParams& p, const Magnetization& m) {
    const auto r = mean_field_residual(p, m);
    return std::max(std::abs(r[0]), std::abs(r[1]));
}

/// Rescale a symmetric model (alpha1 = 1/2, j11 = j22) by the magnitude of
/// the leading eigenvalue lambda_max = j11 + |j12|:
///   a = j11/|lm|,  b = j12/|lm|,  t = 2/(beta |lm|).
inline ReducedParams rescale(const ModelParams& p) {
    p.validate();
    if (!p.symmetric_couplings())
        throw unsupported_case_error(
            "rescale: requires the symmetric model (alpha1 = 1/2, j11 = j22)");
    if (p.beta <= 0.0)
        throw domain_error("rescale: beta must be > 0 to define t");
    const double lambda_max = p.j11 + std::abs(p.j12);
    const double lambda_min = p.j11 - std::abs(p.j12);
    const double mag = std::abs(lambda_max);
    if (mag == 0.0)
        throw degenerate_model_error("rescale: leading eigenvalue is zero");
    ReducedParams r;
    r.a = p.j11 / mag;
    r.b = p.j12 / mag;
    r.t = 2.0 / (p.beta * mag);
    r.lambda_max = lambda_max;
    r.lambda_min = lambda_min;
    return r;
}

/// Build ReducedParams directly from (a, b, t). The pair (a, b) must already
/// be normalized, i.e. |a + |b|| = 1, as produced by rescale().
inline ReducedParams make_reduced(double a, double b, double t) {
    if (!(t > 0.0) || !std::isfinite(a) || !std::isfinite(b))
        throw domain_error("make_reduced: need finite a, b and t > 0");
    const double lm = a + std::abs(b);
    if (std::abs(std::abs(lm) - 1.0) > 1e-9)
        throw domain_error("make_reduced: (a, b) not normalized, |a + |b|| = " +
                           std::to_string(std::abs(lm)));
    ReducedParams r;
    r.a = a;
    r.b = b;
    r.t = t;
    r.lambda_max = lm;
    r.lambda_min = a - std::abs(b);
    return r;
}

/// Canonical full parameter set reproducing the reduced model: |lambda_max|
/// of the couplings is 1, so rescale(to_model_params(r)) round-trips.
inline ModelParams to_model_params(const ReducedParams& r, double h1 = 0.0, double h2 = 0.0) {
    ModelParams p;
    p.j11 = r.a;
    p.j22 = r.a;
    p.j12 = r.b;
    p.h1 = h1;
    p.h2 = h2;
    p.alpha1 = 0.5;
    p.beta = 2.0 / r.t;
    return p;
}

} // namespace bimf
