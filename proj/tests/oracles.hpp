#pragma once

// Independent oracles used by the test suites. Everything here deliberately
// avoids the library's solver paths: long-double arithmetic, plain bisection,
// finite differences, dense grids and literal configuration sums.

#include <cmath>
#include <functional>
#include <vector>

#include "bimf/model.hpp"

namespace oracle {

/// Sector entropy evaluated in extended precision.
inline long double entropy_ld(long double x) {
    if (x == 1.0L || x == -1.0L) return 0.6931471805599453094L;
    return 0.5L * ((1.0L + x) * std::log1p(x) + (1.0L - x) * std::log1p(-x));
}

/// Plain long-double bisection; assumes a sign change on [lo, hi].
inline long double bisect_ld(const std::function<long double(long double)>& f,
                             long double lo, long double hi) {
    long double flo = f(lo);
    for (int i = 0; i < 300; ++i) {
        const long double mid = 0.5L * (lo + hi);
        if (mid == lo || mid == hi) break;
        const long double fm = f(mid);
        if (fm == 0.0L) return mid;
        if ((fm < 0.0L) == (flo < 0.0L)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5L * (lo + hi);
}

/// Positive solution of x = tanh(x/t), t in (0,1), by bisection.
inline long double x_tilde_ld(long double t) {
    return bisect_ld([t](long double x) { return x - std::tanh(x / t); },
                     1e-12L, 1.0L - 1e-18L);
}

/// Positive solution of t atanh(x) = (1+2b) x by bisection on the
/// fixed-point form.
inline long double x_hat_ld(long double t, long double b) {
    const long double r = 1.0L + 2.0L * b;
    return bisect_ld([t, r](long double x) { return x - std::tanh(r * x / t); },
                     1e-12L, 1.0L - 1e-18L);
}

/// Threshold temperature solving t atanh(sqrt(1-t))/sqrt(1-t) = 1+2b.
inline long double t_check_ld(long double b) {
    const long double r = 1.0L + 2.0L * b;
    return bisect_ld(
        [r](long double tc) {
            const long double s = std::sqrt(1.0L - tc);
            return tc * std::atanh(s) / s - r;
        },
        1e-12L, r - 1e-12L);
}

/// P(x1, x2) = t f(x1, x2) in reduced coordinates, extended precision.
inline long double p_functional_ld(long double a, long double b, long double t,
                                   long double x1, long double x2) {
    return 0.25L * a * (x1 * x1 + x2 * x2) + 0.5L * b * x1 * x2 -
           0.5L * t * (entropy_ld(x1) + entropy_ld(x2));
}

/// Central finite differences of f, step 1e-5.
inline std::array<double, 2> gradient_fd(const bimf::ModelParams& p,
                                         const bimf::Magnetization& m,
                                         double step = 1e-5) {
    const auto f = [&](double u, double v) { return bimf::f_value(p, {u, v}); };
    return {(f(m.mu1 + step, m.mu2) - f(m.mu1 - step, m.mu2)) / (2.0 * step),
            (f(m.mu1, m.mu2 + step) - f(m.mu1, m.mu2 - step)) / (2.0 * step)};
}

/// Central finite differences of the analytic gradient, step 1e-5.
inline bimf::Hessian hessian_fd(const bimf::ModelParams& p, const bimf::Magnetization& m,
                                double step = 1e-5) {
    const auto g1 = [&](double u, double v) { return bimf::f_gradient(p, {u, v})[0]; };
    const auto g2 = [&](double u, double v) { return bimf::f_gradient(p, {u, v})[1]; };
    bimf::Hessian h;
    h.dxx = (g1(m.mu1 + step, m.mu2) - g1(m.mu1 - step, m.mu2)) / (2.0 * step);
    h.dyy = (g2(m.mu1, m.mu2 + step) - g2(m.mu1, m.mu2 - step)) / (2.0 * step);
    h.dxy = 0.5 * ((g1(m.mu1, m.mu2 + step) - g1(m.mu1, m.mu2 - step)) / (2.0 * step) +
                   (g2(m.mu1 + step, m.mu2) - g2(m.mu1 - step, m.mu2)) / (2.0 * step));
    return h;
}

/// Brute-force maximization of f: dense grid scan followed by a short Newton
/// polish on the gradient from the best cell.
inline double dense_grid_max_f(const bimf::ModelParams& p, int n = 401) {
    double best = -1e300;
    bimf::Magnetization bm{0.0, 0.0};
    for (int i = 0; i < n; ++i) {
        const double u = -1.0 + 2.0 * i / (n - 1);
        for (int j = 0; j < n; ++j) {
            const double v = -1.0 + 2.0 * j / (n - 1);
            const double fv = bimf::f_value(p, {u, v});
            if (fv > best) {
                best = fv;
                bm = {u, v};
            }
        }
    }
    // polish (interior maximum; clamp keeps the iterate off the boundary)
    bimf::Magnetization m = bm;
    const double lim = 1.0 - 1e-12;
    m.mu1 = std::min(lim, std::max(-lim, m.mu1));
    m.mu2 = std::min(lim, std::max(-lim, m.mu2));
    for (int k = 0; k < 80; ++k) {
        const auto gr = bimf::f_gradient(p, m);
        const auto h = bimf::f_hessian(p, m);
        const double det = h.det();
        if (det == 0.0) break;
        double d1 = (h.dyy * gr[0] - h.dxy * gr[1]) / det;
        double d2 = (h.dxx * gr[1] - h.dxy * gr[0]) / det;
        bimf::Magnetization mn{m.mu1 - d1, m.mu2 - d2};
        mn.mu1 = std::min(lim, std::max(-lim, mn.mu1));
        mn.mu2 = std::min(lim, std::max(-lim, mn.mu2));
        if (bimf::f_value(p, mn) < bimf::f_value(p, m) - 1e-15) break;
        if (mn.mu1 == m.mu1 && mn.mu2 == m.mu2) break;
        m = mn;
    }
    return std::max(best, bimf::f_value(p, m));
}

/// Literal partition sum over all 2^(n1+n2) spin configurations of the raw
/// block Hamiltonian (self-pairs i = j included, as in the magnetization
/// form). Returns the pressure (1/N) ln Z. Only sensible for tiny systems.
inline double brute_force_pressure(int n1, int n2, const bimf::ModelParams& p) {
    const int n = n1 + n2;
    const long long total = 1LL << n;
    long double zsum = 0.0L;
    std::vector<int> spin(n);
    for (long long conf = 0; conf < total; ++conf) {
        for (int i = 0; i < n; ++i) spin[i] = (conf >> i) & 1 ? 1 : -1;
        long double energy = 0.0L;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                const double jij = (i < n1) ? ((j < n1) ? p.j11 : p.j12)
                                            : ((j < n1) ? p.j12 : p.j22);
                energy += -0.5L / n * jij * spin[i] * spin[j];
            }
            energy += -(i < n1 ? p.h1 : p.h2) * spin[i];
        }
        zsum += std::exp(-(long double)p.beta * energy);
    }
    return (double)(std::log(zsum) / n);
}

} // namespace oracle
