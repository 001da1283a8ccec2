#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "bimf/errors.hpp"
#include "bimf/model.hpp"
#include "bimf/parallel.hpp"
#include "bimf/pressure.hpp"
#include "bimf/tolerances.hpp"

namespace bimf {

/// Total population cap for the exact partition sum; the sector grid is
/// (n1+1) x (n2+1), which stays tractable up to this size.
inline constexpr int finite_size_cap = 20000;

/// A concrete finite system. The relative population size used inside g is
/// n1/(n1+n2), overriding params.alpha1, so the computation matches the
/// finite system exactly.
struct FiniteModel {
    int n1 = 0;
    int n2 = 0;
    ModelParams params;
};

namespace detail {

/// log C(n, k) via log-gamma; exact up to double rounding for all n here.
inline std::vector<double> log_binomials(int n) {
    std::vector<double> out(n + 1);
    const double lg_n = std::lgamma(n + 1.0);
    for (int k = 0; k <= n; ++k)
        out[k] = lg_n - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
    return out;
}

} // namespace detail

/// Exact finite-size pressure
///   p_N = (1/N) ln sum_{k1,k2} C(n1,k1) C(n2,k2) exp(beta N g(mu1, mu2))
/// with mu_l = (2 k_l - n_l)/n_l, computed as a two-pass streaming
/// log-sum-exp over the sector grid. Rows are processed in parallel; row
/// maxima and row sums are merged in fixed index order, so the result does
/// not depend on the thread count.
inline double exact_pressure(const FiniteModel& fm, int threads = 0) {
    fm.params.validate();
    if (fm.n1 < 1 || fm.n2 < 1)
        throw domain_error("exact_pressure: population sizes must be >= 1");
    if (fm.n1 + fm.n2 > finite_size_cap)
        throw resource_error("exact_pressure: n1 + n2 = " + std::to_string(fm.n1 + fm.n2) +
                             " exceeds cap " + std::to_string(finite_size_cap));

    const int n1 = fm.n1, n2 = fm.n2;
    const double n_total = n1 + n2;
    const double a1 = n1 / n_total;
    const double a2 = n2 / n_total;
    const ModelParams& p = fm.params;

    // g(mu1, mu2) = q11 mu1^2 + q12 mu1 mu2 + q22 mu2^2 + l1 mu1 + l2 mu2
    const double q11 = 0.5 * a1 * a1 * p.j11;
    const double q12 = a1 * a2 * p.j12;
    const double q22 = 0.5 * a2 * a2 * p.j22;
    const double l1 = a1 * p.h1;
    const double l2 = a2 * p.h2;
    const double scale = p.beta * n_total;

    const std::vector<double> lb1 = detail::log_binomials(n1);
    const std::vector<double> lb2 = detail::log_binomials(n2);
    std::vector<double> mu2s(n2 + 1);
    for (int k2 = 0; k2 <= n2; ++k2) mu2s[k2] = (2.0 * k2 - n2) / n2;

    const auto term = [&](int k1, int k2, double mu1) {
        const double mu2 = mu2s[k2];
        const double g = (q11 * mu1 + q12 * mu2 + l1) * mu1 + (q22 * mu2 + l2) * mu2;
        return lb1[k1] + lb2[k2] + scale * g;
    };

    std::vector<double> row_max(n1 + 1);
    parallel_for_index(n1 + 1, threads, [&](int k1) {
        const double mu1 = (2.0 * k1 - n1) / n1;
        double m = -std::numeric_limits<double>::infinity();
        for (int k2 = 0; k2 <= n2; ++k2) m = std::max(m, term(k1, k2, mu1));
        row_max[k1] = m;
    });
    double global_max = row_max[0];
    for (int k1 = 1; k1 <= n1; ++k1) global_max = std::max(global_max, row_max[k1]);

    std::vector<double> row_sum(n1 + 1);
    parallel_for_index(n1 + 1, threads, [&](int k1) {
        const double mu1 = (2.0 * k1 - n1) / n1;
        double s = 0.0;
        for (int k2 = 0; k2 <= n2; ++k2) s += std::exp(term(k1, k2, mu1) - global_max);
        row_sum[k1] = s;
    });
    double total = 0.0;
    for (int k1 = 0; k1 <= n1; ++k1) total += row_sum[k1];

    return (global_max + std::log(total)) / n_total;
}

/// Two-sided sector-count bound check for one population size n:
///   ln C(n,k) <= n ln2 - n I(mu)                      (upper)
///   ln C(n,k) >= n ln2 - ln(sqrt n) - n I(mu) - ln C  (lower)
/// over all k with |mu| < 1. Slacks are the margins by which the bounds
/// hold; negative slack is a violation.
struct SectorBoundsReport {
    int n = 0;
    double c = 0.0;
    double worst_upper_slack = 0.0;
    double worst_lower_slack = 0.0;
    int violations_upper = 0;
    int violations_lower = 0;
};

inline SectorBoundsReport check_sector_bounds(int n, double c) {
    if (n < 1) throw domain_error("check_sector_bounds: n must be >= 1");
    if (!(c > 0.0)) throw domain_error("check_sector_bounds: C must be > 0");
    SectorBoundsReport rep;
    rep.n = n;
    rep.c = c;
    rep.worst_upper_slack = std::numeric_limits<double>::infinity();
    rep.worst_lower_slack = std::numeric_limits<double>::infinity();
    const std::vector<double> lb = detail::log_binomials(n);
    const double ln2n = n * std::numbers::ln2_v<double>;
    for (int k = 0; k <= n; ++k) {
        const double mu = (2.0 * k - n) / static_cast<double>(n);
        if (std::abs(mu) >= 1.0) continue;
        const double ent = n * entropy(mu);
        const double upper_slack = (ln2n - ent) - lb[k];
        const double lower_slack = lb[k] - (ln2n - 0.5 * std::log(n) - ent - std::log(c));
        if (upper_slack < 0.0) ++rep.violations_upper;
        if (lower_slack < 0.0) ++rep.violations_lower;
        rep.worst_upper_slack = std::min(rep.worst_upper_slack, upper_slack);
        rep.worst_lower_slack = std::min(rep.worst_lower_slack, lower_slack);
    }
    return rep;
}

/// Smallest integer C for which the lower sector bound holds for every
/// n <= max_n and every sector. The bound statement leaves C unspecified;
/// this pins it empirically.
inline int smallest_sector_bound_constant(int max_n = 1000) {
    double worst_deficit = -std::numeric_limits<double>::infinity();
    for (int n = 1; n <= max_n; ++n) {
        const std::vector<double> lb = detail::log_binomials(n);
        const double ln2n = n * std::numbers::ln2_v<double>;
        for (int k = 0; k <= n; ++k) {
            const double mu = (2.0 * k - n) / static_cast<double>(n);
            if (std::abs(mu) >= 1.0) continue;
            const double deficit = (ln2n - 0.5 * std::log(n) - n * entropy(mu)) - lb[k];
            worst_deficit = std::max(worst_deficit, deficit);
        }
    }
    const double c_min = std::exp(worst_deficit);
    int c = static_cast<int>(std::ceil(c_min));
    if (c < 1) c = 1;
    // guard against ceil landing exactly on a boundary that still violates
    if (check_sector_bounds(2, c).violations_lower > 0) ++c;
    return c;
}

/// One row of a finite-size convergence table.
struct ConvergenceRow {
    int n = 0;
    int n1 = 0;
    int n2 = 0;
    double p_n = 0.0;
    double residual = 0.0; // p_n - (ln 2 + max f)
    double envelope = 0.0; // (ln((n1+1)(n2+1)) + ln(sqrt(n1 n2)) + ln C) / n
};

/// Materialize the convergence of p_N to the limit pressure over a list of
/// total sizes. alpha1 is realized as the nearest integer split.
inline std::vector<ConvergenceRow> convergence_study(const ModelParams& p,
                                                     const std::vector<int>& sizes,
                                                     double c = 2.0, int threads = 0) {
    p.validate();
    const double p_limit = limit_pressure(p).pressure;
    std::vector<ConvergenceRow> rows;
    rows.reserve(sizes.size());
    for (const int n : sizes) {
        if (n < 2) throw domain_error("convergence_study: sizes must be >= 2");
        ConvergenceRow row;
        row.n = n;
        row.n1 = std::clamp(static_cast<int>(std::lround(p.alpha1 * n)), 1, n - 1);
        row.n2 = n - row.n1;
        row.p_n = exact_pressure({row.n1, row.n2, p}, threads);
        row.residual = row.p_n - p_limit;
        row.envelope = (std::log((row.n1 + 1.0) * (row.n2 + 1.0)) +
                        0.5 * std::log(static_cast<double>(row.n1) * row.n2) + std::log(c)) /
                       n;
        rows.push_back(row);
    }
    return rows;
}

} // namespace bimf
