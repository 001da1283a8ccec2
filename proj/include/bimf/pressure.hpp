#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "bimf/critical_points.hpp"
#include "bimf/errors.hpp"
#include "bimf/model.hpp"
#include "bimf/roots.hpp"
#include "bimf/tolerances.hpp"

namespace bimf {

/// Thermodynamic-limit pressure ln 2 + max f together with the maximizing
/// set. The maximum of f is interior for finite beta (the entropy slope
/// diverges at the boundary), so the search reduces to the critical points.
struct PressureResult {
    double pressure = 0.0;
    std::vector<Magnetization> argmax;
    double f_max = 0.0;
    bool degenerate_ground_state = false;
    /// Set when the critical-point finder came back empty and a dense-grid
    /// refinement produced the maximum instead.
    bool grid_fallback = false;
};

namespace detail {

/// Dense-grid refinement used only if the critical-point finder fails:
/// scan a 401x401 grid and polish the best cell with Newton.
inline Magnetization grid_refine_max(const ModelParams& p, int n = 401) {
    double best = -std::numeric_limits<double>::infinity();
    Magnetization bm{0.0, 0.0};
    for (int i = 0; i < n; ++i) {
        const double u = -1.0 + 2.0 * i / (n - 1);
        for (int j = 0; j < n; ++j) {
            const double v = -1.0 + 2.0 * j / (n - 1);
            const double fv = f_value(p, {u, v});
            if (fv > best) {
                best = fv;
                bm = {u, v};
            }
        }
    }
    const double lim = 1.0 - 1e-12;
    bm.mu1 = std::clamp(bm.mu1, -lim, lim);
    bm.mu2 = std::clamp(bm.mu2, -lim, lim);
    return newton_mean_field(p, bm).m;
}

} // namespace detail

/// Global maximum of f over the square and the resulting limit pressure.
inline PressureResult limit_pressure(const ModelParams& p, int seed_grid = 21) {
    p.validate();
    auto points = find_critical_points_generic(p, seed_grid);

    PressureResult res;
    if (points.empty()) {
        const Magnetization m = detail::grid_refine_max(p);
        points.push_back(detail::make_point(p, m, detail::tag_branch(m)));
        res.grid_fallback = true;
    }

    double f_max = -std::numeric_limits<double>::infinity();
    for (const auto& cp : points) f_max = std::max(f_max, cp.f_value);
    for (const auto& cp : points)
        if (cp.f_value >= f_max - tol::tie && is_maximum_kind(cp.kind))
            res.argmax.push_back(cp.location);

    res.f_max = f_max;
    res.pressure = std::numbers::ln2_v<double> + f_max;
    res.degenerate_ground_state = res.argmax.size() >= 2;
    return res;
}

/// Values of P = t f at the two competing maxima of the nine-point regime:
///   P(xt, -xt) = xt^2/2 - t I(xt)
///   P(xh,  xh) = (a+b) xh^2/2 - t I(xh).
/// The leading branch always wins; the comparison is exposed for sweeps.
struct MaximaComparison {
    Magnetization tilde_point;
    double p_tilde = 0.0;
    Magnetization hat_point;
    double p_hat = 0.0;
};

inline MaximaComparison compare_maxima(const ReducedParams& r) {
    const CaseLabel label = classify_case(r);
    if (label.family != CaseFamily::PosJ11NegJ12 || label.regime != Regime::G)
        throw regime_error("compare_maxima: defined only in the nine-point regime (0 < t < t-check)");
    const double xt = solve_x_tilde(r.t).root;
    const double xh = solve_x_hat(r.t, r.b).root;
    MaximaComparison cmp;
    cmp.tilde_point = {xt, -xt};
    cmp.p_tilde = 0.5 * xt * xt - r.t * entropy(xt);
    cmp.hat_point = {xh, xh};
    cmp.p_hat = 0.5 * (r.a + r.b) * xh * xh - r.t * entropy(xh);
    if (!(cmp.p_tilde > cmp.p_hat))
        throw solver_error("compare_maxima: ordering P(tilde) > P(hat) violated numerically");
    return cmp;
}

/// Outcome of applying a small field to a multi-maximum symmetric model.
struct FieldSelectionReport {
    std::array<double, 2> field{0.0, 0.0};
    /// Empty when the field leaves two ground states tied.
    std::optional<Magnetization> selected;
    double dot_product = 0.0;
    /// f gap between the best and the second-best local maximum.
    double gap = 0.0;
    bool stable_under_halving = false;
};

namespace detail {

struct SelectionOutcome {
    std::optional<Magnetization> selected;
    double dot_product = 0.0;
    double gap = 0.0;
};

inline SelectionOutcome select_with_field(const ModelParams& base, double h1, double h2,
                                          int seed_grid) {
    ModelParams p = base;
    p.h1 = h1;
    p.h2 = h2;
    const auto points = find_critical_points_generic(p, seed_grid);
    std::vector<const CriticalPoint*> maxima;
    for (const auto& cp : points)
        if (is_maximum_kind(cp.kind)) maxima.push_back(&cp);
    std::sort(maxima.begin(), maxima.end(),
              [](const CriticalPoint* x, const CriticalPoint* y) {
                  return x->f_value > y->f_value;
              });
    SelectionOutcome out;
    if (maxima.empty()) return out;
    out.gap = maxima.size() >= 2 ? maxima[0]->f_value - maxima[1]->f_value
                                 : std::numeric_limits<double>::infinity();
    if (out.gap < tol::tie) return out; // tie
    out.selected = maxima[0]->location;
    out.dot_product = h1 * maxima[0]->location.mu1 + h2 * maxima[0]->location.mu2;
    return out;
}

} // namespace detail

/// Apply a small field of magnitude epsilon_scale in the direction of h to a
/// symmetric multi-maximum model and report which ground state it selects.
/// The selection is recomputed at half the scale; agreement of the two runs
/// is reported in stable_under_halving.
inline FieldSelectionReport field_selection(const ModelParams& p_base,
                                            std::array<double, 2> h,
                                            double epsilon_scale = 1e-4,
                                            int seed_grid = 21) {
    if (!(epsilon_scale > 0.0))
        throw domain_error("field_selection: epsilon_scale must be > 0");
    p_base.validate();
    if (!p_base.symmetric_couplings() || !p_base.zero_field())
        throw unsupported_case_error("field_selection: base model must be symmetric with zero field");
    const ReducedParams r = rescale(p_base);
    if (!(r.t < 1.0))
        throw regime_error("field_selection: base model has a unique ground state (t >= 1)");

    FieldSelectionReport rep;
    const double norm = std::hypot(h[0], h[1]);
    if (norm > 0.0) {
        rep.field = {h[0] * epsilon_scale / norm, h[1] * epsilon_scale / norm};
    } else {
        rep.field = {0.0, 0.0};
    }

    const auto full = detail::select_with_field(p_base, rep.field[0], rep.field[1], seed_grid);
    const auto half =
        detail::select_with_field(p_base, 0.5 * rep.field[0], 0.5 * rep.field[1], seed_grid);
    rep.selected = full.selected;
    rep.dot_product = full.dot_product;
    rep.gap = full.gap;
    if (full.selected && half.selected)
        rep.stable_under_halving = distance(*full.selected, *half.selected) < 0.1;
    else
        rep.stable_under_halving = !full.selected && !half.selected;
    return rep;
}

} // namespace bimf
