#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "bimf/errors.hpp"
#include "bimf/model.hpp"
#include "bimf/roots.hpp"
#include "bimf/tolerances.hpp"

namespace bimf {

enum class PointKind { Maximum, Minimum, Saddle, DegenerateMaximum, DegenerateSaddle };

/// Analytic family a critical point belongs to: the origin, the pair on the
/// leading-eigenvector line, the pair on the other eigenvector line, or one
/// of the four points with no closed-form location.
enum class Branch { Origin, AntiDiagonal, Diagonal, Asymmetric };

enum class CaseFamily { PosJ11NegJ12, NegJ11BigJ12, NegJ11SmallJ12, MirroredBySymmetry };

/// Sub-case letters of the opposite-sign case tree. Family 1 uses a..g,
/// family 2 uses a/b, family 3 only a.
enum class Regime { A, B, C, D, E, F, G };

struct CaseLabel {
    CaseFamily family = CaseFamily::PosJ11NegJ12;
    /// Opposite-sign family the label reduces to; equals `family` unless the
    /// couplings share a sign, in which case the reflection j12 -> -j12 was
    /// applied first.
    CaseFamily base_family = CaseFamily::PosJ11NegJ12;
    Regime regime = Regime::A;
};

inline const char* to_string(PointKind k) {
    switch (k) {
        case PointKind::Maximum: return "maximum";
        case PointKind::Minimum: return "minimum";
        case PointKind::Saddle: return "saddle";
        case PointKind::DegenerateMaximum: return "degenerate-maximum";
        case PointKind::DegenerateSaddle: return "degenerate-saddle";
    }
    return "?";
}

inline const char* to_string(Branch b) {
    switch (b) {
        case Branch::Origin: return "origin";
        case Branch::AntiDiagonal: return "anti-diagonal";
        case Branch::Diagonal: return "diagonal";
        case Branch::Asymmetric: return "asymmetric";
    }
    return "?";
}

inline std::string to_string(const CaseLabel& c) {
    std::string s;
    switch (c.base_family) {
        case CaseFamily::PosJ11NegJ12: s = "1"; break;
        case CaseFamily::NegJ11BigJ12: s = "2"; break;
        case CaseFamily::NegJ11SmallJ12: s = "3"; break;
        case CaseFamily::MirroredBySymmetry: s = "?"; break;
    }
    if (c.base_family != CaseFamily::NegJ11SmallJ12)
        s += static_cast<char>('a' + static_cast<int>(c.regime));
    if (c.family == CaseFamily::MirroredBySymmetry) s += "*";
    return s;
}

struct CriticalPoint {
    Magnetization location;
    PointKind kind = PointKind::Maximum;
    double hessian_det = 0.0;
    double f_value = 0.0;
    Branch branch = Branch::Origin;
    /// True when the analytic degenerate taxonomy did not apply and the point
    /// was classified by ring sampling instead.
    bool ring_fallback = false;
};

struct FinderDiagnostics {
    int seeds_total = 0;
    int seeds_converged = 0;
    int seeds_dropped = 0;
};

inline bool is_maximum_kind(PointKind k) {
    return k == PointKind::Maximum || k == PointKind::DegenerateMaximum;
}

// ---------------------------------------------------------------------------
// Case dispatch
// ---------------------------------------------------------------------------

namespace detail {

inline Regime family1_regime(double a, double b, double t) {
    const double w = tol::boundary_window;
    if (t > 1.0 + w) return Regime::A;
    if (std::abs(t - 1.0) <= w) return Regime::B;
    if (t >= a) return Regime::C;
    const double lm_ratio = 1.0 + 2.0 * b; // lambda_min / lambda_max = 2a - 1
    if (lm_ratio <= w) return Regime::D;
    if (std::abs(t - lm_ratio) <= w) return Regime::E;
    if (t > lm_ratio) return Regime::D;
    const double tc = solve_t_check(b).root;
    if (t >= tc - w) return Regime::F;
    return Regime::G;
}

} // namespace detail

/// Deterministic dispatch of the zero-field symmetric model onto the case
/// tree. Same-sign couplings are mapped to the opposite-sign tree by the
/// reflection j12 -> -j12 and tagged MirroredBySymmetry.
inline CaseLabel classify_case(const ReducedParams& r) {
    if (r.b == 0.0)
        throw degenerate_model_error(
            "classify_case: j12 = 0 degenerates into two independent single-population models");
    double a = r.a;
    double b = r.b;
    const bool mirrored = (a > 0.0 && b > 0.0) || (a < 0.0 && b < 0.0) || (a == 0.0 && b > 0.0);
    if (mirrored) b = -b;

    CaseLabel label;
    if (a >= 0.0) {
        label.base_family = CaseFamily::PosJ11NegJ12;
        label.regime = detail::family1_regime(a, b, r.t);
    } else if (r.lambda_max > 0.0) {
        label.base_family = CaseFamily::NegJ11BigJ12;
        label.regime = (r.t >= 1.0 - tol::boundary_window) ? Regime::A : Regime::B;
    } else {
        label.base_family = CaseFamily::NegJ11SmallJ12;
        label.regime = Regime::A;
    }
    label.family = mirrored ? CaseFamily::MirroredBySymmetry : label.base_family;
    return label;
}

// ---------------------------------------------------------------------------
// Point classification
// ---------------------------------------------------------------------------

namespace detail {

/// Brute-force fallback: compare f at the point against 64 samples on a
/// small surrounding ring.
inline PointKind ring_classify(const ModelParams& p, const Magnetization& m) {
    const double radius = 1e-3;
    const double lim = 1.0 - 1e-12;
    const double center = f_value(p, m);
    double ring_max = -1e300;
    for (int k = 0; k < 64; ++k) {
        const double th = 2.0 * std::numbers::pi_v<double> * k / 64.0;
        Magnetization q{m.mu1 + radius * std::cos(th), m.mu2 + radius * std::sin(th)};
        q.mu1 = std::clamp(q.mu1, -lim, lim);
        q.mu2 = std::clamp(q.mu2, -lim, lim);
        ring_max = std::max(ring_max, f_value(p, q));
    }
    return center > ring_max ? PointKind::DegenerateMaximum : PointKind::DegenerateSaddle;
}

struct Classification {
    PointKind kind;
    double hessian_det;
    bool ring_fallback;
};

/// Degenerate classification. The analytic taxonomy applies only on the
/// known phase boundaries of the symmetric zero-field model:
///  - origin with t at 1 or at the eigenvalue ratio: the quartic term along
///    the flat eigendirection is strictly negative, so the sign of the
///    complementary curvature decides between maximum and inflection;
///  - the eigenvector-line pair at t = t-check: the pure third derivative is
///    nonzero there, which rules out an extremum.
/// Anything else falls back to ring sampling.
inline Classification classify_degenerate(const ModelParams& p, const Magnetization& m,
                                          double det) {
    if (p.symmetric_couplings() && p.zero_field() && p.beta > 0.0 && p.j12 != 0.0) {
        const ReducedParams r = rescale(p);
        const double origin_dist = std::hypot(m.mu1, m.mu2);
        if (origin_dist <= 1e-7) {
            // curvatures along the eigenvectors (1,1) and (1,-1)
            const double c_sum = (r.a + r.b) / r.t - 1.0;
            const double c_dif = (r.a - r.b) / r.t - 1.0;
            const double flat = std::min(std::abs(c_sum), std::abs(c_dif));
            const double other = (std::abs(c_sum) <= std::abs(c_dif)) ? c_dif : c_sum;
            if (flat <= 1e-6 && std::abs(other) >= 1e-3)
                return {other < 0.0 ? PointKind::DegenerateMaximum : PointKind::DegenerateSaddle,
                        det, false};
        } else if (std::abs(r.b) < 0.5) {
            // pair on the lesser-eigenvector line, degenerate exactly at t-check
            const bool on_line = (r.b < 0.0) ? std::abs(m.mu1 - m.mu2) <= 1e-6
                                             : std::abs(m.mu1 + m.mu2) <= 1e-6;
            if (on_line) {
                const double tc = solve_t_check(-std::abs(r.b)).root;
                if (std::abs(r.t - tc) <= 1e-6) {
                    const double third = f_third_pure(p, m)[0];
                    if (std::abs(third) > 1e-6)
                        return {PointKind::DegenerateSaddle, det, false};
                }
            }
        }
    }
    return {ring_classify(p, m), det, true};
}

inline Classification classify_impl(const ModelParams& p, const Magnetization& m) {
    // The stationarity test runs on the tanh fixed-point form: it is the
    // gradient condition conjugated through atanh, and stays well-scaled at
    // points within machine distance of the square boundary where the raw
    // gradient entries blow up.
    const double resid = mean_field_residual_norm(p, m);
    if (resid > tol::critical_gradient)
        throw not_critical_error("classify_point: mean-field residual " +
                                 std::to_string(resid) + " exceeds " +
                                 std::to_string(tol::critical_gradient));
    const Hessian h = f_hessian(p, m);
    const double det = h.det();
    if (std::abs(det) > tol::hessian_degenerate) {
        if (det < 0.0) return {PointKind::Saddle, det, false};
        return {h.dxx < 0.0 ? PointKind::Maximum : PointKind::Minimum, det, false};
    }
    return classify_degenerate(p, m, det);
}

} // namespace detail

/// Classify a critical point of f by its Hessian, with the analytic
/// degenerate taxonomy on phase boundaries.
inline PointKind classify_point(const ModelParams& p, const Magnetization& m) {
    return detail::classify_impl(p, m).kind;
}

// ---------------------------------------------------------------------------
// Numeric solving of the mean-field system
// ---------------------------------------------------------------------------

namespace detail {

struct NewtonOutcome {
    Magnetization m;
    bool converged = false;
};

/// Newton iteration on R(m) = m - tanh_map(m), clamped to the open square.
/// Converges to saddle-type roots as well, unlike the plain fixed-point map.
/// Iteration stops on step size, not on the residual: near roots with a
/// singular Jacobian (phase boundaries) the residual is cubically small in
/// the distance, which would leave a scatter of half-converged points.
inline NewtonOutcome newton_mean_field(const ModelParams& p, Magnetization m,
                                       int max_iter = 140) {
    const double lim = 1.0 - 1e-12;
    const double a1 = p.alpha1, a2 = p.alpha2();
    for (int it = 0; it < max_iter; ++it) {
        const Magnetization tm = mean_field_map(p, m);
        const double r1 = m.mu1 - tm.mu1;
        const double r2 = m.mu2 - tm.mu2;
        const double rn = std::max(std::abs(r1), std::abs(r2));
        if (rn == 0.0) return {m, true};
        const double s1 = 1.0 - tm.mu1 * tm.mu1;
        const double s2 = 1.0 - tm.mu2 * tm.mu2;
        // Jacobian of R
        const double j11 = 1.0 - s1 * p.beta * a1 * p.j11;
        const double j12 = -s1 * p.beta * a2 * p.j12;
        const double j21 = -s2 * p.beta * a1 * p.j12;
        const double j22 = 1.0 - s2 * p.beta * a2 * p.j22;
        const double det = j11 * j22 - j12 * j21;
        double d1, d2;
        if (std::abs(det) < 1e-300) {
            // fall back to a damped fixed-point step
            d1 = 0.5 * r1;
            d2 = 0.5 * r2;
        } else {
            d1 = (j22 * r1 - j12 * r2) / det;
            d2 = (j11 * r2 - j21 * r1) / det;
        }
        Magnetization mn{std::clamp(m.mu1 - d1, -lim, lim), std::clamp(m.mu2 - d2, -lim, lim)};
        const double step = std::max(std::abs(mn.mu1 - m.mu1), std::abs(mn.mu2 - m.mu2));
        m = mn;
        if (step < 1e-15) break;
    }
    return {m, mean_field_residual_norm(p, m) <= 1e-11};
}

inline void dedup_insert(std::vector<Magnetization>& pts, const Magnetization& m) {
    for (const auto& q : pts)
        if (distance(q, m) <= tol::dedup_radius) return;
    pts.push_back(m);
}

inline Branch tag_branch(const Magnetization& m) {
    const double eps = 1e-8;
    if (std::hypot(m.mu1, m.mu2) <= eps) return Branch::Origin;
    if (std::abs(m.mu1 + m.mu2) <= eps) return Branch::AntiDiagonal;
    if (std::abs(m.mu1 - m.mu2) <= eps) return Branch::Diagonal;
    return Branch::Asymmetric;
}

inline CriticalPoint make_point(const ModelParams& p, const Magnetization& m, Branch br) {
    const auto cls = classify_impl(p, m);
    return {m, cls.kind, cls.hessian_det, f_value(p, m), br, cls.ring_fallback};
}

/// All roots u of the first mean-field equation u = tanh((a u + b x2)/t) at
/// fixed x2 (one to three). The scan grid is refined geometrically toward
/// the endpoints because roots can sit within machine distance of +-1, where
/// tanh saturates; a saturated root is returned clamped just inside.
inline std::vector<double> eq1_scalar_roots(const ReducedParams& r, double x2) {
    const double c = r.b * x2;
    const auto f = [&](double u) { return u - std::tanh((r.a * u + c) / r.t); };
    const double cap = 1.0 - tol::atanh_guard;

    std::vector<double> grid;
    for (int i = 0; i <= 64; ++i) grid.push_back(-0.999 + 1.998 * i / 64.0);
    for (int k = 4; k <= 15; ++k) {
        grid.push_back(1.0 - std::pow(10.0, -k));
        grid.push_back(-1.0 + std::pow(10.0, -k));
    }
    std::sort(grid.begin(), grid.end());

    std::vector<double> roots;
    const auto add_root = [&](double u) {
        for (double q : roots)
            if (std::abs(q - u) <= 1e-9) return;
        roots.push_back(u);
    };
    double prev_u = grid.front();
    double prev_f = f(prev_u);
    if (prev_f == 0.0) add_root(prev_u);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double u = grid[i];
        const double fu = f(u);
        if (fu == 0.0) {
            add_root(u);
        } else if ((fu < 0.0) != (prev_f < 0.0)) {
            double lo = prev_u, hi = u, flo = prev_f;
            for (int k = 0; k < 100 && hi - lo > 1e-15; ++k) {
                const double mid = 0.5 * (lo + hi);
                const double fm = f(mid);
                if (fm == 0.0) {
                    lo = hi = mid;
                    break;
                }
                if ((fm < 0.0) == (flo < 0.0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            add_root(0.5 * (lo + hi));
        }
        prev_u = u;
        prev_f = fu;
    }
    // saturated roots indistinguishable from +-1 in double precision
    if (f(cap) < 0.0 && f(cap) > -4e-15) add_root(cap);
    if (f(-cap) > 0.0 && f(-cap) < 4e-15) add_root(-cap);
    return roots;
}

/// The four asymmetric points of the nine-point regime. Seeds are taken on
/// the curve defined by the first mean-field equation, parametrized both
/// ways (explicit x2(x1), and all x1 roots at sampled x2 so that branches
/// hugging the square edge are reached); each seed is refined on the full
/// system, solutions are collapsed to one representative per symmetry orbit
/// (swap and negation), and the orbit expansion gives the final four points.
inline std::vector<Magnetization> asymmetric_points(const ReducedParams& r, double x_tilde,
                                                    double x_hat) {
    const ModelParams p = to_model_params(r);
    const auto known = [&](const Magnetization& m) {
        const Magnetization listed[] = {{0.0, 0.0},
                                        {x_tilde, -x_tilde},
                                        {-x_tilde, x_tilde},
                                        {x_hat, x_hat},
                                        {-x_hat, -x_hat}};
        for (const auto& q : listed)
            if (distance(q, m) <= 1e-6) return true;
        return false;
    };
    // orbit representative: mu1 + mu2 > 0 and mu1 < mu2
    const auto canonical = [](Magnetization m) {
        if (m.mu1 + m.mu2 < 0.0) m = {-m.mu1, -m.mu2};
        if (m.mu1 > m.mu2) std::swap(m.mu1, m.mu2);
        return m;
    };

    std::vector<Magnetization> orbits;
    // no damped pre-iteration here: these seeds already sit on the curve,
    // and the fixed-point map repels along it near saddle-type roots
    const auto try_seed = [&](Magnetization m) {
        const auto out = newton_mean_field(p, m);
        if (!out.converged || known(out.m)) return;
        if (mean_field_residual_norm(p, out.m) > tol::mean_field_residual) return;
        dedup_insert(orbits, canonical(out.m));
    };

    for (int pass = 0; pass < 2 && orbits.size() != 1; ++pass) {
        orbits.clear();
        const int n_seeds = pass == 0 ? 128 : 512;
        for (int i = 1; i <= n_seeds; ++i) {
            const double x1 = 0.999 * i / (n_seeds + 1);
            const double x2 = (r.t * atanh_guarded(x1) - r.a * x1) / r.b;
            if (std::abs(x2) < 1.0) try_seed({x1, x2});
        }
        for (int i = 0; i <= n_seeds; ++i) {
            const double x2 = -0.999 + 1.998 * i / n_seeds;
            for (double u : eq1_scalar_roots(r, x2)) try_seed({u, x2});
        }
    }
    if (orbits.size() != 1)
        throw solver_error("asymmetric branch: expected one symmetry orbit, found " +
                           std::to_string(orbits.size()));

    const Magnetization rep = orbits.front();
    std::vector<Magnetization> full = {rep,
                                       {rep.mu2, rep.mu1},
                                       {-rep.mu1, -rep.mu2},
                                       {-rep.mu2, -rep.mu1}};
    std::sort(full.begin(), full.end(), [](const Magnetization& x, const Magnetization& y) {
        return x.mu1 != y.mu1 ? x.mu1 < y.mu1 : x.mu2 < y.mu2;
    });
    return full;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Enumeration
// ---------------------------------------------------------------------------

/// All critical points of the zero-field symmetric model, via the analytic
/// case tree. Order: origin, leading-branch pair, lesser-branch pair, then
/// asymmetric points sorted by location.
inline std::vector<CriticalPoint> enumerate_symmetric(const ReducedParams& r) {
    const CaseLabel label = classify_case(r);
    const bool mirrored = label.family == CaseFamily::MirroredBySymmetry;
    const ReducedParams base = mirrored ? make_reduced(r.a, -r.b, r.t) : r;
    const ModelParams p = to_model_params(base);

    std::vector<Magnetization> locs;
    std::vector<Branch> branches;
    locs.push_back({0.0, 0.0});
    branches.push_back(Branch::Origin);

    double x_tilde = 0.0, x_hat = 0.0;
    if (label.base_family == CaseFamily::PosJ11NegJ12) {
        const bool has_tilde = label.regime != Regime::A && label.regime != Regime::B;
        const bool has_hat = label.regime == Regime::F || label.regime == Regime::G;
        if (has_tilde) {
            x_tilde = solve_x_tilde(base.t).root;
            locs.push_back({x_tilde, -x_tilde});
            locs.push_back({-x_tilde, x_tilde});
            branches.insert(branches.end(), 2, Branch::AntiDiagonal);
        }
        if (has_hat) {
            x_hat = solve_x_hat(base.t, base.b).root;
            locs.push_back({x_hat, x_hat});
            locs.push_back({-x_hat, -x_hat});
            branches.insert(branches.end(), 2, Branch::Diagonal);
        }
        if (label.regime == Regime::G) {
            for (const auto& m : detail::asymmetric_points(base, x_tilde, x_hat)) {
                locs.push_back(m);
                branches.push_back(Branch::Asymmetric);
            }
        }
    } else if (label.base_family == CaseFamily::NegJ11BigJ12) {
        if (label.regime == Regime::B) {
            x_tilde = solve_x_tilde(base.t).root;
            locs.push_back({x_tilde, x_tilde});
            locs.push_back({-x_tilde, -x_tilde});
            branches.insert(branches.end(), 2, Branch::Diagonal);
        }
    }
    // family 3: only the origin

    std::vector<CriticalPoint> out;
    out.reserve(locs.size());
    for (std::size_t i = 0; i < locs.size(); ++i) {
        CriticalPoint cp = detail::make_point(p, locs[i], branches[i]);
        if (mirrored) {
            cp.location.mu1 = -cp.location.mu1;
            cp.branch = detail::tag_branch(cp.location);
        }
        out.push_back(cp);
    }
    return out;
}

/// Numeric critical-point finder for arbitrary parameters: damped fixed-point
/// iteration from a seed grid, Newton polish, deduplication, numeric
/// classification. Non-converging seeds are dropped and counted.
inline std::vector<CriticalPoint> find_critical_points_generic(
    const ModelParams& p, int seed_grid = 21, FinderDiagnostics* diag = nullptr) {
    p.validate();
    if (seed_grid < 1) throw domain_error("find_critical_points_generic: seed_grid must be >= 1");

    FinderDiagnostics local;
    std::vector<Magnetization> pts;
    for (int i = 0; i < seed_grid; ++i) {
        for (int j = 0; j < seed_grid; ++j) {
            ++local.seeds_total;
            Magnetization m{
                seed_grid == 1 ? 0.0 : -0.95 + 1.9 * i / (seed_grid - 1),
                seed_grid == 1 ? 0.0 : -0.95 + 1.9 * j / (seed_grid - 1)};
            for (int k = 0; k < 10; ++k) {
                const Magnetization tm = mean_field_map(p, m);
                m = {0.5 * (m.mu1 + tm.mu1), 0.5 * (m.mu2 + tm.mu2)};
            }
            const auto out = detail::newton_mean_field(p, m);
            if (out.converged &&
                mean_field_residual_norm(p, out.m) <= tol::mean_field_residual) {
                ++local.seeds_converged;
                detail::dedup_insert(pts, out.m);
            } else {
                ++local.seeds_dropped;
            }
        }
    }
    std::sort(pts.begin(), pts.end(), [](const Magnetization& x, const Magnetization& y) {
        return x.mu1 != y.mu1 ? x.mu1 < y.mu1 : x.mu2 < y.mu2;
    });

    std::vector<CriticalPoint> out;
    out.reserve(pts.size());
    for (const auto& m : pts) out.push_back(detail::make_point(p, m, detail::tag_branch(m)));
    if (diag) *diag = local;
    return out;
}

} // namespace bimf
