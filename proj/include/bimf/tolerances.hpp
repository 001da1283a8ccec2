#pragma once

namespace bimf::tol {

// All numeric tolerances of the library in one place.

/// Target residual for the scalar root solvers.
inline constexpr double root_residual = 1e-12;

/// Bisection stops refining the bracket below this width; Newton polishing
/// takes over from there.
inline constexpr double bisection_width = 1e-8;

/// atanh inputs are clamped to |x| <= 1 - atanh_guard to avoid overflow.
inline constexpr double atanh_guard = 1e-15;

/// |det H| at or below this value routes a critical point to the
/// degenerate-classification path.
inline constexpr double hessian_degenerate = 1e-9;

/// Width of the analytic boundary windows (t near 1, near the lambda-ratio,
/// near t-check) used to key the degenerate taxonomy.
inline constexpr double boundary_window = 1e-9;

/// Required mean-field residual for a point reported as critical.
inline constexpr double mean_field_residual = 1e-10;

/// Gradient residual above which classify_point refuses the input.
inline constexpr double critical_gradient = 1e-8;

/// Euclidean radius used to merge duplicate critical points.
inline constexpr double dedup_radius = 1e-7;

/// Two maxima whose f values differ by less than this tie and form a
/// degenerate ground state.
inline constexpr double tie = 1e-10;

} // namespace bimf::tol
