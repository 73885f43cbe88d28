#pragma once

#include <functional>
#include <span>
#include <vector>

#include "putkit/time_grid.hpp"

namespace putkit {

/// Standard normal cdf, |error| <= 1e-12 for |x| <= 8, saturating to 0/1
/// beyond. Throws std::domain_error for non-finite input.
double norm_cdf(double x);

/// Standard normal pdf. Throws std::domain_error for non-finite input.
double norm_pdf(double x);

/// Root of a continuous strictly increasing f on [lo, hi] bracketing zero.
/// Bisects until the bracket is narrower than tol, then returns the midpoint.
/// Deterministic for fixed inputs. Throws std::invalid_argument if tol <= 0
/// or the bracket does not straddle a sign change.
double find_root_increasing(const std::function<double(double)>& f,
                            double lo, double hi, double tol);

/// Declares non-smooth endpoint behaviour of an integrand so the quadrature
/// can substitute it away. sqrt_left: f(a + w) smooth in sqrt(w) (value
/// finite, derivative ~ w^{-1/2}). inv_sqrt_right: f ~ (b - s)^{-1/2} near b
/// (integrable blow-up; f is never evaluated at exactly b).
struct IntegrandShape {
    bool sqrt_left = false;
    bool inv_sqrt_right = false;
};

/// Composite trapezoid over the caller's grid restricted to [a, b], with
/// square-root substitutions at endpoints flagged in shape. Grid nodes
/// outside (a, b) are ignored; a and b are always knots. Throws
/// std::invalid_argument if a > b; NaN from f propagates as
/// std::runtime_error.
double integrate(const std::function<double(double)>& f, double a, double b,
                 std::span<const double> grid, IntegrandShape shape = {});

/// Knots and product weights realizing the same rule as integrate(), so a
/// caller that evaluates many integrands on one interval can reuse them:
/// integral ~ sum_i weight[i] * f(knot[i]).
struct QuadraturePlan {
    std::vector<double> knots;
    std::vector<double> weights;
};

QuadraturePlan make_quadrature_plan(double a, double b, std::span<const double> grid,
                                    IntegrandShape shape = {});

}  // namespace putkit
