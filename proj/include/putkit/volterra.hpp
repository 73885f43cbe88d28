#pragma once

#include <span>
#include <vector>

#include "putkit/model.hpp"

namespace putkit {

/// Settings for the backward-induction boundary solvers.
struct SolverConfig {
    TimeGrid grid;
    double fixed_point_tol_rel = 1e-10;  ///< absolute tolerance is rel * K
    int max_iterations = 200;            ///< per time node
    /// Quadrature rule switch: product integration with exact kernel masses
    /// (the default) or plain trapezoid on the raw integrand (kept for
    /// refinement studies on the standard family).
    bool product_rule = true;
};

/// Default 512-node grid geometrically refined toward maturity.
SolverConfig default_solver_config(const ModelSpec& spec, std::size_t nodes = 512);

/// Residuals |LHS - RHS| of the family's boundary integral equation.
struct ResidualReport {
    std::vector<double> times;
    std::vector<double> residuals;
    double max_residual = 0.0;
};

/// Exercise boundary of the constant-parameter model by backward induction on
/// the nonlinear Volterra equation, from b(T-) = K min(1, r/delta) down to 0.
/// Throws solver_error when a node's fixed point fails to converge.
BoundaryCurve solve_standard_boundary(const ModelSpec& spec, const SolverConfig& cfg);

/// Same scheme for the rate / dividend / vol families, with the parameter
/// integrals supplied by the family's term structures.
BoundaryCurve solve_td_boundary(const ModelSpec& spec, const SolverConfig& cfg);

/// Time-dependent strike K(t) solved from the weakly singular linear Volterra
/// equation of the strike family (any m). Kernel integrals use the exact
/// antiderivative of e^{-c w} / sqrt(w); one backward pass, no iteration.
class SolvedStrikeCurve final : public TermStructure {
public:
    SolvedStrikeCurve(TimeGrid grid, std::vector<double> values);

    /// Piecewise-linear in t, matching the product-integration ansatz.
    [[nodiscard]] double value(double t) const override;
    [[nodiscard]] double integral(double a, double b) const override;
    /// K'(t) from second-order differences on the grid.
    [[nodiscard]] double slope(double t) const;

    [[nodiscard]] const TimeGrid& grid() const { return grid_; }
    [[nodiscard]] std::span<const double> values() const& { return values_; }
    std::span<const double> values() const&& = delete;  // would dangle
    /// False when the solved K(t) dips non-positive anywhere (kept as a
    /// warning flag rather than an error).
    [[nodiscard]] bool all_positive() const { return all_positive_; }

private:
    TimeGrid grid_;
    std::vector<double> values_;
    std::vector<double> slopes_;
    bool all_positive_ = true;
};

SolvedStrikeCurve solve_strike_linear(const ModelSpec& spec, const SolverConfig& cfg);

/// (K(t) - b(t)) - V^e(t, b(t)) - premium terms of the family's integral
/// equation, evaluated with the singularity-aware quadrature on the
/// boundary's grid. Zero (to quadrature accuracy) iff the boundary solves the
/// equation at t. For the strike family this overload requires m = 0.
double residual(const BoundaryCurve& boundary, const ModelSpec& spec, double t);

/// Strike-family residual with a solved K(t) curve (m may be nonzero).
double residual(const BoundaryCurve& boundary, const ModelSpec& spec,
                const SolvedStrikeCurve& strike_curve, double t);

ResidualReport residual_report(const BoundaryCurve& boundary, const ModelSpec& spec,
                               std::span<const double> times);

namespace detail {
/// Backward induction engine: fills values[i] for i < from, given
/// values[j] solved for j >= from. b(t_i) depends on later nodes only, so a
/// prefix recomputed against an identical suffix is bit-identical.
void solve_backward(const ModelSpec& spec, const SolverConfig& cfg,
                    std::vector<double>& values, std::size_t from);
}  // namespace detail

}  // namespace putkit
