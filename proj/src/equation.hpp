#pragma once

// Internal machinery shared by the Volterra solver, the residual evaluator
// and the EEP pricer: model dynamics bundled per family, the generalized
// European put value and the early-exercise-premium quadrature.

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "putkit/model.hpp"

namespace putkit::detail {

/// Rate, dividend and variance term structures of a model, with cumulative
/// integrals exposed directly.
struct Dynamics {
    explicit Dynamics(const ModelSpec& s);

    ModelSpec spec;
    std::shared_ptr<const TermStructure> rate;
    std::shared_ptr<const TermStructure> dividend;
    std::shared_ptr<const TermStructure> variance;

    [[nodiscard]] double rate_integral(double a, double b) const { return rate->integral(a, b); }
    [[nodiscard]] double dividend_integral(double a, double b) const {
        return dividend->integral(a, b);
    }
    [[nodiscard]] double variance_integral(double a, double b) const {
        return variance->integral(a, b);
    }
};

/// V^e(t, x) = K * strike_factor - x * spot_factor, exposed separately so the
/// boundary solver can regroup the equation by powers of b.
struct EuropeanParts {
    double strike_factor = 0.0;  // e^{-int r} N(d-)
    double spot_factor = 0.0;    // e^{-int delta} N(d+)
};

EuropeanParts european_put_parts(const Dynamics& dyn, double t, double x);

/// Generalized European put: K e^{-int r} N(d-) - x e^{-int delta} N(d+) with
/// the model's parameter integrals. For the strike family the strike is K(T)
/// and delta = 0. Returns the payoff at t = T.
double european_put_value(const Dynamics& dyn, double t, double x);

/// K'(u) of the strike family's closed-form K (m = 0); blows up like
/// -(T - u)^{-1/2} at maturity.
double strike_slope_closed_form(const ModelSpec& spec, double u);

/// Early-exercise-premium integrals at fixed t, reusable across spot values.
/// For the non-strike families:
///   premium(x) = int_t^T K e^{-int r} r(u) N(d-(u, x)) du
///              - x int_t^T e^{-int delta} delta(u) N(d+(u, x)) du.
/// For the strike family the single integrand is
///   e^{-r (u - t)} (r K(u) - K'(u)) N(d-(u, x)).
/// The default rule is product integration: the kernel measures have exact
/// antiderivatives through the term structures, so per-panel masses are exact
/// and only the N factors are sampled. This makes the (T - u)^{-1/2} blow-ups
/// of r(u), delta(u) and K'(u) invisible to the quadrature.
class PremiumEvaluator {
public:
    /// boundary_at(u) must be valid on [first_known, T] and additionally at t
    /// itself when t >= first_known (residual / pricing use); strike_at is
    /// required for the strike family, strike_slope_at only with
    /// product_rule = false.
    PremiumEvaluator(const Dynamics& dyn, double t, std::span<const double> grid_nodes,
                     const std::function<double(double)>& boundary_at,
                     double first_known,
                     bool product_rule = true,
                     const std::function<double(double)>& strike_at = {},
                     const std::function<double(double)>& strike_slope_at = {});

    /// Premium split by powers of the spot: premium = gain - x * loss, with
    /// gain = int K e^{-int r} r N(d-) du and loss = int e^{-int delta}
    /// delta N(d+) du (the strike family folds everything into gain).
    struct Parts {
        double gain = 0.0;
        double loss = 0.0;
    };

    [[nodiscard]] Parts parts(double x) const;

    /// Premium at spot x > 0 (x doubles as the trial boundary value for the
    /// dynamic knots below first_known).
    [[nodiscard]] double value(double x) const {
        const Parts p = parts(x);
        return p.gain - x * p.loss;
    }

private:
    struct Knot {
        double gain = 0.0;      // weighted gain-side coefficient
        double loss = 0.0;      // weighted loss-side coefficient (times x later)
        double log_b = 0.0;     // log boundary at u
        double drift = 0.0;     // (int r - int delta)(t, u)
        double half_var = 0.0;  // 0.5 int sigma^2 (t, u)
        double stdev = 0.0;     // sqrt(int sigma^2 (t, u)); 0 flags the u = t limit
        bool at_spot = false;   // u = t knot whose boundary is the spot argument
    };
    std::vector<Knot> knots_;
};

}  // namespace putkit::detail
