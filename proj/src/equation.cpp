#include "equation.hpp"

#include <cmath>
#include <stdexcept>

#include "putkit/closed_form.hpp"
#include "putkit/numerics.hpp"

namespace putkit::detail {

Dynamics::Dynamics(const ModelSpec& s)
    : spec(s),
      rate(make_rate_structure(s)),
      dividend(make_dividend_structure(s)),
      variance(make_variance_structure(s)) {}

EuropeanParts european_put_parts(const Dynamics& dyn, double t, double x) {
    if (!(x > 0.0)) throw std::domain_error("european_put: spot must be positive");
    const double T = dyn.spec.maturity;
    if (!(t >= 0.0) || t > T) throw std::domain_error("european_put: t outside [0, T]");
    const double strike = dyn.spec.strike;  // K(T) for the strike family
    if (t == T) return {x < strike ? 1.0 : 0.0, x < strike ? 1.0 : 0.0};

    const double rint = dyn.rate_integral(t, T);
    const double dint = dyn.dividend_integral(t, T);
    const double s2 = dyn.variance_integral(t, T);
    const double s = std::sqrt(s2);
    const double lk = std::log(strike / x);
    const double d_minus = (lk - (rint - dint) + 0.5 * s2) / s;
    const double d_plus = (lk - (rint - dint) - 0.5 * s2) / s;
    return {std::exp(-rint) * norm_cdf(d_minus), std::exp(-dint) * norm_cdf(d_plus)};
}

double european_put_value(const Dynamics& dyn, double t, double x) {
    const EuropeanParts p = european_put_parts(dyn, t, x);
    const double strike = dyn.spec.strike;
    if (t == dyn.spec.maturity) return std::max(strike - x, 0.0);
    return strike * p.strike_factor - x * p.spot_factor;
}

double strike_slope_closed_form(const ModelSpec& spec, double u) {
    const double tau = spec.maturity - u;
    const double gamma = spec.rate - 0.5 * spec.sigma * spec.sigma;
    const double base = strike_function(spec, u);
    if (tau == 0.0) return gamma * base;
    return gamma * base - spec.strike * std::exp(-gamma * tau) * spec.sigma *
                              norm_pdf(spec.sigma * std::sqrt(tau)) / std::sqrt(tau);
}

PremiumEvaluator::PremiumEvaluator(const Dynamics& dyn, double t,
                                   std::span<const double> grid_nodes,
                                   const std::function<double(double)>& boundary_at,
                                   double first_known, bool product_rule,
                                   const std::function<double(double)>& strike_at,
                                   const std::function<double(double)>& strike_slope_at) {
    const ModelSpec& spec = dyn.spec;
    const double T = spec.maturity;
    if (t >= T) return;  // empty: premium is 0 at maturity

    const bool strike_family = spec.family == ModelFamily::strike;
    std::vector<double> u{t};
    for (double g : grid_nodes)
        if (g > t && g < T) u.push_back(g);
    u.push_back(T);
    const std::size_t n = u.size();

    knots_.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        Knot& k = knots_[j];
        const double rint = dyn.rate_integral(t, u[j]);
        const double dint = dyn.dividend_integral(t, u[j]);
        const double s2 = dyn.variance_integral(t, u[j]);
        k.drift = rint - dint;
        k.half_var = 0.5 * s2;
        k.stdev = j == 0 ? 0.0 : std::sqrt(s2);
        if (j == 0 && t < first_known) {
            // Solver case: the spot argument is itself the trial boundary
            // value at t, so the N factors take their mid limit 1/2.
            k.log_b = 0.0;
            k.at_spot = true;
        } else {
            k.log_b = std::log(j == 0 ? boundary_at(t) : boundary_at(u[j]));
            k.at_spot = false;
        }
    }

    if (product_rule) {
        // Product integration: the kernel measures K e^{-int r} r(u) du =
        // -d[K e^{-int r}] and e^{-int delta} delta(u) du = -d[e^{-int delta}]
        // (for the strike family e^{-r w}(r K - K') du = -d[e^{-r w} K(u)])
        // carry exact panel masses; only the smooth N factor is sampled, by
        // trapezoid, so the endpoint blow-ups never enter the quadrature.
        std::vector<double> disc_gain(n), disc_loss(n);
        for (std::size_t j = 0; j < n; ++j) {
            const double rint = dyn.rate_integral(t, u[j]);
            disc_gain[j] = strike_family ? std::exp(-rint) * strike_at(u[j])
                                         : spec.strike * std::exp(-rint);
            disc_loss[j] = strike_family ? 0.0 : std::exp(-dyn.dividend_integral(t, u[j]));
        }
        for (std::size_t p = 0; p + 1 < n; ++p) {
            const double gain_mass = disc_gain[p] - disc_gain[p + 1];
            const double loss_mass = disc_loss[p] - disc_loss[p + 1];
            knots_[p].gain += 0.5 * gain_mass;
            knots_[p + 1].gain += 0.5 * gain_mass;
            knots_[p].loss += 0.5 * loss_mass;
            knots_[p + 1].loss += 0.5 * loss_mass;
        }
    } else {
        // Reference rule: plain trapezoid on the raw integrand (undefined for
        // the families whose integrand blows up at T; kept for refinement
        // studies on the standard family).
        std::vector<double> w(n, 0.0);
        for (std::size_t p = 0; p + 1 < n; ++p) {
            const double h = u[p + 1] - u[p];
            w[p] += 0.5 * h;
            w[p + 1] += 0.5 * h;
        }
        for (std::size_t j = 0; j < n; ++j) {
            Knot& k = knots_[j];
            const double rint = dyn.rate_integral(t, u[j]);
            const double dint = dyn.dividend_integral(t, u[j]);
            if (strike_family) {
                k.gain = w[j] * std::exp(-rint) *
                         (spec.rate * strike_at(u[j]) - strike_slope_at(u[j]));
                k.loss = 0.0;
            } else {
                k.gain = w[j] * spec.strike * std::exp(-rint) * dyn.rate->value(u[j]);
                k.loss = w[j] * std::exp(-dint) * dyn.dividend->value(u[j]);
            }
        }
    }
}

namespace {
double step_limit(double base) {
    if (base > 0.0) return 1.0;
    if (base < 0.0) return 0.0;
    return 0.5;
}
}  // namespace

PremiumEvaluator::Parts PremiumEvaluator::parts(double x) const {
    const double lx = std::log(x);
    Parts out;
    for (const Knot& k : knots_) {
        const double base = k.at_spot ? 0.0 : k.log_b - lx - k.drift;
        if (k.stdev == 0.0) {
            const double nn = step_limit(base);
            out.gain += k.gain * nn;
            out.loss += k.loss * nn;
            continue;
        }
        out.gain += k.gain * norm_cdf((base + k.half_var) / k.stdev);
        if (k.loss != 0.0) out.loss += k.loss * norm_cdf((base - k.half_var) / k.stdev);
    }
    return out;
}

}  // namespace putkit::detail
