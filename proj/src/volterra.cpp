#include "putkit/volterra.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "equation.hpp"
#include "putkit/closed_form.hpp"
#include "putkit/errors.hpp"
#include "putkit/numerics.hpp"

namespace putkit {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Log-linear interpolation over the solved suffix values[lo..].
double interp_suffix(std::span<const double> nodes, std::span<const double> values,
                     std::size_t lo, double u) {
    auto it = std::lower_bound(nodes.begin() + static_cast<std::ptrdiff_t>(lo), nodes.end(), u);
    std::size_t hi = static_cast<std::size_t>(it - nodes.begin());
    if (hi == lo && nodes[hi] >= u) return values[lo];
    if (nodes[hi] == u) return values[hi];
    const double frac = (u - nodes[hi - 1]) / (nodes[hi] - nodes[hi - 1]);
    return values[hi - 1] * std::exp(frac * std::log(values[hi] / values[hi - 1]));
}

double residual_impl(const BoundaryCurve& boundary, const ModelSpec& spec, double t,
                     const std::function<double(double)>& strike_at,
                     const std::function<double(double)>& strike_slope_at) {
    spec.validate();
    if (!(t >= 0.0) || !(t < spec.maturity))
        throw std::domain_error("residual: t must lie in [0, T)");
    if (boundary.maturity() != spec.maturity)
        throw std::invalid_argument("residual: boundary grid does not match the model maturity");

    const detail::Dynamics dyn(spec);
    const double bt = boundary(t);
    auto boundary_at = [&boundary](double u) { return boundary(u); };
    const detail::PremiumEvaluator premium(dyn, t, boundary.grid().nodes(), boundary_at,
                                           /*first_known=*/t, /*product_rule=*/true,
                                           strike_at, strike_slope_at);
    const double lhs_strike =
        spec.family == ModelFamily::strike ? strike_at(t) : spec.strike;
    return (lhs_strike - bt) - detail::european_put_value(dyn, t, bt) - premium.value(bt);
}

}  // namespace

SolverConfig default_solver_config(const ModelSpec& spec, std::size_t nodes) {
    spec.validate();
    return SolverConfig{TimeGrid::refined(spec.maturity, nodes), 1e-10, 200, true};
}

namespace detail {

void solve_backward(const ModelSpec& spec, const SolverConfig& cfg,
                    std::vector<double>& values, std::size_t from) {
    const Dynamics dyn(spec);
    const auto nodes = cfg.grid.nodes();
    const double strike = spec.strike;
    const double tol = cfg.fixed_point_tol_rel * strike;
    const double floor = 1e-10 * strike;

    for (std::size_t i = from; i-- > 0;) {
        const double t = nodes[i];
        auto boundary_at = [&](double u) { return interp_suffix(nodes, values, i + 1, u); };
        const PremiumEvaluator premium(dyn, t, nodes, boundary_at, nodes[i + 1],
                                       cfg.product_rule);

        // Value matching K - b = V^e(t, b) + premium(b) holds throughout the
        // stopping region, so the boundary is its largest root and the raw
        // map K - V^e - premium is degenerate below it. Regrouping by powers
        // of b gives the equivalent fixed point
        //   b = K (1 - e^{-int r} N(D-) - P1) / (1 - e^{-int delta} N(D+) - P2)
        // whose slope at the root stays in (0, 1) but can reach ~0.96, so the
        // direct iteration runs in Steffensen cycles: two map steps, then a
        // guarded Aitken extrapolation. t -> b(t) is non-decreasing, so the
        // solved next node caps every iterate; the cap also pins the fixed
        // point where tiny sigma saturates all the N factors and the equation
        // carries no information.
        const double ceiling = values[i + 1];
        auto step_map = [&](double x) {
            const EuropeanParts eur = european_put_parts(dyn, t, x);
            const PremiumEvaluator::Parts prem = premium.parts(x);
            const double numer = 1.0 - eur.strike_factor - prem.gain / strike;
            const double denom = 1.0 - eur.spot_factor - prem.loss;
            if (denom > 1e-12 && numer > 0.0)
                return std::clamp(strike * numer / denom, floor, ceiling);
            // Raw map K - V^e - premium off the well-posed region.
            return std::clamp(strike * (1.0 - eur.strike_factor) - prem.gain +
                                  x * (eur.spot_factor + prem.loss),
                              floor, ceiling);
        };
        double b = values[i + 1];
        bool converged = false;
        for (int it = 0; it < cfg.max_iterations; ++it) {
            const double t1 = step_map(b);
            if (std::abs(t1 - b) <= tol) {
                b = t1;
                converged = true;
                break;
            }
            const double t2 = step_map(t1);
            if (std::abs(t2 - t1) <= tol) {
                b = t2;
                converged = true;
                break;
            }
            const double d1 = t1 - b;
            const double d2 = t2 - t1;
            double next = t2;
            if (d2 != d1) {
                // Verified Aitken step: accept the extrapolation only when its
                // own map residual improves on the plain step, which keeps
                // the iterate out of the non-monotone zone below the root.
                const double aitken = b - d1 * d1 / (d2 - d1);
                if (std::isfinite(aitken) && aitken > floor && aitken <= ceiling) {
                    const double t3 = step_map(aitken);
                    if (std::abs(t3 - aitken) <= tol) {
                        b = t3;
                        converged = true;
                        break;
                    }
                    if (std::abs(t3 - aitken) < std::abs(d2)) next = t3;
                }
            }
            b = next;
        }
        if (!converged)
            throw solver_error("boundary fixed point did not converge at node " +
                               std::to_string(i) + " (t = " + std::to_string(t) + ")");
        values[i] = b;
    }
}

}  // namespace detail

BoundaryCurve solve_standard_boundary(const ModelSpec& spec, const SolverConfig& cfg) {
    spec.validate();
    if (spec.family != ModelFamily::standard)
        throw std::invalid_argument("solve_standard_boundary: standard family only");
    std::vector<double> values(cfg.grid.size());
    values.back() = terminal_boundary(spec);
    detail::solve_backward(spec, cfg, values, cfg.grid.size() - 1);
    return BoundaryCurve(cfg.grid, std::move(values));
}

BoundaryCurve solve_td_boundary(const ModelSpec& spec, const SolverConfig& cfg) {
    spec.validate();
    if (spec.family != ModelFamily::rate && spec.family != ModelFamily::dividend &&
        spec.family != ModelFamily::vol)
        throw std::invalid_argument("solve_td_boundary: rate, dividend or vol family only");
    std::vector<double> values(cfg.grid.size());
    values.back() = terminal_boundary(spec);
    detail::solve_backward(spec, cfg, values, cfg.grid.size() - 1);
    return BoundaryCurve(cfg.grid, std::move(values));
}

double residual(const BoundaryCurve& boundary, const ModelSpec& spec, double t) {
    if (spec.family == ModelFamily::strike) {
        if (spec.drift_shift != 0.0)
            throw std::invalid_argument(
                "residual: strike family with m != 0 needs the solved K(t) curve");
        return residual_impl(
            boundary, spec, t, [&spec](double u) { return strike_function(spec, u); },
            [&spec](double u) { return detail::strike_slope_closed_form(spec, u); });
    }
    return residual_impl(boundary, spec, t, {}, {});
}

double residual(const BoundaryCurve& boundary, const ModelSpec& spec,
                const SolvedStrikeCurve& strike_curve, double t) {
    if (spec.family != ModelFamily::strike)
        throw std::invalid_argument("residual: strike curve overload is for the strike family");
    return residual_impl(
        boundary, spec, t, [&strike_curve](double u) { return strike_curve.value(u); },
        [&strike_curve](double u) { return strike_curve.slope(u); });
}

ResidualReport residual_report(const BoundaryCurve& boundary, const ModelSpec& spec,
                               std::span<const double> times) {
    ResidualReport report;
    report.times.assign(times.begin(), times.end());
    report.residuals.reserve(times.size());
    for (double t : times) {
        const double res = std::abs(residual(boundary, spec, t));
        report.residuals.push_back(res);
        report.max_residual = std::max(report.max_residual, res);
    }
    return report;
}

SolvedStrikeCurve::SolvedStrikeCurve(TimeGrid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_.size())
        throw std::invalid_argument("SolvedStrikeCurve: one value per grid node required");
    const auto nodes = grid_.nodes();
    const std::size_t n = values_.size();
    for (double v : values_)
        if (v <= 0.0) all_positive_ = false;
    // Second-order slopes on the non-uniform grid, one-sided at the ends.
    slopes_.resize(n);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double hl = nodes[i] - nodes[i - 1];
        const double hr = nodes[i + 1] - nodes[i];
        slopes_[i] = ((values_[i + 1] - values_[i]) / hr) * hl / (hl + hr) +
                     ((values_[i] - values_[i - 1]) / hl) * hr / (hl + hr);
    }
    slopes_.front() = (values_[1] - values_[0]) / (nodes[1] - nodes[0]);
    slopes_.back() = (values_[n - 1] - values_[n - 2]) / (nodes[n - 1] - nodes[n - 2]);
}

double SolvedStrikeCurve::value(double t) const {
    const auto nodes = grid_.nodes();
    if (t < nodes.front() || t > nodes.back())
        throw std::domain_error("SolvedStrikeCurve: t outside [0, T]");
    std::size_t hi = grid_.lower_node(t);
    if (hi == 0) return values_.front();
    if (nodes[hi] == t) return values_[hi];
    const double frac = (t - nodes[hi - 1]) / (nodes[hi] - nodes[hi - 1]);
    return values_[hi - 1] + frac * (values_[hi] - values_[hi - 1]);
}

double SolvedStrikeCurve::slope(double t) const {
    const auto nodes = grid_.nodes();
    if (t < nodes.front() || t > nodes.back())
        throw std::domain_error("SolvedStrikeCurve: t outside [0, T]");
    std::size_t hi = grid_.lower_node(t);
    if (hi == 0) return slopes_.front();
    if (nodes[hi] == t) return slopes_[hi];
    const double frac = (t - nodes[hi - 1]) / (nodes[hi] - nodes[hi - 1]);
    return slopes_[hi - 1] + frac * (slopes_[hi] - slopes_[hi - 1]);
}

double SolvedStrikeCurve::integral(double a, double b) const {
    if (a > b) throw std::domain_error("SolvedStrikeCurve: a > b");
    // Exact integral of the piecewise-linear interpolant.
    const auto nodes = grid_.nodes();
    double acc = 0.0;
    double left = a;
    double vleft = value(a);
    for (std::size_t i = grid_.lower_node(a); i < nodes.size() && nodes[i] < b; ++i) {
        if (nodes[i] <= left) continue;
        acc += 0.5 * (vleft + values_[i]) * (nodes[i] - left);
        left = nodes[i];
        vleft = values_[i];
    }
    acc += 0.5 * (vleft + value(b)) * (b - left);
    return acc;
}

SolvedStrikeCurve solve_strike_linear(const ModelSpec& spec, const SolverConfig& cfg) {
    spec.validate();
    if (spec.family != ModelFamily::strike)
        throw std::invalid_argument("solve_strike_linear: strike family only");

    const auto nodes = cfg.grid.nodes();
    const std::size_t n = nodes.size();
    const double T = spec.maturity;
    const double sigma = spec.sigma;
    const double m = spec.drift_shift;
    const double gamma = m + spec.rate - 0.5 * sigma * sigma;
    const double c = spec.rate + 0.5 * m * m / (sigma * sigma);
    // Kernel coefficient m n(0) / sigma: the n(0) = 1/sqrt(2 pi) comes from
    // dN(m sqrt(u-t)/sigma) in the parts integration of the pasting equation
    // (without it the solved K fails that equation by O(m)).
    const double kernel_coef = m / (sigma * std::sqrt(2.0 * kPi));

    // Antiderivatives of the weakly singular kernel e^{-c w} / sqrt(w) and of
    // sqrt(w) e^{-c w}.
    auto I0 = [c](double w) { return std::sqrt(kPi / c) * std::erf(std::sqrt(c * w)); };
    auto I1 = [c, &I0](double w) {
        return 0.5 * I0(w) / c - std::sqrt(w) * std::exp(-c * w) / c;
    };
    auto forcing = [&](double t) {
        const double tau = T - t;
        return 2.0 * spec.strike * std::exp(-gamma * tau) *
               norm_cdf(-(m / sigma - sigma) * std::sqrt(tau));
    };

    std::vector<double> values(n);
    values.back() = spec.strike;
    for (std::size_t i = n - 1; i-- > 0;) {
        const double t = nodes[i];
        double total = 0.0;
        double self_coef = 0.0;
        for (std::size_t j = i; j + 1 < n; ++j) {
            const double wl = nodes[j] - t;
            const double wr = nodes[j + 1] - t;
            const double dw = wr - wl;
            const double j0 = I0(wr) - I0(wl);
            const double j1 = I1(wr) - I1(wl);
            const double coef_left = (wr * j0 - j1) / dw;
            const double coef_right = (j1 - wl * j0) / dw;
            if (j == i)
                self_coef = coef_left;
            else
                total += coef_left * values[j];
            total += coef_right * values[j + 1];
        }
        const double denom = 1.0 - kernel_coef * self_coef;
        if (!(denom > 0.0))
            throw solver_error("solve_strike_linear: singular node equation at t = " +
                               std::to_string(t));
        values[i] = (forcing(t) + kernel_coef * total) / denom;
    }
    return SolvedStrikeCurve(cfg.grid, std::move(values));
}

}  // namespace putkit
