#include "putkit/lattice.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "equation.hpp"
#include "putkit/errors.hpp"
#include "putkit/closed_form.hpp"
#include "putkit/numerics.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace putkit {

namespace {

struct LatticePlan {
    int steps = 0;
    double root_spot = 0.0;
    double log_u = 0.0;             // per-step log up-move
    std::vector<double> up_prob;    // per step
    std::vector<double> discount;   // per step
    std::vector<double> kslice;     // exercise strike per slice (constant K
                                    // except for the strike family)
    std::vector<double> slice_time;
};

// Per-step probabilities/discounts for any family. Uniform time steps except
// the vol family, which uses an equal-variance grid so the tree recombines.
LatticePlan build_plan(const ModelSpec& spec, const detail::Dynamics& dyn, int steps,
                       double t, double x, const SolvedStrikeCurve* strike_curve) {
    if (steps < 2) throw std::invalid_argument("lattice: steps must be >= 2");
    const double T = spec.maturity;
    LatticePlan plan;
    plan.steps = steps;
    plan.root_spot = x;
    plan.up_prob.resize(steps);
    plan.discount.resize(steps);
    plan.slice_time.resize(steps + 1);

    if (spec.family == ModelFamily::vol) {
        const double total_var = dyn.variance_integral(t, T);
        const double dv = total_var / steps;
        plan.log_u = std::sqrt(dv);
        for (int k = 0; k <= steps; ++k) {
            // phi^2(tau_k) = total_var - k dv inverts in closed form through
            // g(phi) = e^{r (T - tau)} / 2.
            const double pk = std::sqrt(total_var - std::min(total_var, k * dv));
            const double g = std::exp(0.5 * pk * pk) * norm_cdf(pk);
            plan.slice_time[k] = T - std::log(2.0 * g) / spec.rate;
        }
        plan.slice_time[0] = t;
        plan.slice_time[steps] = T;
    } else {
        plan.log_u = spec.sigma * std::sqrt((T - t) / steps);
        for (int k = 0; k <= steps; ++k)
            plan.slice_time[k] = t + (T - t) * static_cast<double>(k) / steps;
    }

    const double u = std::exp(plan.log_u);
    const double d = 1.0 / u;
    for (int k = 0; k < steps; ++k) {
        const double a = plan.slice_time[k];
        const double b = plan.slice_time[k + 1];
        const double rint = dyn.rate_integral(a, b);
        const double dint = dyn.dividend_integral(a, b);
        const double growth = std::exp(rint - dint);
        const double p = (growth - d) / (u - d);
        if (!(p > 0.0) || !(p < 1.0))
            throw std::invalid_argument("lattice: risk-neutral probability left (0, 1); raise steps");
        plan.up_prob[k] = p;
        plan.discount[k] = std::exp(-rint);
    }

    plan.kslice.resize(steps + 1);
    for (int k = 0; k <= steps; ++k) {
        if (spec.family != ModelFamily::strike)
            plan.kslice[k] = spec.strike;
        else if (strike_curve != nullptr)
            plan.kslice[k] = strike_curve->value(plan.slice_time[k]);
        else
            plan.kslice[k] = strike_function(spec, plan.slice_time[k]);
    }
    return plan;
}

// Backward induction; optionally records, per slice, the highest node spot
// where exercising was chosen (0 when the slice has none). The OpenMP form
// uses one parallel region with a barrier per slice; slices shorter than the
// cutoff run in the serial tail, where threading costs more than it saves.
double run_backward(const LatticePlan& plan, bool par,
                    std::vector<double>* exercise_top = nullptr) {
    const int n = plan.steps;
    const double u2 = std::exp(2.0 * plan.log_u);
    std::vector<double> pow_u2(static_cast<std::size_t>(n) + 1);
    pow_u2[0] = 1.0;
    for (int j = 1; j <= n; ++j) pow_u2[j] = pow_u2[j - 1] * u2;

    std::vector<double> cur(static_cast<std::size_t>(n) + 1);
    std::vector<double> next(static_cast<std::size_t>(n) + 1);
    const double s_low_n = plan.root_spot * std::exp(-n * plan.log_u);
    for (int j = 0; j <= n; ++j)
        cur[j] = std::max(plan.kslice[n] - s_low_n * pow_u2[j], 0.0);
    if (exercise_top != nullptr) exercise_top->assign(static_cast<std::size_t>(n) + 1, 0.0);

    auto scan_top = [&](int i, const double* in) {
        const double s_low = plan.root_spot * std::exp(-i * plan.log_u);
        const double p = plan.up_prob[i];
        const double q = 1.0 - p;
        const double df = plan.discount[i];
        const double k = plan.kslice[i];
        double top = 0.0;
        for (int j = 0; j <= i; ++j) {
            const double cont = df * (p * in[j + 1] + q * in[j]);
            const double intr = k - s_low * pow_u2[j];
            if (intr >= cont && intr > 0.0)
                top = s_low * pow_u2[j];
            else
                break;  // exercise region is contiguous from below
        }
        (*exercise_top)[i] = top;
    };

    // Buffer roles follow the slice parity, so threads need no shared swap.
    auto src_of = [&](int i) { return ((n - 1 - i) % 2 == 0) ? cur.data() : next.data(); };
    auto dst_of = [&](int i) { return ((n - 1 - i) % 2 == 0) ? next.data() : cur.data(); };

    // The slice sweep is memory bound; with two hardware threads the
    // per-slice barrier outweighs the split, so the OpenMP phase engages from
    // three threads up and only for the long slices.
    int threads = 1;
#ifdef _OPENMP
    threads = omp_get_max_threads();
#endif
    const int cutoff = (par && threads > 2) ? std::min(n, 4096) : n;
    if (cutoff < n) {
#pragma omp parallel
        {
            for (int i = n - 1; i >= cutoff; --i) {
                const double* in = src_of(i);
                double* out = dst_of(i);
                const double s_low = plan.root_spot * std::exp(-i * plan.log_u);
                const double p = plan.up_prob[i];
                const double q = 1.0 - p;
                const double df = plan.discount[i];
                const double k = plan.kslice[i];
#pragma omp for schedule(static)
                for (int j = 0; j <= i; ++j) {
                    const double cont = df * (p * in[j + 1] + q * in[j]);
                    const double intr = k - s_low * pow_u2[j];
                    out[j] = cont >= intr ? cont : intr;
                }
                if (exercise_top != nullptr) {
#pragma omp single
                    scan_top(i, in);
                }
            }
        }
    }

    for (int i = std::min(cutoff, n) - 1; i >= 0; --i) {
        const double* in = src_of(i);
        double* out = dst_of(i);
        const double s_low = plan.root_spot * std::exp(-i * plan.log_u);
        const double p = plan.up_prob[i];
        const double q = 1.0 - p;
        const double df = plan.discount[i];
        const double k = plan.kslice[i];
        for (int j = 0; j <= i; ++j) {
            const double cont = df * (p * in[j + 1] + q * in[j]);
            const double intr = k - s_low * pow_u2[j];
            out[j] = cont >= intr ? cont : intr;
        }
        if (exercise_top != nullptr) scan_top(i, in);
    }
    return dst_of(0)[0];
}

}  // namespace

double crr_price(const ModelSpec& spec, const LatticeConfig& cfg, double t, double x) {
    spec.validate();
    if (spec.family != ModelFamily::standard)
        throw std::invalid_argument("crr_price: standard family only (see lattice_price)");
    if (!(x > 0.0)) throw std::domain_error("crr_price: spot must be positive");
    if (!(t >= 0.0) || t > spec.maturity) throw std::domain_error("crr_price: t outside [0, T]");
    if (t == spec.maturity) return std::max(spec.strike - x, 0.0);
    const detail::Dynamics dyn(spec);
    const LatticePlan plan = build_plan(spec, dyn, cfg.steps, t, x, nullptr);
    return run_backward(plan, cfg.exec == Exec::parallel);
}

BoundaryCurve crr_boundary(const ModelSpec& spec, const LatticeConfig& cfg) {
    spec.validate();
    if (spec.family != ModelFamily::standard)
        throw std::invalid_argument("crr_boundary: standard family only");
    const detail::Dynamics dyn(spec);
    // Rooting at K puts the node ladder where the boundary lives.
    const LatticePlan plan = build_plan(spec, dyn, cfg.steps, 0.0, spec.strike, nullptr);
    std::vector<double> top;
    run_backward(plan, cfg.exec == Exec::parallel, &top);

    // Slices near t = 0 can sit entirely above the boundary (no node
    // exercised); extend the first resolvable estimate to the left. The
    // terminal node repeats the last slice estimate.
    std::vector<double> values(static_cast<std::size_t>(plan.steps) + 1, 0.0);
    for (int i = 0; i < plan.steps; ++i) values[i] = top[i];
    values[plan.steps] = values[plan.steps - 1];
    double first_valid = 0.0;
    for (double v : values)
        if (v > 0.0) {
            first_valid = v;
            break;
        }
    if (first_valid == 0.0) throw solver_error("crr_boundary: no exercise region resolved");
    for (double& v : values) {
        if (v > 0.0)
            first_valid = v;
        else
            v = first_valid;
    }
    return BoundaryCurve(TimeGrid(plan.slice_time), std::move(values));
}

double lattice_price(const ModelSpec& spec, const LatticeConfig& cfg, double t, double x,
                     const SolvedStrikeCurve* strike_curve) {
    spec.validate();
    if (!(x > 0.0)) throw std::domain_error("lattice_price: spot must be positive");
    if (!(t >= 0.0) || t > spec.maturity)
        throw std::domain_error("lattice_price: t outside [0, T]");
    if (spec.family == ModelFamily::strike && spec.drift_shift != 0.0 && strike_curve == nullptr)
        throw std::invalid_argument("lattice_price: strike family with m != 0 needs K(t)");
    if (t == spec.maturity) {
        const double k = spec.family == ModelFamily::strike && strike_curve != nullptr
                             ? strike_curve->value(t)
                             : spec.strike;
        return std::max(k - x, 0.0);
    }
    const detail::Dynamics dyn(spec);
    const LatticePlan plan = build_plan(spec, dyn, cfg.steps, t, x, strike_curve);
    return run_backward(plan, cfg.exec == Exec::parallel);
}

}  // namespace putkit
