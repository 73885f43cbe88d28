#include "putkit/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "equation.hpp"
#include "putkit/closed_form.hpp"

namespace putkit {

namespace {

constexpr double kTwoPi = 6.283185307179586476925287;

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Small counter-based generator: xorshift over a splitmix-derived state.
// Box-Muller pairs; explicit so the draw sequence is portable.
struct NormalSampler {
    std::uint64_t state;
    bool has_spare = false;
    double spare = 0.0;

    explicit NormalSampler(std::uint64_t seed, std::uint64_t path)
        : state(splitmix64(splitmix64(seed) ^ (path + 0x632BE59BD9B4E019ull))) {}

    double uniform() {
        // xorshift64*
        state ^= state >> 12;
        state ^= state << 25;
        state ^= state >> 27;
        const std::uint64_t bits = state * 0x2545F4914F6CDD1Dull;
        return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
    }

    double normal() {
        if (has_spare) {
            has_spare = false;
            return spare;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = kTwoPi * u2;
        spare = radius * std::sin(angle);
        has_spare = true;
        return radius * std::cos(angle);
    }
};

McEstimate run_policy(const ModelSpec& spec, const BoundaryCurve& boundary,
                      const SolvedStrikeCurve* strike_curve, const McConfig& cfg, double t,
                      double x) {
    spec.validate();
    if (cfg.paths < 100) throw std::invalid_argument("mc_policy_value: need at least 100 paths");
    if (cfg.steps_per_year < 1)
        throw std::invalid_argument("mc_policy_value: steps_per_year must be >= 1");
    if (!(x > 0.0)) throw std::domain_error("mc_policy_value: spot must be positive");
    const double T = spec.maturity;
    if (!(t >= 0.0) || t > T) throw std::domain_error("mc_policy_value: t outside [0, T]");
    if (boundary.maturity() != T || t < boundary.grid().nodes().front())
        throw std::invalid_argument("mc_policy_value: boundary does not cover [t, T]");
    const bool strike_family = spec.family == ModelFamily::strike;
    if (strike_family && spec.drift_shift != 0.0 && strike_curve == nullptr)
        throw std::invalid_argument("mc_policy_value: strike family with m != 0 needs K(t)");

    auto strike_at = [&](double u) {
        if (!strike_family) return spec.strike;
        if (strike_curve != nullptr) return strike_curve->value(u);
        return strike_function(spec, u);
    };

    // Immediate exercise at t is part of the stopping rule.
    if (x <= boundary(t) || t == T)
        return {std::max(strike_at(t) - x, 0.0), 0.0};

    const detail::Dynamics dyn(spec);
    const int steps = std::max<int>(1, static_cast<int>(std::ceil((T - t) * cfg.steps_per_year)));
    std::vector<double> drift(steps), stdev(steps), discount(steps), log_b(steps),
        kslice(steps);
    for (int k = 0; k < steps; ++k) {
        const double a = k == 0 ? t : t + (T - t) * static_cast<double>(k) / steps;
        const double b = k + 1 == steps ? T : t + (T - t) * static_cast<double>(k + 1) / steps;
        const double s2 = dyn.variance_integral(a, b);
        drift[k] = dyn.rate_integral(a, b) - dyn.dividend_integral(a, b) - 0.5 * s2;
        stdev[k] = std::sqrt(s2);
        discount[k] = std::exp(-dyn.rate_integral(t, b));
        log_b[k] = std::log(boundary(b));
        kslice[k] = strike_at(b);
    }

    const std::int64_t n = cfg.paths;
    std::vector<double> payoff(static_cast<std::size_t>(n));
    const double lx0 = std::log(x);
    const bool par = cfg.exec == Exec::parallel;

#pragma omp parallel for schedule(static) if (par)
    for (std::int64_t p = 0; p < n; ++p) {
        NormalSampler rng(cfg.seed, static_cast<std::uint64_t>(p));
        double lx = lx0;
        double value = 0.0;
        for (int k = 0; k < steps; ++k) {
            lx += drift[k] + stdev[k] * rng.normal();
            if (lx <= log_b[k]) {
                value = discount[k] * std::max(kslice[k] - std::exp(lx), 0.0);
                goto settled;
            }
        }
        value = discount[steps - 1] * std::max(kslice[steps - 1] - std::exp(lx), 0.0);
    settled:
        payoff[static_cast<std::size_t>(p)] = value;
    }

    // Fixed-order reduction keeps the estimate independent of thread count.
    double mean = 0.0;
    for (double v : payoff) mean += v;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double v : payoff) var += (v - mean) * (v - mean);
    var /= static_cast<double>(n - 1);
    return {mean, std::sqrt(var / static_cast<double>(n))};
}

}  // namespace

McEstimate mc_policy_value(const ModelSpec& spec, const BoundaryCurve& boundary,
                           const McConfig& cfg, double t, double x) {
    return run_policy(spec, boundary, nullptr, cfg, t, x);
}

McEstimate mc_policy_value(const ModelSpec& spec, const BoundaryCurve& boundary,
                           const SolvedStrikeCurve& strike_curve, const McConfig& cfg,
                           double t, double x) {
    if (spec.family != ModelFamily::strike)
        throw std::invalid_argument(
            "mc_policy_value: strike curve overload is for the strike family");
    return run_policy(spec, boundary, &strike_curve, cfg, t, x);
}

}  // namespace putkit
