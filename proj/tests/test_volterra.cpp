#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "putkit/closed_form.hpp"
#include "putkit/errors.hpp"
#include "putkit/pricing.hpp"
#include "putkit/volterra.hpp"

using namespace putkit;

namespace {
const ModelSpec kStd{ModelFamily::standard, 100.0, 1.0, 0.05, 0.0, 0.2, 0.0};
const ModelSpec kRateFig{ModelFamily::rate, 1.0, 10.0, 0.0, 0.0, 0.3, 0.0};
const ModelSpec kDivFig{ModelFamily::dividend, 1.0, 10.0, 0.05, 0.0, 0.3, 0.0};
const ModelSpec kVolFig{ModelFamily::vol, 1.0, 10.0, 0.05, 0.0, 0.0, 0.0};
const ModelSpec kStrikeFig{ModelFamily::strike, 1.0, 10.0, 0.05, 0.0, 0.2, 0.0};

std::vector<double> interior_times(double maturity, int count, double cap_frac = 1.0) {
    std::vector<double> out;
    for (int i = 0; i < count; ++i)
        out.push_back(maturity * cap_frac * static_cast<double>(i) / count);
    return out;
}
}  // namespace

TEST_CASE("standard solver: terminal condition") {
    ModelSpec high_div = kStd;
    high_div.dividend = 0.10;
    const BoundaryCurve curve =
        solve_standard_boundary(high_div, default_solver_config(high_div, 96));
    CHECK(curve.terminal() == 50.0);  // K min(1, r/delta)
}

TEST_CASE("standard solver: continuity at maturity for tiny T") {
    ModelSpec tiny = kStd;
    tiny.maturity = 1e-6;
    tiny.dividend = 0.10;
    const BoundaryCurve curve = solve_standard_boundary(tiny, default_solver_config(tiny, 64));
    CHECK(std::abs(curve(0.0) - 50.0) <= 1e-3 * 100.0);
}

TEST_CASE("time-dependent solver matches the closed forms to 1e-3 K") {
    // Includes a rate-family case with nonzero dividend so the loss-side
    // integral is exercised too.
    const ModelSpec rate_div{ModelFamily::rate, 1.0, 10.0, 0.0, 0.03, 0.3, 0.0};
    for (const ModelSpec* spec : {&kRateFig, &kDivFig, &kVolFig, &rate_div}) {
        const SolverConfig cfg = default_solver_config(*spec, 512);
        const BoundaryCurve solved = solve_td_boundary(*spec, cfg);
        double worst = 0.0;
        for (std::size_t i = 0; i < cfg.grid.size(); ++i) {
            const double gap = std::abs(solved.values()[i] - closed_form_boundary(*spec, cfg.grid[i]));
            worst = std::max(worst, gap);
        }
        CHECK(worst <= 1e-3 * spec->strike);
    }
}

TEST_CASE("closed-form boundaries satisfy their integral equations") {
    const TimeGrid grid = TimeGrid::refined(10.0, 4096);
    for (const ModelSpec* spec : {&kRateFig, &kDivFig, &kVolFig, &kStrikeFig}) {
        const BoundaryCurve curve = sample_closed_form_boundary(*spec, grid);
        double worst = 0.0;
        for (double t : interior_times(10.0, 16, 0.999)) {
            worst = std::max(worst, std::abs(residual(curve, *spec, t)));
        }
        CHECK(worst <= 1e-4 * spec->strike);
    }
}

TEST_CASE("residual flags a perturbed boundary") {
    const TimeGrid grid = TimeGrid::refined(10.0, 1024);
    const BoundaryCurve curve = sample_closed_form_boundary(kRateFig, grid);
    CHECK(std::abs(residual(curve.scaled(1.05), kRateFig, 0.0)) > 1e-3 * kRateFig.strike);
    // Both sides vanish at maturity (evaluate at the penultimate grid node,
    // where the curve is free of interpolation error).
    CHECK(std::abs(residual(curve, kRateFig, grid[grid.size() - 2])) <= 1e-5);
    CHECK_THROWS_AS(residual(curve, kRateFig, 10.0), std::domain_error);
}

TEST_CASE("grid refinement shrinks the standard-model residual") {
    auto max_residual = [&](std::size_t nodes) {
        const SolverConfig cfg = default_solver_config(kStd, nodes);
        const BoundaryCurve curve = solve_standard_boundary(kStd, cfg);
        double worst = 0.0;
        for (double t : interior_times(1.0, 8, 0.99))
            worst = std::max(worst, std::abs(residual(curve, kStd, t)));
        return worst;
    };
    const double coarse = max_residual(256);
    const double fine = max_residual(512);
    CHECK(coarse / fine >= 1.5);
}

TEST_CASE("prefix recomputation with identical suffix is bit-identical") {
    const SolverConfig cfg = default_solver_config(kStd, 128);
    const BoundaryCurve full = solve_standard_boundary(kStd, cfg);
    std::vector<double> values(full.values().begin(), full.values().end());
    // Wipe the prefix and recompute it against the untouched suffix.
    const std::size_t from = 64;
    for (std::size_t i = 0; i < from; ++i) values[i] = 0.0;
    detail::solve_backward(kStd, cfg, values, from);
    for (std::size_t i = 0; i < values.size(); ++i) CHECK(values[i] == full.values()[i]);
}

TEST_CASE("solver output is monotone across the parameter box") {
    for (double r : {0.02, 0.4}) {
        for (double delta : {0.02, 0.4}) {
            for (double sigma : {0.02, 0.4}) {
                for (double maturity : {0.25, 1.0, 5.0}) {
                    ModelSpec spec{ModelFamily::standard, 100.0, maturity, r, delta, sigma, 0.0};
                    const BoundaryCurve curve =
                        solve_standard_boundary(spec, default_solver_config(spec, 128));
                    const auto vals = curve.values();
                    for (std::size_t i = 1; i < vals.size(); ++i)
                        CHECK(vals[i] >= vals[i - 1] * (1.0 - 1e-9));
                    CHECK(vals.front() > 0.0);
                    CHECK(vals.back() <= 100.0);
                }
            }
        }
    }
}

TEST_CASE("strike solver: m = 0 reproduces the closed form") {
    const SolverConfig cfg = default_solver_config(kStrikeFig, 512);
    const SolvedStrikeCurve curve = solve_strike_linear(kStrikeFig, cfg);
    CHECK(curve.values().back() == 1.0);
    double worst = 0.0;
    for (std::size_t i = 0; i < cfg.grid.size(); ++i)
        worst = std::max(worst,
                         std::abs(curve.values()[i] - strike_function(kStrikeFig, cfg.grid[i])));
    CHECK(worst <= 1e-5);
    CHECK(curve.all_positive());
}

TEST_CASE("solved strike curve: integral of the interpolant") {
    const SolverConfig cfg = default_solver_config(kStrikeFig, 128);
    const SolvedStrikeCurve curve = solve_strike_linear(kStrikeFig, cfg);
    // Additive, and consistent with a trapezoid over the curve's own values.
    CHECK(std::abs(curve.integral(0.0, 4.0) + curve.integral(4.0, 10.0) -
                   curve.integral(0.0, 10.0)) <= 1e-10);
    double trap = 0.0;
    const int n = 4000;
    for (int i = 0; i < n; ++i) {
        const double a = 2.0 + 6.0 * i / n;
        const double b = 2.0 + 6.0 * (i + 1) / n;
        trap += 0.5 * (curve.value(a) + curve.value(b)) * (b - a);
    }
    CHECK(std::abs(curve.integral(2.0, 8.0) - trap) <= 1e-8);
    CHECK_THROWS_AS((void)curve.integral(5.0, 1.0), std::domain_error);
}

TEST_CASE("strike solver: linear in K(T)") {
    ModelSpec twice = kStrikeFig;
    twice.strike = 2.0;
    twice.drift_shift = 0.02;
    ModelSpec base = kStrikeFig;
    base.drift_shift = 0.02;
    const SolverConfig cfg_base = default_solver_config(base, 256);
    const SolvedStrikeCurve a = solve_strike_linear(base, cfg_base);
    const SolverConfig cfg_twice = default_solver_config(twice, 256);
    const SolvedStrikeCurve b = solve_strike_linear(twice, cfg_twice);
    for (std::size_t i = 0; i < a.values().size(); ++i)
        CHECK(std::abs(b.values()[i] / a.values()[i] - 2.0) <= 1e-12);
}

TEST_CASE("strike solver: refinement self-oracle and m-ordering for m = +-0.02") {
    ModelSpec plus = kStrikeFig;
    plus.drift_shift = 0.02;
    ModelSpec minus = kStrikeFig;
    minus.drift_shift = -0.02;

    const SolverConfig coarse_p = default_solver_config(plus, 256);
    const SolverConfig fine_p = default_solver_config(plus, 1024);
    const SolvedStrikeCurve kp_c = solve_strike_linear(plus, coarse_p);
    const SolvedStrikeCurve kp_f = solve_strike_linear(plus, fine_p);
    const SolverConfig coarse_m = default_solver_config(minus, 256);
    const SolverConfig fine_m = default_solver_config(minus, 1024);
    const SolvedStrikeCurve km_c = solve_strike_linear(minus, coarse_m);
    const SolvedStrikeCurve km_f = solve_strike_linear(minus, fine_m);

    double worst = 0.0;
    for (double t : interior_times(10.0, 32))
        worst = std::max({worst, std::abs(kp_c.value(t) - kp_f.value(t)),
                          std::abs(km_c.value(t) - km_f.value(t))});
    CHECK(worst <= 1e-4);

    // Ordering of the K(t) curves against m is resolution-independent.
    const SolverConfig cfg0 = default_solver_config(kStrikeFig, 1024);
    const SolvedStrikeCurve k0 = solve_strike_linear(kStrikeFig, cfg0);
    for (double t : interior_times(10.0, 8)) {
        const bool plus_above_coarse = kp_c.value(t) > k0.value(t);
        const bool plus_above_fine = kp_f.value(t) > k0.value(t);
        CHECK(plus_above_coarse == plus_above_fine);
        const bool minus_above_coarse = km_c.value(t) > k0.value(t);
        const bool minus_above_fine = km_f.value(t) > k0.value(t);
        CHECK(minus_above_coarse == minus_above_fine);
    }
}

TEST_CASE("strike residual: solved K satisfies the pasting equation, m != 0") {
    ModelSpec spec = kStrikeFig;
    spec.drift_shift = 0.02;
    const SolverConfig cfg = default_solver_config(spec, 2048);
    const SolvedStrikeCurve kcurve = solve_strike_linear(spec, cfg);
    const BoundaryCurve bcurve = sample_closed_form_boundary(spec, cfg.grid);
    double worst = 0.0;
    for (double t : interior_times(10.0, 16, 0.99))
        worst = std::max(worst, std::abs(residual(bcurve, spec, kcurve, t)));
    // K' comes from second-order differences of the solved curve; the
    // residual budget is accordingly looser than the closed-form cases.
    CHECK(worst <= 1e-3);
}

TEST_CASE("solver errors") {
    ModelSpec spec = kStd;
    SolverConfig cfg = default_solver_config(spec, 64);
    cfg.max_iterations = 1;
    CHECK_THROWS_AS(solve_standard_boundary(spec, cfg), solver_error);
    CHECK_THROWS_AS(solve_td_boundary(kStd, default_solver_config(kStd, 64)),
                    std::invalid_argument);
    CHECK_THROWS_AS(solve_strike_linear(kStd, default_solver_config(kStd, 64)),
                    std::invalid_argument);
}
