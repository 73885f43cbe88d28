// putkit command line: exercise boundaries, prices, parameter term
// structures and validation reports for the American put models.
//
// Exit codes: 0 success, 2 usage or parameter error, 3 model-validity error,
// 4 solver non-convergence, 5 validation failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "putkit/closed_form.hpp"
#include "putkit/errors.hpp"
#include "putkit/lattice.hpp"
#include "putkit/monte_carlo.hpp"
#include "putkit/pricing.hpp"
#include "putkit/volterra.hpp"

using namespace putkit;
using nlohmann::json;

namespace {

struct Options {
    std::string model = "standard";
    std::optional<double> rate;
    std::optional<double> dividend;
    std::optional<double> sigma;
    std::optional<double> strike;
    std::optional<double> strike_terminal;
    std::optional<double> maturity;
    double drift_shift = 0.0;
    std::size_t grid = 512;
    std::optional<double> spot;
    double t = 0.0;
    std::uint64_t seed = 42;
    std::string out;
    std::string suite = "all";
};

ModelFamily parse_family(const std::string& name) {
    if (name == "standard") return ModelFamily::standard;
    if (name == "rate") return ModelFamily::rate;
    if (name == "dividend") return ModelFamily::dividend;
    if (name == "vol") return ModelFamily::vol;
    if (name == "strike") return ModelFamily::strike;
    throw std::invalid_argument("unknown model family: " + name);
}

// Canonical per-family parameter sets fill whatever the caller left unset.
ModelSpec build_spec(const Options& opt) {
    const ModelFamily family = parse_family(opt.model);
    ModelSpec spec;
    spec.family = family;
    switch (family) {
        case ModelFamily::standard:
            spec.strike = opt.strike.value_or(100.0);
            spec.maturity = opt.maturity.value_or(1.0);
            spec.rate = opt.rate.value_or(0.05);
            spec.dividend = opt.dividend.value_or(0.0);
            spec.sigma = opt.sigma.value_or(0.2);
            break;
        case ModelFamily::rate:
            spec.strike = opt.strike.value_or(1.0);
            spec.maturity = opt.maturity.value_or(10.0);
            spec.rate = opt.rate.value_or(0.0);
            spec.dividend = opt.dividend.value_or(0.0);
            spec.sigma = opt.sigma.value_or(0.3);
            break;
        case ModelFamily::dividend:
            spec.strike = opt.strike.value_or(1.0);
            spec.maturity = opt.maturity.value_or(10.0);
            spec.rate = opt.rate.value_or(0.05);
            spec.dividend = opt.dividend.value_or(0.0);
            spec.sigma = opt.sigma.value_or(0.3);
            break;
        case ModelFamily::vol:
            spec.strike = opt.strike.value_or(1.0);
            spec.maturity = opt.maturity.value_or(10.0);
            spec.rate = opt.rate.value_or(0.05);
            spec.dividend = 0.0;
            spec.sigma = opt.sigma.value_or(0.0);
            break;
        case ModelFamily::strike:
            spec.strike = opt.strike_terminal.value_or(opt.strike.value_or(1.0));
            spec.maturity = opt.maturity.value_or(10.0);
            spec.rate = opt.rate.value_or(0.05);
            spec.dividend = 0.0;
            spec.sigma = opt.sigma.value_or(0.2);
            spec.drift_shift = opt.drift_shift;
            break;
    }
    spec.validate();
    return spec;
}

std::string fmt12(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

// Atomic write: temp file in the target directory, then rename.
void write_output(const std::string& out, const std::string& text) {
    if (out.empty()) {
        std::fwrite(text.data(), 1, text.size(), stdout);
        return;
    }
    const std::filesystem::path target(out);
    const std::filesystem::path tmp = target.string() + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot open " + tmp.string());
        f.write(text.data(), static_cast<std::streamsize>(text.size()));
    }
    std::filesystem::rename(tmp, target);
}

BoundaryCurve make_boundary(const ModelSpec& spec, std::size_t grid_nodes) {
    if (spec.family == ModelFamily::standard) {
        return solve_standard_boundary(spec, default_solver_config(spec, grid_nodes));
    }
    return sample_closed_form_boundary(spec, TimeGrid::refined(spec.maturity, grid_nodes));
}

int cmd_boundary(const Options& opt) {
    const ModelSpec spec = build_spec(opt);
    const BoundaryCurve curve = make_boundary(spec, opt.grid);
    std::string text = "t,b\n";
    for (std::size_t i = 0; i < curve.grid().size(); ++i)
        text += fmt12(curve.grid()[i]) + "," + fmt12(curve.values()[i]) + "\n";
    write_output(opt.out, text);
    return 0;
}

int cmd_params(const Options& opt) {
    const ModelSpec spec = build_spec(opt);
    if (spec.family == ModelFamily::standard)
        throw std::invalid_argument("params: the standard family has constant parameters");
    const TimeGrid grid = TimeGrid::refined(spec.maturity, opt.grid);
    std::optional<SolvedStrikeCurve> solved;
    if (spec.family == ModelFamily::strike && spec.drift_shift != 0.0) {
        solved = solve_strike_linear(spec, default_solver_config(spec, opt.grid));
        if (!solved->all_positive())
            std::fprintf(stderr, "warning: solved K(t) is not positive everywhere\n");
    }
    std::string text = "t,param\n";
    // The parameter functions live on [0, T); the last row stops one node
    // short of maturity, where the rate and dividend functions diverge.
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double t = grid[i];
        double value = 0.0;
        switch (spec.family) {
            case ModelFamily::standard: break;
            case ModelFamily::rate: value = rate_function(spec, t); break;
            case ModelFamily::dividend: value = dividend_function(spec, t); break;
            case ModelFamily::vol: value = vol_function(spec, t); break;
            case ModelFamily::strike:
                value = solved ? solved->value(t) : strike_function(spec, t);
                break;
        }
        text += fmt12(t) + "," + fmt12(value) + "\n";
    }
    write_output(opt.out, text);
    return 0;
}

int cmd_price(const Options& opt) {
    const ModelSpec spec = build_spec(opt);
    const BoundaryCurve curve = make_boundary(spec, opt.grid);
    std::optional<SolvedStrikeCurve> kcurve;
    if (spec.family == ModelFamily::strike && spec.drift_shift != 0.0) {
        kcurve = solve_strike_linear(spec, default_solver_config(spec, opt.grid));
        if (!kcurve->all_positive())
            std::fprintf(stderr, "warning: solved K(t) is not positive everywhere\n");
    }

    auto decompose = [&](double x) {
        return kcurve ? american_put_eep(spec, curve, *kcurve, opt.t, x)
                      : american_put_eep(spec, curve, opt.t, x);
    };

    std::string text = "x,european,premium,american\n";
    std::vector<double> spots;
    if (opt.spot)
        spots.push_back(*opt.spot);
    else
        spots = spot_ladder(curve(opt.t), spec.strike);
    for (double x : spots) {
        const PriceDecomposition p = decompose(x);
        text += fmt12(x) + "," + fmt12(p.european) + "," + fmt12(p.premium) + "," +
                fmt12(p.american) + "\n";
    }
    write_output(opt.out, text);
    return 0;
}

struct CheckLog {
    json checks = json::array();
    bool all_pass = true;

    void add(const std::string& name, double measured, double tolerance, bool pass) {
        std::printf("%s  %-52s measured=%-14.6g tol=%-10.4g\n", pass ? "PASS" : "FAIL",
                    name.c_str(), measured, tolerance);
        checks.push_back(
            {{"name", name}, {"measured", measured}, {"tolerance", tolerance}, {"pass", pass}});
        all_pass = all_pass && pass;
    }
};

ModelSpec canonical_spec(ModelFamily family) {
    Options opt;
    opt.model = to_string(family);
    return build_spec(opt);
}

void run_residuals(const Options& opt, CheckLog& log) {
    std::vector<ModelFamily> families;
    if (opt.model != "standard" && opt.model != "all")
        families.push_back(parse_family(opt.model));
    else
        families = {ModelFamily::rate, ModelFamily::dividend, ModelFamily::vol,
                    ModelFamily::strike};
    for (ModelFamily family : families) {
        const ModelSpec spec = canonical_spec(family);
        const TimeGrid grid = TimeGrid::refined(spec.maturity, 4096);
        const BoundaryCurve curve = sample_closed_form_boundary(spec, grid);
        std::vector<double> times;
        for (int i = 0; i < 64; ++i)
            times.push_back(spec.maturity * 0.999 * static_cast<double>(i) / 64.0);
        const ResidualReport report = residual_report(curve, spec, times);
        log.add("residuals: " + to_string(family) + " closed-form boundary, 64 times",
                report.max_residual, 1e-4 * spec.strike,
                report.max_residual <= 1e-4 * spec.strike);
    }
}

void run_limits(CheckLog& log) {
    for (ModelFamily family :
         {ModelFamily::rate, ModelFamily::dividend, ModelFamily::vol, ModelFamily::strike}) {
        const ModelSpec spec = canonical_spec(family);
        const BoundaryCurve curve =
            sample_closed_form_boundary(spec, TimeGrid::refined(spec.maturity, 512));
        const double gap = std::abs(curve(spec.maturity - 1e-10) - spec.strike);
        log.add("limits: " + to_string(family) + " boundary terminal value", gap, 1e-6,
                gap <= 1e-6);
        if (family != ModelFamily::strike) {  // strike boundary may decrease (r < sigma^2/2)
            const auto vals = curve.values();
            bool monotone = true;
            for (std::size_t i = 1; i < vals.size(); ++i)
                monotone = monotone && vals[i] >= vals[i - 1] * (1.0 - 1e-12);
            log.add("limits: " + to_string(family) + " boundary monotone",
                    monotone ? 1.0 : 0.0, 1.0, monotone);
        }
    }
    ModelSpec high_div{ModelFamily::standard, 100.0, 1.0, 0.05, 0.10, 0.2, 0.0};
    const BoundaryCurve solved =
        solve_standard_boundary(high_div, default_solver_config(high_div, 256));
    log.add("limits: standard solver terminal K min(1, r/delta)",
            std::abs(solved.terminal() - 50.0), 0.0, solved.terminal() == 50.0);
}

void run_lattice(const Options& opt, CheckLog& log) {
    Options std_opt = opt;
    std_opt.model = "standard";
    const ModelSpec spec = build_spec(std_opt);
    const BoundaryCurve solved = solve_standard_boundary(spec, default_solver_config(spec));
    const BoundaryCurve stairs = crr_boundary(spec, {4000});
    double worst = 0.0;
    for (int i = 1; i <= 16; ++i) {
        const double t = spec.maturity * i / 17.0;
        worst = std::max(worst, std::abs(stairs(t) - solved(t)) / solved(t));
    }
    log.add("lattice: solver vs 4000-step staircase at 16 times", worst, 0.01, worst <= 0.01);

    const double x = opt.spot.value_or(spec.strike);
    const double eep = american_put_eep(spec, solved, 0.0, x).american;
    const double lat = crr_price(spec, {5000}, 0.0, x);
    const double rel = std::abs(eep - lat) / lat;
    log.add("lattice: EEP price vs 5000-step lattice", rel, 2e-3, rel <= 2e-3);
}

void run_mc(const Options& opt, CheckLog& log) {
    std::vector<ModelFamily> families;
    if (opt.model == "rate" || opt.model == "dividend")
        families.push_back(parse_family(opt.model));
    else
        families = {ModelFamily::rate, ModelFamily::dividend};
    for (ModelFamily family : families) {
        const ModelSpec spec = canonical_spec(family);
        const BoundaryCurve curve =
            sample_closed_form_boundary(spec, TimeGrid::refined(spec.maturity, 1024));
        McConfig cfg{50000, 500, opt.seed, Exec::parallel};
        const McEstimate est = mc_policy_value(spec, curve, cfg, 0.0, spec.strike);
        const double eep = american_put_eep(spec, curve, 0.0, spec.strike).american;
        const double z = (est.value - eep) / est.std_error;
        log.add("mc: " + to_string(family) + " policy value vs EEP price |z|", std::abs(z),
                3.0, std::abs(z) <= 3.0);
    }
}

int cmd_validate(const Options& opt) {
    if (opt.suite != "residuals" && opt.suite != "lattice" && opt.suite != "mc" &&
        opt.suite != "limits" && opt.suite != "all")
        throw std::invalid_argument("unknown suite: " + opt.suite);
    CheckLog log;
    if (opt.suite == "residuals" || opt.suite == "all") run_residuals(opt, log);
    if (opt.suite == "limits" || opt.suite == "all") run_limits(log);
    if (opt.suite == "lattice" || opt.suite == "all") run_lattice(opt, log);
    if (opt.suite == "mc" || opt.suite == "all") run_mc(opt, log);
    if (!opt.out.empty()) {
        json report;
        report["suite"] = opt.suite;
        report["seed"] = opt.seed;
        report["checks"] = log.checks;
        report["pass"] = log.all_pass;
        write_output(opt.out, report.dump(2) + "\n");
    }
    std::printf("%s\n", log.all_pass ? "ALL CHECKS PASSED" : "VALIDATION FAILED");
    return log.all_pass ? 0 : 5;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"American put boundaries and prices for the time-dependent models"};
    app.fallthrough();
    Options opt;

    app.set_config("--config")->description("key = value file; flags take precedence");
    app.add_option("--model", opt.model, "standard|rate|dividend|vol|strike");
    app.add_option("--r", opt.rate, "interest rate");
    app.add_option("--delta", opt.dividend, "dividend yield");
    app.add_option("--sigma", opt.sigma, "volatility");
    app.add_option("--K", opt.strike, "strike");
    app.add_option("--KT", opt.strike_terminal, "terminal strike K(T), strike family");
    app.add_option("--T", opt.maturity, "maturity in years");
    app.add_option("--m", opt.drift_shift, "strike-family drift shift m");
    app.add_option("--grid", opt.grid, "time grid nodes")->check(CLI::Range(8, 100000));
    app.add_option("--spot", opt.spot, "spot for price; omit for the report ladder");
    app.add_option("--t", opt.t, "valuation time");
    app.add_option("--seed", opt.seed, "Monte-Carlo seed");
    app.add_option("--out", opt.out, "output path (atomic write); stdout if omitted");
    app.add_option("--suite", opt.suite, "validate: residuals|lattice|mc|limits|all");

    auto* boundary = app.add_subcommand("boundary", "exercise boundary CSV (t,b)");
    auto* price =
        app.add_subcommand("price", "price decomposition CSV (x,european,premium,american)");
    auto* params = app.add_subcommand("params", "parameter term structure CSV (t,param)");
    auto* validate = app.add_subcommand("validate", "run a validation suite");
    app.require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (boundary->parsed()) return cmd_boundary(opt);
        if (price->parsed()) return cmd_price(opt);
        if (params->parsed()) return cmd_params(opt);
        if (validate->parsed()) return cmd_validate(opt);
    } catch (const model_validity_error& e) {
        std::fprintf(stderr, "model validity error: %s\n", e.what());
        return 3;
    } catch (const solver_error& e) {
        std::fprintf(stderr, "solver error: %s\n", e.what());
        return 4;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "parameter error: %s\n", e.what());
        return 2;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "parameter error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
