#include "putkit/closed_form.hpp"

#include <cmath>
#include <stdexcept>

#include "putkit/errors.hpp"
#include "putkit/numerics.hpp"

namespace putkit {

namespace {

void check_family(const ModelSpec& spec, ModelFamily want, const char* who) {
    if (spec.family != want)
        throw std::invalid_argument(std::string(who) + ": wrong model family");
}

void check_open_time(const ModelSpec& spec, double t, const char* who) {
    if (!(t >= 0.0) || !(t < spec.maturity))
        throw std::domain_error(std::string(who) + ": t must lie in [0, T)");
}

void check_closed_time(const ModelSpec& spec, double t, const char* who) {
    if (!(t >= 0.0) || !(t <= spec.maturity))
        throw std::domain_error(std::string(who) + ": t must lie in [0, T]");
}

// Rate family helpers. With a = sqrt(2 delta + sigma^2), the growth factor
// D(t) = 1 + (2 sigma / a)(N(a sqrt(T - t)) - 1/2) satisfies
// exp(int_t^T gamma) = D(t) for gamma = r - delta - sigma^2/2, whence
// b = K / D and int r has a log closed form.
double rate_alpha(const ModelSpec& spec) { return std::sqrt(2.0 * spec.dividend + spec.sigma * spec.sigma); }

double rate_growth(const ModelSpec& spec, double t) {
    const double a = rate_alpha(spec);
    const double tau = spec.maturity - t;
    return 1.0 + (2.0 * spec.sigma / a) * (norm_cdf(a * std::sqrt(tau)) - 0.5);
}

// Dividend family helpers: E(t) = 1 - (2 sigma / a)(N(a sqrt(T - t)) - 1/2)
// with a = sqrt(2 r + sigma^2); b = K E and exp(-int_t^T gamma) = E(t) for
// gamma = r - delta + sigma^2/2.
double div_alpha(const ModelSpec& spec) { return std::sqrt(2.0 * spec.rate + spec.sigma * spec.sigma); }

double div_factor(const ModelSpec& spec, double t) {
    const double a = div_alpha(spec);
    const double tau = spec.maturity - t;
    return 1.0 - (2.0 * spec.sigma / a) * (norm_cdf(a * std::sqrt(tau)) - 0.5);
}

}  // namespace

double rate_function(const ModelSpec& spec, double t) {
    check_family(spec, ModelFamily::rate, "rate_function");
    check_open_time(spec, t, "rate_function");
    const double a = rate_alpha(spec);
    const double tau = spec.maturity - t;
    const double gamma =
        norm_pdf(a * std::sqrt(tau)) / rate_growth(spec, t) * spec.sigma / std::sqrt(tau);
    return gamma + spec.dividend + 0.5 * spec.sigma * spec.sigma;
}

double boundary_rate(const ModelSpec& spec, double t) {
    check_family(spec, ModelFamily::rate, "boundary_rate");
    check_closed_time(spec, t, "boundary_rate");
    return spec.strike / rate_growth(spec, t);
}

double dividend_function(const ModelSpec& spec, double t) {
    check_family(spec, ModelFamily::dividend, "dividend_function");
    check_open_time(spec, t, "dividend_function");
    const double a = div_alpha(spec);
    const double tau = spec.maturity - t;
    const double factor = div_factor(spec, t);
    if (factor <= 1e-6)
        throw model_validity_error("dividend_function: boundary factor not positive");
    const double gamma = norm_pdf(a * std::sqrt(tau)) / factor * spec.sigma / std::sqrt(tau);
    return spec.rate - gamma + 0.5 * spec.sigma * spec.sigma;
}

double boundary_dividend(const ModelSpec& spec, double t) {
    check_family(spec, ModelFamily::dividend, "boundary_dividend");
    check_closed_time(spec, t, "boundary_dividend");
    const double b = spec.strike * div_factor(spec, t);
    if (b <= 1e-6 * spec.strike)
        throw model_validity_error("boundary_dividend: boundary not positive");
    return b;
}

double phi(const ModelSpec& spec, double t) {
    check_family(spec, ModelFamily::vol, "phi");
    check_closed_time(spec, t, "phi");
    const double tau = spec.maturity - t;
    if (tau == 0.0) return 0.0;
    const double target = 0.5 * std::exp(spec.rate * tau);
    // g(x) = e^{x^2/2} N(x) is strictly increasing, g(0) = 1/2, and
    // g(x) >= e^{x^2/2}/2 for x >= 0, so sqrt(2 r tau) brackets the root.
    const double hi = std::sqrt(2.0 * spec.rate * tau) + 1e-12;
    auto g = [target](double x) { return std::exp(0.5 * x * x) * norm_cdf(x) - target; };
    return find_root_increasing(g, 0.0, hi, 1e-14);
}

double vol_function(const ModelSpec& spec, double t) {
    check_family(spec, ModelFamily::vol, "vol_function");
    check_open_time(spec, t, "vol_function");
    const double p = phi(spec, t);
    // Implicit differentiation of e^{phi^2/2} N(phi) = e^{r(T-t)}/2 gives
    // sigma^2 = -2 phi phi' = 2 r phi N(phi) / (phi N(phi) + n(phi)).
    const double np = norm_cdf(p);
    return std::sqrt(2.0 * spec.rate * p * np / (p * np + norm_pdf(p)));
}

double boundary_vol(const ModelSpec& spec, double t) {
    check_family(spec, ModelFamily::vol, "boundary_vol");
    check_closed_time(spec, t, "boundary_vol");
    return spec.strike / (2.0 * norm_cdf(phi(spec, t)));
}

double strike_function(const ModelSpec& spec, double t) {
    check_family(spec, ModelFamily::strike, "strike_function");
    check_closed_time(spec, t, "strike_function");
    if (spec.drift_shift != 0.0)
        throw std::invalid_argument(
            "strike_function: closed form exists only for m = 0; solve the linear "
            "Volterra equation instead");
    const double tau = spec.maturity - t;
    const double gamma = spec.rate - 0.5 * spec.sigma * spec.sigma;
    return 2.0 * spec.strike * std::exp(-gamma * tau) * norm_cdf(spec.sigma * std::sqrt(tau));
}

double boundary_strike(const ModelSpec& spec, double t) {
    check_family(spec, ModelFamily::strike, "boundary_strike");
    check_closed_time(spec, t, "boundary_strike");
    const double gamma = spec.drift_shift + spec.rate - 0.5 * spec.sigma * spec.sigma;
    return spec.strike * std::exp(-gamma * (spec.maturity - t));
}

double closed_form_boundary(const ModelSpec& spec, double t) {
    switch (spec.family) {
        case ModelFamily::rate: return boundary_rate(spec, t);
        case ModelFamily::dividend: return boundary_dividend(spec, t);
        case ModelFamily::vol: return boundary_vol(spec, t);
        case ModelFamily::strike: return boundary_strike(spec, t);
        case ModelFamily::standard:
            throw std::invalid_argument(
                "closed_form_boundary: the standard family has no closed form; use the "
                "Volterra solver");
    }
    throw std::invalid_argument("closed_form_boundary: unknown family");
}

BoundaryCurve sample_closed_form_boundary(const ModelSpec& spec, const TimeGrid& grid) {
    std::vector<double> values(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) values[i] = closed_form_boundary(spec, grid[i]);
    return BoundaryCurve(grid, std::move(values));
}

double terminal_boundary(const ModelSpec& spec) {
    switch (spec.family) {
        case ModelFamily::standard:
            return spec.dividend > spec.rate ? spec.strike * spec.rate / spec.dividend
                                             : spec.strike;
        case ModelFamily::rate:
        case ModelFamily::dividend:
        case ModelFamily::vol:
        case ModelFamily::strike:
            return spec.strike;
    }
    throw std::invalid_argument("terminal_boundary: unknown family");
}

namespace {

class ConstantStructure final : public TermStructure {
public:
    explicit ConstantStructure(double c) : c_(c) {}
    double value(double) const override { return c_; }
    double integral(double a, double b) const override { return c_ * (b - a); }

private:
    double c_;
};

class RateStructure final : public TermStructure {
public:
    explicit RateStructure(ModelSpec spec) : spec_(spec) {}
    double value(double t) const override { return rate_function(spec_, t); }
    double integral(double a, double b) const override {
        // int_a^b gamma = log D(a) - log D(b); the divergence at T integrates
        // to a finite value since D(T) = 1.
        return std::log(rate_growth(spec_, a) / rate_growth(spec_, b)) +
               (spec_.dividend + 0.5 * spec_.sigma * spec_.sigma) * (b - a);
    }

private:
    ModelSpec spec_;
};

class DividendStructure final : public TermStructure {
public:
    explicit DividendStructure(ModelSpec spec) : spec_(spec) {}
    double value(double t) const override { return dividend_function(spec_, t); }
    double integral(double a, double b) const override {
        return (spec_.rate + 0.5 * spec_.sigma * spec_.sigma) * (b - a) -
               std::log(div_factor(spec_, b) / div_factor(spec_, a));
    }

private:
    ModelSpec spec_;
};

class VarianceStructure final : public TermStructure {
public:
    explicit VarianceStructure(ModelSpec spec) : spec_(spec) {}
    double value(double t) const override {
        if (t == spec_.maturity) return 0.0;  // sigma(T-) = 0
        const double s = vol_function(spec_, t);
        return s * s;
    }
    double integral(double a, double b) const override {
        // phi^2(t) is the remaining variance int_t^T sigma^2.
        const double pa = phi(spec_, a);
        const double pb = phi(spec_, b);
        return pa * pa - pb * pb;
    }

private:
    ModelSpec spec_;
};

}  // namespace

std::shared_ptr<const TermStructure> make_rate_structure(const ModelSpec& spec) {
    spec.validate();
    if (spec.family == ModelFamily::rate) return std::make_shared<RateStructure>(spec);
    return std::make_shared<ConstantStructure>(spec.rate);
}

std::shared_ptr<const TermStructure> make_dividend_structure(const ModelSpec& spec) {
    spec.validate();
    if (spec.family == ModelFamily::dividend) return std::make_shared<DividendStructure>(spec);
    if (spec.family == ModelFamily::vol || spec.family == ModelFamily::strike)
        return std::make_shared<ConstantStructure>(0.0);
    return std::make_shared<ConstantStructure>(spec.dividend);
}

std::shared_ptr<const TermStructure> make_variance_structure(const ModelSpec& spec) {
    spec.validate();
    if (spec.family == ModelFamily::vol) return std::make_shared<VarianceStructure>(spec);
    return std::make_shared<ConstantStructure>(spec.sigma * spec.sigma);
}

}  // namespace putkit
