#include "putkit/pricing.hpp"

#include <cmath>
#include <stdexcept>

#include "equation.hpp"
#include "putkit/closed_form.hpp"
#include "putkit/numerics.hpp"

namespace putkit {

namespace {

void check_boundary_cover(const ModelSpec& spec, const BoundaryCurve& boundary, double t) {
    if (boundary.maturity() != spec.maturity || t < boundary.grid().nodes().front())
        throw std::invalid_argument("american_put_eep: boundary does not cover [t, T]");
}

PriceDecomposition decompose(const detail::Dynamics& dyn, const BoundaryCurve& boundary,
                             double t, double x,
                             const std::function<double(double)>& strike_at,
                             const std::function<double(double)>& strike_slope_at) {
    if (!(x > 0.0)) throw std::domain_error("american_put_eep: spot must be positive");
    PriceDecomposition out;
    out.t = t;
    out.spot = x;
    out.european = detail::european_put_value(dyn, t, x);
    if (t < dyn.spec.maturity) {
        auto boundary_at = [&boundary](double u) { return boundary(u); };
        const detail::PremiumEvaluator premium(dyn, t, boundary.grid().nodes(), boundary_at,
                                               /*first_known=*/t,
                                               /*product_rule=*/true, strike_at,
                                               strike_slope_at);
        out.premium = premium.value(x);
    }
    out.american = out.european + out.premium;
    return out;
}

}  // namespace

double european_put(const ModelSpec& spec, double t, double x) {
    spec.validate();
    return detail::european_put_value(detail::Dynamics(spec), t, x);
}

PriceDecomposition american_put_eep(const ModelSpec& spec, const BoundaryCurve& boundary,
                                    double t, double x) {
    spec.validate();
    check_boundary_cover(spec, boundary, t);
    if (spec.family == ModelFamily::strike) {
        if (spec.drift_shift != 0.0)
            throw std::invalid_argument(
                "american_put_eep: strike family with m != 0 needs the solved K(t) curve");
        return decompose(
            detail::Dynamics(spec), boundary, t, x,
            [&spec](double u) { return strike_function(spec, u); },
            [&spec](double u) { return detail::strike_slope_closed_form(spec, u); });
    }
    return decompose(detail::Dynamics(spec), boundary, t, x, {}, {});
}

PriceDecomposition american_put_eep(const ModelSpec& spec, const BoundaryCurve& boundary,
                                    const SolvedStrikeCurve& strike_curve, double t, double x) {
    spec.validate();
    if (spec.family != ModelFamily::strike)
        throw std::invalid_argument("american_put_eep: strike curve overload is for the strike family");
    check_boundary_cover(spec, boundary, t);
    return decompose(
        detail::Dynamics(spec), boundary, t, x,
        [&strike_curve](double u) { return strike_curve.value(u); },
        [&strike_curve](double u) { return strike_curve.slope(u); });
}

std::vector<double> spot_ladder(double b_t, double strike, std::size_t count) {
    if (!(b_t > 0.0) || !(strike > 0.0) || count < 2)
        throw std::invalid_argument("spot_ladder: bad arguments");
    const double lo = 0.5 * b_t;
    const double hi = 4.0 * strike;
    std::vector<double> out(count);
    const double step = std::log(hi / lo) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) out[i] = lo * std::exp(step * static_cast<double>(i));
    return out;
}

}  // namespace putkit
