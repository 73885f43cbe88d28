#include "putkit/model.hpp"

#include <cmath>
#include <stdexcept>

#include "putkit/closed_form.hpp"
#include "putkit/errors.hpp"
#include "putkit/numerics.hpp"

namespace putkit {

std::string to_string(ModelFamily family) {
    switch (family) {
        case ModelFamily::standard: return "standard";
        case ModelFamily::rate: return "rate";
        case ModelFamily::dividend: return "dividend";
        case ModelFamily::vol: return "vol";
        case ModelFamily::strike: return "strike";
    }
    return "?";
}

void ModelSpec::validate() const {
    auto require = [](bool ok, const char* msg) {
        if (!ok) throw std::invalid_argument(msg);
    };
    require(std::isfinite(strike) && strike > 0.0, "ModelSpec: strike must be positive");
    require(std::isfinite(maturity) && maturity > 0.0, "ModelSpec: maturity must be positive");
    require(std::isfinite(rate) && std::isfinite(dividend) && std::isfinite(sigma) &&
                std::isfinite(drift_shift),
            "ModelSpec: parameters must be finite");
    if (family != ModelFamily::strike)
        require(drift_shift == 0.0, "ModelSpec: drift_shift applies to the strike family only");

    switch (family) {
        case ModelFamily::standard:
            require(rate > 0.0, "ModelSpec: standard family needs rate > 0");
            require(dividend >= 0.0, "ModelSpec: dividend must be non-negative");
            require(sigma > 0.0, "ModelSpec: sigma must be positive");
            break;
        case ModelFamily::rate:
            require(rate == 0.0, "ModelSpec: rate family induces r(t); leave rate unset");
            require(dividend >= 0.0, "ModelSpec: dividend must be non-negative");
            require(sigma > 0.0, "ModelSpec: sigma must be positive");
            break;
        case ModelFamily::dividend: {
            require(dividend == 0.0,
                    "ModelSpec: dividend family induces delta(t); leave dividend unset");
            require(rate > 0.0, "ModelSpec: rate must be positive");
            require(sigma > 0.0, "ModelSpec: sigma must be positive");
            // The boundary factor 1 - (2 sigma / a)(N(a sqrt(T - t)) - 1/2) is
            // decreasing in T - t, so its minimum over [0, T) sits at t = 0.
            const double a = std::sqrt(2.0 * rate + sigma * sigma);
            const double factor =
                1.0 - (2.0 * sigma / a) * (norm_cdf(a * std::sqrt(maturity)) - 0.5);
            if (factor <= 1e-6)
                throw model_validity_error(
                    "ModelSpec: dividend-family boundary factor not positive on [0, T)");
            break;
        }
        case ModelFamily::vol:
            require(sigma == 0.0, "ModelSpec: vol family induces sigma(t); leave sigma unset");
            require(rate > 0.0, "ModelSpec: rate must be positive");
            require(dividend == 0.0, "ModelSpec: vol family assumes zero dividend yield");
            break;
        case ModelFamily::strike:
            require(rate > 0.0, "ModelSpec: rate must be positive");
            require(sigma > 0.0, "ModelSpec: sigma must be positive");
            require(dividend == 0.0, "ModelSpec: strike family assumes zero dividend yield");
            break;
    }
}

BoundaryCurve::BoundaryCurve(TimeGrid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_.size())
        throw std::invalid_argument("BoundaryCurve: one value per grid node required");
    for (double v : values_)
        if (!(v > 0.0) || !std::isfinite(v))
            throw std::invalid_argument("BoundaryCurve: values must be positive and finite");
}

double BoundaryCurve::operator()(double t) const {
    const auto nodes = grid_.nodes();
    if (t < nodes.front() || t > nodes.back())
        throw std::domain_error("BoundaryCurve: t outside [0, T]");
    std::size_t hi = grid_.lower_node(t);
    if (hi == 0) return values_.front();
    if (nodes[hi] == t) return values_[hi];
    const std::size_t lo = hi - 1;
    const double frac = (t - nodes[lo]) / (nodes[hi] - nodes[lo]);
    return values_[lo] * std::exp(frac * std::log(values_[hi] / values_[lo]));
}

BoundaryCurve BoundaryCurve::scaled(double factor) const {
    if (!(factor > 0.0)) throw std::invalid_argument("BoundaryCurve: factor must be positive");
    std::vector<double> v(values_);
    for (double& x : v) x *= factor;
    return BoundaryCurve(grid_, std::move(v));
}

}  // namespace putkit
