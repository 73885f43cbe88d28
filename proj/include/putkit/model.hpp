#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "putkit/time_grid.hpp"

namespace putkit {

/// Which single parameter of the put model is time dependent. standard means
/// none (constant-parameter geometric Brownian motion).
enum class ModelFamily { standard, rate, dividend, vol, strike };

[[nodiscard]] std::string to_string(ModelFamily family);

/// Model family plus its constant parameters. Exactly one of {rate, dividend,
/// sigma, strike} is replaced by the family's induced term structure; the
/// corresponding field below is then ignored (and must be left at 0 for rate /
/// dividend / sigma).
struct ModelSpec {
    ModelFamily family = ModelFamily::standard;
    double strike = 0.0;    ///< K; for the strike family this is K(T)
    double maturity = 0.0;  ///< T in years
    double rate = 0.0;      ///< r (ignored for the rate family)
    double dividend = 0.0;  ///< delta (ignored for the dividend family)
    double sigma = 0.0;     ///< volatility (ignored for the vol family)
    double drift_shift = 0.0;  ///< m, strike family only; 0 gives the closed form

    /// Throws std::invalid_argument on an inconsistent parameter set and
    /// model_validity_error when the dividend family's boundary factor is not
    /// positive on [0, T).
    void validate() const;
};

/// Deterministic time-dependent model parameter on [0, T): pointwise value and
/// exact definite integral.
class TermStructure {
public:
    virtual ~TermStructure() = default;
    [[nodiscard]] virtual double value(double t) const = 0;
    [[nodiscard]] virtual double integral(double a, double b) const = 0;
};

/// Discretized exercise boundary b(t) on a time grid, log-linear between
/// nodes. The node at t = T stores the one-sided limit b(T-).
class BoundaryCurve {
public:
    BoundaryCurve(TimeGrid grid, std::vector<double> values);

    /// Log-linear interpolation; t must lie in [0, T].
    [[nodiscard]] double operator()(double t) const;

    [[nodiscard]] const TimeGrid& grid() const { return grid_; }
    [[nodiscard]] std::span<const double> values() const& { return values_; }
    std::span<const double> values() const&& = delete;  // would dangle
    [[nodiscard]] double terminal() const { return values_.back(); }
    [[nodiscard]] double maturity() const { return grid_.maturity(); }

    /// Same grid, every value multiplied by factor (> 0). Used to study
    /// deliberately suboptimal exercise policies.
    [[nodiscard]] BoundaryCurve scaled(double factor) const;

private:
    TimeGrid grid_;
    std::vector<double> values_;
};

}  // namespace putkit
