#pragma once

#include <memory>

#include "putkit/model.hpp"

namespace putkit {

// Scalar closed forms, one pair (parameter function, boundary) per family.
// All (T - t)^{-1/2} expressions are open at T; values exactly at T are the
// stated limits where those are finite and a domain error otherwise.

/// Interest rate r(t) of the rate family; diverges to +inf as t -> T-.
double rate_function(const ModelSpec& spec, double t);

/// Exercise boundary of the rate family; b(T-) = K, increasing in t.
double boundary_rate(const ModelSpec& spec, double t);

/// Dividend yield delta(t) of the dividend family; goes to -inf as t -> T-.
double dividend_function(const ModelSpec& spec, double t);

/// Exercise boundary of the dividend family; b(T-) = K.
double boundary_dividend(const ModelSpec& spec, double t);

/// Unique root x of e^{x^2/2} N(x) = e^{r (T - t)} / 2. phi(T) = 0, phi is
/// decreasing, and phi(t)^2 is the remaining variance of the vol family.
double phi(const ModelSpec& spec, double t);

/// Volatility sigma(t) of the vol family, from implicit differentiation of
/// the phi equation; sigma(T-) = 0.
double vol_function(const ModelSpec& spec, double t);

/// Exercise boundary of the vol family, b(t) = K / (2 N(phi(t))).
double boundary_vol(const ModelSpec& spec, double t);

/// Strike K(t) of the strike family for m = 0 (the only case with a closed
/// form). Throws std::invalid_argument when spec.drift_shift != 0.
double strike_function(const ModelSpec& spec, double t);

/// Exercise boundary of the strike family, any m:
/// b(t) = K(T) e^{-(m + r - sigma^2/2)(T - t)}.
double boundary_strike(const ModelSpec& spec, double t);

/// Closed-form boundary of any non-standard family at time t.
double closed_form_boundary(const ModelSpec& spec, double t);

/// Samples the family's closed-form boundary on a grid (terminal node gets
/// the b(T-) limit).
BoundaryCurve sample_closed_form_boundary(const ModelSpec& spec, const TimeGrid& grid);

// Term structures backing the families. For constant-parameter families these
// are constants; integrals are exact closed forms throughout.
std::shared_ptr<const TermStructure> make_rate_structure(const ModelSpec& spec);
std::shared_ptr<const TermStructure> make_dividend_structure(const ModelSpec& spec);
/// value() is sigma^2(t); integral() is the accumulated variance.
std::shared_ptr<const TermStructure> make_variance_structure(const ModelSpec& spec);

/// b(T-) for the family: K min(1, r(T-)/delta(T-)), which is K for the three
/// time-dependent families and K(T) for the strike family.
double terminal_boundary(const ModelSpec& spec);

}  // namespace putkit
