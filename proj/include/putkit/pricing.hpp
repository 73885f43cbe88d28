#pragma once

#include <vector>

#include "putkit/model.hpp"
#include "putkit/volterra.hpp"

namespace putkit {

/// American put value split into its European part and the early-exercise
/// premium; american == european + premium by construction.
struct PriceDecomposition {
    double european = 0.0;
    double premium = 0.0;
    double american = 0.0;
    double t = 0.0;
    double spot = 0.0;
};

/// Model-appropriate European put (time-dependent parameter integrals in the
/// Black-Scholes form; strike K(T) for the strike family). Returns the payoff
/// at t = T. Throws std::domain_error for x <= 0 or t outside [0, T].
double european_put(const ModelSpec& spec, double t, double x);

/// American put at (t, x) via the early-exercise-premium representation with
/// the given boundary. For the strike family this overload requires m = 0
/// (closed-form K and K'). Throws std::invalid_argument when the boundary
/// does not cover [t, T].
PriceDecomposition american_put_eep(const ModelSpec& spec, const BoundaryCurve& boundary,
                                    double t, double x);

/// Strike-family pricing with a solved K(t) curve (m may be nonzero); K' from
/// differentiating the solved curve.
PriceDecomposition american_put_eep(const ModelSpec& spec, const BoundaryCurve& boundary,
                                    const SolvedStrikeCurve& strike_curve, double t, double x);

/// Report convention: count geometrically spaced spots in [b_t / 2, 4 K].
std::vector<double> spot_ladder(double b_t, double strike, std::size_t count = 100);

}  // namespace putkit
