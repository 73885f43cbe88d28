#pragma once

#include <cstdint>

#include "putkit/exec.hpp"
#include "putkit/model.hpp"
#include "putkit/volterra.hpp"

namespace putkit {

/// Monte-Carlo settings. Paths use exact lognormal increments (drift and
/// variance integrals from the term structures), so the only biases are the
/// exercise-grid granularity and sampling noise. Substreams are seeded per
/// path from (seed, path index), which makes estimates bit-identical for a
/// fixed seed regardless of thread count.
struct McConfig {
    std::int64_t paths = 100000;  ///< >= 100
    int steps_per_year = 500;     ///< exercise-grid granularity
    std::uint64_t seed = 0;
    Exec exec = Exec::parallel;
};

struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
};

/// Values the stopping rule "exercise at the first grid time with X <= b" by
/// simulation, discounting with the model's rate integral. The payoff strike
/// is K(t) for the strike family (closed form when m = 0).
McEstimate mc_policy_value(const ModelSpec& spec, const BoundaryCurve& boundary,
                           const McConfig& cfg, double t, double x);

/// Strike-family variant with a solved K(t) curve (m != 0).
McEstimate mc_policy_value(const ModelSpec& spec, const BoundaryCurve& boundary,
                           const SolvedStrikeCurve& strike_curve, const McConfig& cfg,
                           double t, double x);

}  // namespace putkit
