#pragma once

#include "putkit/exec.hpp"
#include "putkit/model.hpp"
#include "putkit/volterra.hpp"

namespace putkit {

/// Binomial lattice settings. The scheme follows the family: constant-step
/// CRR for the standard and strike families, per-step drift/discount
/// integrals for the rate and dividend families, and an equal-variance time
/// grid for the vol family (so the tree recombines).
struct LatticeConfig {
    int steps = 2000;
    Exec exec = Exec::parallel;
};

/// American put on a recombining CRR lattice, constant parameters.
/// Throws std::invalid_argument when the risk-neutral probability leaves
/// (0, 1) (raise steps).
double crr_price(const ModelSpec& spec, const LatticeConfig& cfg, double t, double x);

/// Staircase exercise-boundary estimate: per time slice, the highest lattice
/// node where exercising is optimal.
BoundaryCurve crr_boundary(const ModelSpec& spec, const LatticeConfig& cfg);

/// American put for any family on the family's lattice scheme. For the
/// strike family, pass the solved K(t) curve unless m = 0.
double lattice_price(const ModelSpec& spec, const LatticeConfig& cfg, double t, double x,
                     const SolvedStrikeCurve* strike_curve = nullptr);

}  // namespace putkit
