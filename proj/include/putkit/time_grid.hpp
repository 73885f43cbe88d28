#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace putkit {

/// Strictly increasing time nodes on [0, T], first node 0, last node T.
/// Spacing may be non-uniform; the default factory refines geometrically
/// toward T because the boundaries and the time-dependent parameters have
/// infinite slope there.
class TimeGrid {
public:
    /// Geometric refinement toward T: successive gaps shrink by a constant
    /// ratio so that the final gap is about last_step_frac * T.
    static TimeGrid refined(double maturity, std::size_t count = 512,
                            double last_step_frac = 1e-4);

    static TimeGrid uniform(double maturity, std::size_t count);

    /// Takes ownership of explicit nodes; validates the invariants.
    explicit TimeGrid(std::vector<double> nodes);

    [[nodiscard]] std::span<const double> nodes() const& { return nodes_; }
    std::span<const double> nodes() const&& = delete;  // would dangle
    [[nodiscard]] std::size_t size() const { return nodes_.size(); }
    [[nodiscard]] double operator[](std::size_t i) const { return nodes_[i]; }
    [[nodiscard]] double maturity() const { return nodes_.back(); }

    /// Index of the first node >= t (t must lie in [0, T]).
    [[nodiscard]] std::size_t lower_node(double t) const;

private:
    std::vector<double> nodes_;
};

}  // namespace putkit
