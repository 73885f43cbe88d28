#include "putkit/time_grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace putkit {

TimeGrid::TimeGrid(std::vector<double> nodes) : nodes_(std::move(nodes)) {
    if (nodes_.size() < 2) throw std::invalid_argument("TimeGrid: need at least 2 nodes");
    if (nodes_.front() != 0.0) throw std::invalid_argument("TimeGrid: first node must be 0");
    for (std::size_t i = 1; i < nodes_.size(); ++i) {
        if (!(nodes_[i] > nodes_[i - 1]))
            throw std::invalid_argument("TimeGrid: nodes must be strictly increasing");
    }
    if (!(nodes_.back() > 0.0) || !std::isfinite(nodes_.back()))
        throw std::invalid_argument("TimeGrid: maturity must be positive and finite");
}

TimeGrid TimeGrid::refined(double maturity, std::size_t count, double last_step_frac) {
    if (!(maturity > 0.0)) throw std::invalid_argument("TimeGrid: maturity must be positive");
    if (count < 2) throw std::invalid_argument("TimeGrid: need at least 2 nodes");
    if (!(last_step_frac > 0.0) || last_step_frac >= 1.0)
        throw std::invalid_argument("TimeGrid: last_step_frac must be in (0, 1)");
    std::vector<double> nodes(count);
    nodes.front() = 0.0;
    nodes.back() = maturity;
    if (count > 2) {
        // t_i = T (1 - q^i) / (1 - q^{n-1}): gaps shrink by the constant
        // factor q toward T, the smallest (final) gap being
        // q^{n-2} (1 - q) / (1 - q^{n-1}) of T. Solve for q by bisection;
        // the gap fraction is monotone increasing in q on (0, 1).
        const auto n = static_cast<double>(count - 1);
        auto last_gap = [n](double q) {
            return std::pow(q, n - 1.0) * (1.0 - q) / (1.0 - std::pow(q, n));
        };
        const double target = std::min(last_step_frac, 0.5 / n);
        double lo = 1e-9, hi = 1.0 - 1e-12;
        for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
            const double mid = 0.5 * (lo + hi);
            (last_gap(mid) < target ? lo : hi) = mid;
        }
        const double q = 0.5 * (lo + hi);
        const double denom = 1.0 - std::pow(q, n);
        double qi = 1.0;
        for (std::size_t i = 1; i + 1 < count; ++i) {
            qi *= q;
            nodes[i] = maturity * (1.0 - qi) / denom;
        }
    }
    return TimeGrid(std::move(nodes));
}

TimeGrid TimeGrid::uniform(double maturity, std::size_t count) {
    if (!(maturity > 0.0)) throw std::invalid_argument("TimeGrid: maturity must be positive");
    if (count < 2) throw std::invalid_argument("TimeGrid: need at least 2 nodes");
    std::vector<double> nodes(count);
    for (std::size_t i = 0; i < count; ++i)
        nodes[i] = maturity * static_cast<double>(i) / static_cast<double>(count - 1);
    nodes.back() = maturity;
    return TimeGrid(std::move(nodes));
}

std::size_t TimeGrid::lower_node(double t) const {
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), t);
    return static_cast<std::size_t>(it - nodes_.begin());
}

}  // namespace putkit
