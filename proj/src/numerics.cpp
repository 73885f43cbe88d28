#include "putkit/numerics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace putkit {

namespace {
constexpr double kInvSqrt2Pi = 0.398942280401432677939946;
constexpr double kInvSqrt2 = 0.707106781186547524400844;
}  // namespace

double norm_cdf(double x) {
    if (!std::isfinite(x)) throw std::domain_error("norm_cdf: non-finite argument");
    return 0.5 * std::erfc(-x * kInvSqrt2);
}

double norm_pdf(double x) {
    if (!std::isfinite(x)) throw std::domain_error("norm_pdf: non-finite argument");
    return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

double find_root_increasing(const std::function<double(double)>& f,
                            double lo, double hi, double tol) {
    if (!(tol > 0.0)) throw std::domain_error("find_root_increasing: tol must be positive");
    if (!(lo <= hi)) throw std::invalid_argument("find_root_increasing: empty bracket");
    double flo = f(lo);
    double fhi = f(hi);
    if (flo > 0.0 || fhi < 0.0)
        throw std::invalid_argument("find_root_increasing: bracket does not straddle a root");
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    for (int it = 0; it < 200 && (hi - lo) > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;  // bracket at machine resolution
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if (fm < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

namespace {

// Trapezoid weights for strictly increasing knots, accumulated in place.
void add_trapezoid(const std::vector<double>& x, const std::vector<double>& scale,
                   QuadraturePlan& plan) {
    const std::size_t n = x.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double h = x[i + 1] - x[i];
        plan.weights[i] += 0.5 * h * scale[i];
        plan.weights[i + 1] += 0.5 * h * scale[i + 1];
    }
}

// Plain rule on the original variable.
void plan_plain(double a, double b, std::span<const double> grid, QuadraturePlan& plan) {
    std::vector<double> knots;
    knots.push_back(a);
    for (double g : grid)
        if (g > a && g < b) knots.push_back(g);
    knots.push_back(b);
    const std::size_t base = plan.knots.size();
    plan.knots.insert(plan.knots.end(), knots.begin(), knots.end());
    plan.weights.resize(plan.knots.size(), 0.0);
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        const double h = knots[i + 1] - knots[i];
        plan.weights[base + i] += 0.5 * h;
        plan.weights[base + i + 1] += 0.5 * h;
    }
}

// Substitution s = a + y^2: integral = int 2 y f(a + y^2) dy. The y = 0 knot
// carries zero weight, so f is never evaluated at a.
void plan_sqrt_left(double a, double b, std::span<const double> grid, QuadraturePlan& plan) {
    std::vector<double> y{0.0};
    std::vector<double> s{a};
    for (double g : grid)
        if (g > a && g < b) {
            y.push_back(std::sqrt(g - a));
            s.push_back(g);
        }
    y.push_back(std::sqrt(b - a));
    s.push_back(b);

    QuadraturePlan local;
    local.knots = s;
    local.weights.assign(s.size(), 0.0);
    std::vector<double> jac(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) jac[i] = 2.0 * y[i];
    add_trapezoid(y, jac, local);

    for (std::size_t i = 0; i < local.knots.size(); ++i) {
        if (local.weights[i] == 0.0) continue;  // drops the s = a knot
        plan.knots.push_back(local.knots[i]);
        plan.weights.push_back(local.weights[i]);
    }
}

// Substitution s = b - v^2: integral = int 2 v f(b - v^2) dv. The panel that
// touches v = 0 uses the open midpoint rule so that f is never evaluated at b,
// where it may blow up like (b - s)^{-1/2}.
void plan_inv_sqrt_right(double a, double b, std::span<const double> grid,
                         QuadraturePlan& plan) {
    std::vector<double> v{0.0};
    std::vector<double> s{b};
    for (auto it = grid.rbegin(); it != grid.rend(); ++it)
        if (*it > a && *it < b) {
            v.push_back(std::sqrt(b - *it));
            s.push_back(*it);
        }
    v.push_back(std::sqrt(b - a));
    s.push_back(a);
    const std::size_t n = v.size();

    // Open first panel [0, v1]: contributes v1 * g(v1/2) with g(v) = 2 v f(b - v^2).
    const double mid = 0.5 * v[1];
    plan.knots.push_back(b - mid * mid);
    plan.weights.push_back(v[1] * 2.0 * mid);

    // Remaining panels by trapezoid in v.
    std::vector<double> w(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double h = v[i + 1] - v[i];
        w[i] += 0.5 * h * 2.0 * v[i];
        w[i + 1] += 0.5 * h * 2.0 * v[i + 1];
    }
    for (std::size_t i = 1; i < n; ++i) {
        if (w[i] == 0.0) continue;
        plan.knots.push_back(s[i]);
        plan.weights.push_back(w[i]);
    }
}

}  // namespace

QuadraturePlan make_quadrature_plan(double a, double b, std::span<const double> grid,
                                    IntegrandShape shape) {
    if (a > b) throw std::domain_error("integrate: a > b");
    QuadraturePlan plan;
    if (a == b) return plan;

    if (shape.sqrt_left && shape.inv_sqrt_right) {
        // Split at the grid knot nearest the midpoint; fall back to the exact
        // midpoint when the restriction has no interior node.
        const double target = 0.5 * (a + b);
        double split = target;
        double best = std::numeric_limits<double>::infinity();
        for (double g : grid)
            if (g > a && g < b && std::abs(g - target) < best) {
                best = std::abs(g - target);
                split = g;
            }
        plan_sqrt_left(a, split, grid, plan);
        plan_inv_sqrt_right(split, b, grid, plan);
    } else if (shape.sqrt_left) {
        plan_sqrt_left(a, b, grid, plan);
    } else if (shape.inv_sqrt_right) {
        plan_inv_sqrt_right(a, b, grid, plan);
    } else {
        plan_plain(a, b, grid, plan);
    }
    return plan;
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 std::span<const double> grid, IntegrandShape shape) {
    const QuadraturePlan plan = make_quadrature_plan(a, b, grid, shape);
    double acc = 0.0;
    for (std::size_t i = 0; i < plan.knots.size(); ++i) {
        const double fi = f(plan.knots[i]);
        if (std::isnan(fi)) throw std::runtime_error("integrate: integrand returned NaN");
        acc += plan.weights[i] * fi;
    }
    return acc;
}

}  // namespace putkit
