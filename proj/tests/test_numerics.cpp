#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "oracle_helpers.hpp"
#include "putkit/closed_form.hpp"
#include "putkit/numerics.hpp"
#include "putkit/time_grid.hpp"

using namespace putkit;

TEST_CASE("norm_cdf basics") {
    CHECK(norm_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(norm_cdf(-1.3) == doctest::Approx(1.0 - norm_cdf(1.3)).epsilon(1e-14));
    // Independent series/continued-fraction oracle value.
    CHECK(std::abs(norm_cdf(0.948683) - 0.82860906860889) < 1e-9);
    CHECK(norm_cdf(40.0) == 1.0);
    CHECK(norm_cdf(-40.0) == 0.0);
    CHECK_THROWS_AS(norm_cdf(std::numeric_limits<double>::quiet_NaN()), std::domain_error);
    CHECK_THROWS_AS(norm_cdf(std::numeric_limits<double>::infinity()), std::domain_error);
}

TEST_CASE("norm_cdf accuracy 1e-12 against long-double oracle at 1000 points") {
    std::mt19937_64 rng(20240517);
    std::uniform_real_distribution<double> u(-8.0, 8.0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double x = u(rng);
        const double err = std::abs(norm_cdf(x) - static_cast<double>(oracle::norm_cdf_ld(x)));
        worst = std::max(worst, err);
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("norm_cdf reflection identity on random points") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-8.0, 8.0);
    for (int i = 0; i < 500; ++i) {
        const double x = u(rng);
        CHECK(std::abs(norm_cdf(x) + norm_cdf(-x) - 1.0) <= 1e-14);
    }
}

TEST_CASE("norm_pdf") {
    CHECK(norm_pdf(0.0) == doctest::Approx(0.3989422804).epsilon(1e-10));
    CHECK(norm_pdf(1.0) == norm_pdf(-1.0));
    CHECK(std::abs(norm_pdf(0.948683) - 0.25437690078) < 1e-9);
    CHECK_THROWS_AS(norm_pdf(std::numeric_limits<double>::infinity()), std::domain_error);
}

TEST_CASE("norm_pdf is the derivative of norm_cdf") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    const double h = 1e-6;
    for (int i = 0; i < 200; ++i) {
        const double x = u(rng);
        const double fd = (norm_cdf(x + h) - norm_cdf(x - h)) / (2.0 * h);
        CHECK(std::abs(fd - norm_pdf(x)) <= 1e-6);
    }
}

TEST_CASE("find_root_increasing") {
    auto linear = [](double x) { return x - 2.0; };
    CHECK(std::abs(find_root_increasing(linear, 0.0, 5.0, 1e-12) - 2.0) <= 1e-12);

    auto g_half = [](double x) { return std::exp(0.5 * x * x) * norm_cdf(x) - 0.5; };
    CHECK(std::abs(find_root_increasing(g_half, -1.0, 1.0, 1e-12)) <= 1e-12);

    // Root of e^{x^2/2} N(x) = e^{0.5}/2, checked by back-substitution against
    // a test-local long-double bisection.
    const double target = std::exp(0.5) / 2.0;
    auto g = [target](double x) { return std::exp(0.5 * x * x) * norm_cdf(x) - target; };
    const double root = find_root_increasing(g, 0.0, 3.0, 1e-14);
    long double lo = 0.0L, hi = 3.0L;
    for (int i = 0; i < 120; ++i) {
        const long double mid = 0.5L * (lo + hi);
        const long double val =
            std::exp(0.5L * mid * mid) * oracle::norm_cdf_ld(mid) - (long double)target;
        (val < 0.0L ? lo : hi) = mid;
    }
    CHECK(std::abs(root - static_cast<double>(0.5L * (lo + hi))) <= 1e-8);
    CHECK(std::abs(std::exp(0.5 * root * root) * norm_cdf(root) - 0.824361) <= 1e-6);
    CHECK(std::abs(std::exp(0.5 * root * root) * norm_cdf(root) - target) <= 1e-9);

    CHECK_THROWS_AS(find_root_increasing(linear, 3.0, 5.0, 1e-10), std::invalid_argument);
    CHECK_THROWS_AS(find_root_increasing(linear, 0.0, 5.0, -1.0), std::domain_error);
}

TEST_CASE("find_root_increasing is idempotent") {
    auto f = [](double x) { return std::atan(x) - 0.3; };
    const double a = find_root_increasing(f, -2.0, 2.0, 1e-13);
    const double b = find_root_increasing(f, -2.0, 2.0, 1e-13);
    CHECK(a == b);
    CHECK(std::abs(f(a)) <= 1e-12);
}

TEST_CASE("integrate: constants and errors") {
    const TimeGrid grid = TimeGrid::refined(1.0, 128);
    auto c = [](double) { return 3.25; };
    CHECK(integrate(c, 0.0, 1.0, grid.nodes()) == doctest::Approx(3.25).epsilon(1e-14));
    CHECK(integrate(c, 0.2, 0.7, grid.nodes()) == doctest::Approx(3.25 * 0.5).epsilon(1e-13));
    CHECK_THROWS_AS(integrate(c, 1.0, 0.0, grid.nodes()), std::domain_error);
    auto bad = [](double) { return std::numeric_limits<double>::quiet_NaN(); };
    CHECK_THROWS_AS(integrate(bad, 0.0, 1.0, grid.nodes()), std::runtime_error);
}

TEST_CASE("integrate: inverse-square-root singularity at the right endpoint") {
    const TimeGrid grid = TimeGrid::refined(1.0, 512);
    auto f = [](double s) { return 1.0 / std::sqrt(1.0 - s); };
    const double got = integrate(f, 0.0, 1.0, grid.nodes(), {.inv_sqrt_right = true});
    CHECK(std::abs(got - 2.0) <= 1e-6);
}

TEST_CASE("integrate: sqrt behaviour at the left endpoint") {
    const TimeGrid grid = TimeGrid::uniform(1.0, 4096);
    auto f = [](double s) { return std::sqrt(s); };
    const double got = integrate(f, 0.0, 1.0, grid.nodes(), {.sqrt_left = true});
    CHECK(std::abs(got - 2.0 / 3.0) <= 1e-5);
}

TEST_CASE("integrate: rate-family discount integral matches the log closed form") {
    // delta = 0, sigma = 0.3, T = 10: int_0^T r = log(2 N(0.3 sqrt(10))) + 0.045 T.
    ModelSpec spec{ModelFamily::rate, 1.0, 10.0, 0.0, 0.0, 0.3, 0.0};
    const TimeGrid grid = TimeGrid::refined(10.0, 4096);
    auto r = [&spec](double s) { return rate_function(spec, s); };
    const double got = integrate(r, 0.0, 10.0, grid.nodes(), {.inv_sqrt_right = true});
    const double closed =
        std::log(2.0 * norm_cdf(0.3 * std::sqrt(10.0))) + 0.045 * 10.0;
    CHECK(std::abs(closed - 0.95514046716) < 1e-9);  // frozen from the oracle
    CHECK(std::abs(got - closed) <= 1e-5);
    // And the term structure's analytic integral agrees with the quadrature.
    const auto ts = make_rate_structure(spec);
    CHECK(std::abs(ts->integral(0.0, 10.0) - closed) <= 1e-12);
}

TEST_CASE("integrate is linear on a shared grid") {
    const TimeGrid grid = TimeGrid::refined(2.0, 64);
    auto f = [](double s) { return std::sin(s) + 0.2 * s * s; };
    auto g = [](double s) { return std::cos(1.7 * s); };
    const double alpha = 1.7, beta = -0.6;
    auto combo = [&](double s) { return alpha * f(s) + beta * g(s); };
    for (IntegrandShape shape :
         {IntegrandShape{}, IntegrandShape{.sqrt_left = true},
          IntegrandShape{.inv_sqrt_right = true},
          IntegrandShape{.sqrt_left = true, .inv_sqrt_right = true}}) {
        const double lhs = integrate(combo, 0.0, 2.0, grid.nodes(), shape);
        const double rhs = alpha * integrate(f, 0.0, 2.0, grid.nodes(), shape) +
                           beta * integrate(g, 0.0, 2.0, grid.nodes(), shape);
        CHECK(std::abs(lhs - rhs) <= 1e-12);
    }
}

TEST_CASE("time grid shape") {
    const TimeGrid g = TimeGrid::refined(10.0, 512);
    CHECK(g[0] == 0.0);
    CHECK(g.maturity() == 10.0);
    const auto n = g.nodes();
    for (std::size_t i = 1; i < n.size(); ++i) CHECK(n[i] > n[i - 1]);
    // Final gap about 1e-4 T.
    CHECK(n[511] - n[510] == doctest::Approx(1e-3).epsilon(0.05));
    CHECK_THROWS_AS(TimeGrid::refined(-1.0, 512), std::invalid_argument);
    CHECK_THROWS_AS(TimeGrid(std::vector<double>{0.0, 0.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(TimeGrid(std::vector<double>{0.5, 1.0}), std::invalid_argument);
}
