#pragma once

// Test-only oracles, kept independent of the library's implementation paths:
// a long-double normal cdf (Taylor series + Lentz continued fraction), an
// adaptive Simpson integrator, and a density-integration European put.

#include <cmath>
#include <functional>

namespace oracle {

// erf by Taylor series, accurate for |z| <= 2.5 in long double.
inline long double erf_series(long double z) {
    const long double two_over_sqrt_pi = 1.128379167095512573896159L;
    long double term = z;
    long double sum = z;
    const long double z2 = z * z;
    for (int n = 1; n < 200; ++n) {
        term *= -z2 / n;
        const long double add = term / (2 * n + 1);
        sum += add;
        if (std::fabs(add) < 1e-25L * std::fabs(sum)) break;
    }
    return two_over_sqrt_pi * sum;
}

// erfc by the continued fraction erfc(z) = e^{-z^2}/sqrt(pi) *
// 1/(z + (1/2)/(z + 1/(z + (3/2)/(z + ...)))), for z >= 2.5 (modified Lentz).
inline long double erfc_cf(long double z) {
    const long double tiny = 1e-300L;
    long double f = z;
    long double c = f;
    long double d = 0.0L;
    for (int n = 1; n < 300; ++n) {
        const long double a = n * 0.5L;
        const long double b = z;  // the CF alternates a_n/(z + ...)
        d = b + a * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + a / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0L / d;
        const long double delta = c * d;
        f *= delta;
        if (std::fabs(delta - 1.0L) < 1e-22L) break;
    }
    const long double inv_sqrt_pi = 0.564189583547756286948079L;
    return std::exp(-z * z) * inv_sqrt_pi / f;
}

inline long double erfc_ld(long double z) {
    if (z < 0.0L) return 2.0L - erfc_ld(-z);
    if (z < 2.5L) return 1.0L - erf_series(z);
    return erfc_cf(z);
}

/// Standard normal cdf to ~1e-17 absolute.
inline long double norm_cdf_ld(long double x) {
    const long double inv_sqrt2 = 0.707106781186547524400844L;
    return 0.5L * erfc_ld(-x * inv_sqrt2);
}

inline long double norm_pdf_ld(long double x) {
    const long double inv_sqrt_2pi = 0.398942280401432677939946L;
    return inv_sqrt_2pi * std::exp(-0.5L * x * x);
}

inline double adaptive_simpson_step(const std::function<double(double)>& f, double a,
                                    double b, double fa, double fm, double fb, double whole,
                                    double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

/// Adaptive Simpson, independent of the library quadrature.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol = 1e-11, int depth = 40) {
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson_step(f, a, b, fa, fm, fb, whole, tol, depth);
}

/// European put by integrating the discounted payoff against the lognormal
/// density of X_T (no Black-Scholes formula involved).
inline double european_put_density(double r, double q, double sigma, double strike, double x,
                                   double tau) {
    const double drift = (r - q - 0.5 * sigma * sigma) * tau;
    const double sd = sigma * std::sqrt(tau);
    const double z_star = (std::log(strike / x) - drift) / sd;
    auto integrand = [&](double z) {
        const double spot = x * std::exp(drift + sd * z);
        return (strike - spot) * static_cast<double>(norm_pdf_ld(z));
    };
    const double lo = std::min(z_star, 0.0) - 14.0;
    return std::exp(-r * tau) * adaptive_simpson(integrand, lo, z_star, 1e-12, 44);
}

}  // namespace oracle
