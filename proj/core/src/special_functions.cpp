#include "ydss/special_functions.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ydss {

namespace {

constexpr int kMaxIterations = 100000;
constexpr double kEps = 1e-16;
constexpr double kTiny = 1e-300;

// log P(a, x) by the power series, valid for x < a + 1.
double log_gamma_p_series(double a, double x)
{
    double ap = a;
    double term = 1.0 / a;
    double sum = term;
    for (int n = 0; n < kMaxIterations; ++n) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * kEps) break;
    }
    return -x + a * std::log(x) - std::lgamma(a) + std::log(sum);
}

// log Q(a, x) by Lentz's continued fraction, valid for x >= a + 1.
double log_gamma_q_fraction(double a, double x)
{
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < kMaxIterations; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < kEps) break;
    }
    return -x + a * std::log(x) - std::lgamma(a) + std::log(h);
}

} // namespace

double log_gamma_q(double a, double x)
{
    if (!(a > 0.0) || std::isnan(x) || x < 0.0) {
        throw std::domain_error("log_gamma_q requires a > 0 and x >= 0");
    }
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return -std::numeric_limits<double>::infinity();
    if (x < a + 1.0) {
        const double p = std::exp(log_gamma_p_series(a, x));
        return std::log1p(-p);
    }
    return log_gamma_q_fraction(a, x);
}

double chi_square_log_sf(double x, int df)
{
    if (df < 1) throw std::domain_error("chi-square degrees of freedom must be >= 1");
    if (std::isnan(x) || x < 0.0) throw std::domain_error("chi-square statistic must be >= 0");
    return log_gamma_q(0.5 * df, 0.5 * x);
}

double chi_square_sf(double x, int df)
{
    const double p = std::exp(chi_square_log_sf(x, df));
    return p > 1.0 ? 1.0 : p;
}

} // namespace ydss
