#pragma once

// Special functions needed by the density catalog and the closed-form oracle:
// log-gamma, regularized incomplete gamma and beta (with log-space variants
// that stay accurate deep in the tails), and the ascending Bessel-J series.

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "errors.hpp"

namespace poincare {

inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr double inf = std::numeric_limits<double>::infinity();

inline double log_gamma(double x)
{
    if (!(x > 0.0)) throw domain_error("log_gamma: argument must be positive");
    return std::lgamma(x);
}

// log(exp(a) + exp(b)) without overflow.
inline double log_add(double a, double b)
{
    if (a == -inf) return b;
    if (b == -inf) return a;
    if (a < b) std::swap(a, b);
    return a + std::log1p(std::exp(b - a));
}

// log(1 - exp(a)) for a <= 0.
inline double log1m_exp(double a)
{
    if (a > -0.6931471805599453) return std::log(-std::expm1(a));
    return std::log1p(-std::exp(a));
}

struct log_pair {
    double lower; // log of the regularized lower part (P or I_x)
    double upper; // log of its complement
};

namespace detail {

inline constexpr int special_max_iter = 100000;
inline constexpr double special_eps = 1e-16;
inline constexpr double tiny = 1e-300;

// Series for P(s,x) without the prefactor x^s e^{-x}/Gamma(s).
inline double gamma_series(double s, double x)
{
    double ap = s;
    double del = 1.0 / s;
    double sum = del;
    for (int n = 0; n < special_max_iter; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * special_eps) return sum;
    }
    throw accuracy_error("incomplete gamma series did not converge", sum, std::fabs(del));
}

// Lentz continued fraction for Q(s,x) without the prefactor.
inline double gamma_fraction(double s, double x)
{
    double b = x + 1.0 - s;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < special_max_iter; ++i) {
        const double an = -i * (i - s);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < special_eps) return h;
    }
    throw accuracy_error("incomplete gamma continued fraction did not converge", h, 0.0);
}

inline double beta_fraction(double a, double b, double x)
{
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m < special_max_iter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < special_eps) return h;
    }
    throw accuracy_error("incomplete beta continued fraction did not converge", h, 0.0);
}

} // namespace detail

// log P(s,x) and log Q(s,x) for the regularized incomplete gamma.
inline log_pair log_incomplete_gamma(double s, double x)
{
    if (!(s > 0.0) || !(x >= 0.0)) throw domain_error("incomplete gamma: need s > 0, x >= 0");
    if (x == 0.0) return {-inf, 0.0};
    if (x == inf) return {0.0, -inf};
    const double log_pref = -x + s * std::log(x) - std::lgamma(s);
    if (x < s + 1.0) {
        const double lp = log_pref + std::log(detail::gamma_series(s, x));
        return {lp, log1m_exp(lp)};
    }
    const double lq = log_pref + std::log(detail::gamma_fraction(s, x));
    return {log1m_exp(lq), lq};
}

inline double gamma_p(double s, double x) { return std::exp(log_incomplete_gamma(s, x).lower); }
inline double gamma_q(double s, double x) { return std::exp(log_incomplete_gamma(s, x).upper); }

// Unregularized upper incomplete gamma Gamma(s,x) and its logarithm.
inline double log_upper_gamma(double s, double x)
{
    return std::lgamma(s) + log_incomplete_gamma(s, x).upper;
}
inline double upper_gamma(double s, double x) { return std::exp(log_upper_gamma(s, x)); }

// log I_x(a,b) and log(1 - I_x(a,b)); y = 1 - x is passed separately so that
// points close to 1 keep their precision.
inline log_pair log_incomplete_beta(double a, double b, double x, double y)
{
    if (!(a > 0.0) || !(b > 0.0)) throw domain_error("incomplete beta: need a, b > 0");
    if (!(x >= 0.0) || !(y >= 0.0)) throw domain_error("incomplete beta: x outside [0,1]");
    if (x == 0.0) return {-inf, 0.0};
    if (y == 0.0) return {0.0, -inf};
    const double lbt = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x)
                       + b * std::log(y);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        const double li = lbt + std::log(detail::beta_fraction(a, b, x) / a);
        return {li, log1m_exp(li)};
    }
    const double lc = lbt + std::log(detail::beta_fraction(b, a, y) / b);
    return {log1m_exp(lc), lc};
}

inline double incomplete_beta(double a, double b, double x)
{
    return std::exp(log_incomplete_beta(a, b, x, 1.0 - x).lower);
}

// J_nu(z) by the ascending series, summed in 50-digit arithmetic because the
// terms grow like e^z before cancelling.
inline double bessel_j(double nu, double z)
{
    if (!(nu > -1.0)) throw domain_error("bessel_j: order must exceed -1");
    if (!(z >= 0.0) || z > 60.0) throw domain_error("bessel_j: argument outside [0, 60]");
    if (z == 0.0) return nu == 0.0 ? 1.0 : 0.0;
    using wide = boost::multiprecision::cpp_bin_float_50;
    const wide q = wide(z) * wide(z) / 4;
    wide term = 1;
    wide sum = 1;
    for (int k = 1; k < 1000; ++k) {
        term *= -q / (wide(k) * (wide(k) + wide(nu)));
        sum += term;
        if (k > z && abs(term) < abs(sum) * wide(1e-30)) break;
    }
    const double lead = std::exp(nu * std::log(z / 2.0) - std::lgamma(nu + 1.0));
    return lead * static_cast<double>(sum);
}

// Name-based dispatch used by the CLI and tests.
inline double special(const std::string& name, const std::vector<double>& args)
{
    auto need = [&](std::size_t n) {
        if (args.size() != n) throw domain_error("special(" + name + "): wrong argument count");
    };
    if (name == "log_gamma") {
        need(1);
        return log_gamma(args[0]);
    }
    if (name == "upper_gamma") {
        need(2);
        return upper_gamma(args[0], args[1]);
    }
    if (name == "gamma_p") {
        need(2);
        return gamma_p(args[0], args[1]);
    }
    if (name == "incomplete_beta") {
        need(3);
        return incomplete_beta(args[0], args[1], args[2]);
    }
    if (name == "bessel_j") {
        need(2);
        return bessel_j(args[0], args[1]);
    }
    throw domain_error("special: unknown function " + name);
}

} // namespace poincare
