#pragma once

// Closed-form answers: known Poincare constants and saturating functions,
// the second-order beta bracket, exact iterates L^n g0 for the uniform,
// exponential and beta(alpha,1) cases, and the pi^2/3 variance identity.
// They serve as user-facing answers and as oracles for the numeric modules.

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "density.hpp"
#include "errors.hpp"
#include "quadrature.hpp"
#include "special.hpp"

namespace poincare {

using rational = boost::multiprecision::cpp_rational;

struct exact_answer {
    double constant = 0.0;
    std::string saturating;                   // human-readable formula, empty if unknown
    std::function<double(double)> saturating_fn; // the same function, when known
    std::string provenance;
};

namespace detail {

inline double param(const param_map& p, const std::string& key, double fallback)
{
    auto it = p.find(key);
    return it == p.end() ? fallback : it->second;
}

inline std::string num(double v)
{
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

// First positive zero of r -> r^{1 - a/2} J_{a/2}(2r), by scanning for a sign
// change and bisecting.
inline double bessel_root(double alpha)
{
    const double nu = 0.5 * alpha;
    auto g = [&](double r) { return bessel_j(nu, 2.0 * r); };
    const double step = 0.01;
    double a = step;
    double ga = g(a);
    for (int k = 0; k < 3000; ++k) {
        const double b = a + step;
        const double gb = g(b);
        if ((ga > 0.0) != (gb > 0.0)) return bisect(g, a, b, 1e-15);
        a = b;
        ga = gb;
    }
    throw range_error("bessel_root: no sign change found");
}

} // namespace detail

// Root r1 used by the beta(alpha, 1) constant 1/(4 r1^2).
inline double beta_alpha1_root(double alpha)
{
    if (!(alpha > 0.0)) throw parameter_error("beta_alpha1_root: alpha must be positive");
    return detail::bessel_root(alpha);
}

inline exact_answer exact_constant(const std::string& family, const param_map& params, const weight_spec& w)
{
    const density_spec d = catalog(family, params); // validates the parameters
    const param_map& p = d.params;
    exact_answer a;
    if (w.kind == weight_kind::stein_kernel) {
        a.constant = 1.0;
        a.saturating = "x";
        a.saturating_fn = [](double x) { return x; };
        a.provenance = "Stein-kernel weight: C(p, tau) = 1 for any p with finite variance, saturated by the identity";
        return a;
    }
    const bool one = w.kind == weight_kind::one;
    if (family == "gaussian") {
        const double mu = detail::param(p, "mu", 0.0), sigma = detail::param(p, "sigma", 1.0);
        if (one) {
            a.constant = sigma * sigma;
            a.saturating = "x - " + detail::num(mu);
            a.saturating_fn = [mu](double x) { return x - mu; };
            a.provenance = "Gaussian: C = sigma^2, saturated by linear functions";
            return a;
        }
        if (w.kind == weight_kind::rational && mu == 0.0 && sigma == 1.0) {
            const double b = w.param;
            a.constant = b <= 0.5 ? 1.0 / (1.0 - b) : 4.0 * b;
            a.provenance = "standard Gaussian with weight 1/(1+b x^2): 1/(1-b) for b <= 1/2, 4b for b >= 1/2";
            return a;
        }
    } else if (family == "exponential") {
        const double theta = detail::param(p, "theta", 1.0);
        if (one) {
            a.constant = 4.0 * theta * theta;
            a.provenance = "exponential: C = 4 theta^2, not attained";
            return a;
        }
    } else if (family == "uniform") {
        const double lo = detail::param(p, "lo", 0.0), hi = detail::param(p, "hi", 1.0);
        if (one) {
            const double len = hi - lo;
            a.constant = len * len / (pi * pi);
            a.saturating = "cos(pi (x - " + detail::num(lo) + ") / " + detail::num(len) + ")";
            a.saturating_fn = [lo, len](double x) { return std::cos(pi * (x - lo) / len); };
            a.provenance = "uniform on [a,b]: C = (b-a)^2 / pi^2, saturated by cos(pi (x-a)/(b-a))";
            return a;
        }
    } else if (family == "gamma") {
        const double k = detail::param(p, "k", 1.0), theta = detail::param(p, "theta", 1.0);
        if (one && k == 1.0) return exact_constant("exponential", {{"theta", theta}}, w);
        if (one && k > 1.0) {
            const double s = theta * (k + 1.0);
            a.constant = (k + 1.0) * (k + 1.0) * theta * theta / k;
            a.saturating = "(x - " + detail::num(s) + ") exp(x / " + detail::num(s) + ")";
            a.saturating_fn = [s](double x) { return (x - s) * std::exp(x / s); };
            a.provenance = "gamma with shape k > 1: C = (k+1)^2 theta^2 / k, saturated by (x - theta(k+1)) exp(x/(theta(k+1)))";
            return a;
        }
    } else if (family == "weibull") {
        const double k = detail::param(p, "k", 1.0), lambda = detail::param(p, "lambda", 1.0);
        const bool matches = (w.kind == weight_kind::power && std::fabs(w.param - (2.0 - k)) < 1e-12)
                             || (one && k == 2.0);
        if (matches) {
            const double lk = std::pow(lambda, k);
            a.constant = lk / (k * k);
            a.saturating = "x^" + detail::num(k) + " - " + detail::num(lk);
            a.saturating_fn = [k, lk](double x) { return std::pow(x, k) - lk; };
            a.provenance = "Weibull(k, lambda) with weight x^(2-k): C = lambda^k / k^2, saturated by x^k - lambda^k";
            return a;
        }
    } else if (family == "beta") {
        const double al = detail::param(p, "alpha", 1.0), be = detail::param(p, "beta", 1.0);
        if (one && (be == 1.0 || al == 1.0)) {
            // beta(1, b) is the mirror image x -> 1 - x of beta(b, 1).
            const bool mirrored = be != 1.0;
            const double s = mirrored ? be : al;
            const double r = beta_alpha1_root(s);
            a.constant = 1.0 / (4.0 * r * r);
            const double nu = 0.5 * s - 1.0;
            auto h = [s, r, nu](double x) { return std::pow(x, 1.0 - 0.5 * s) * bessel_j(nu, 2.0 * r * x); };
            if (mirrored) {
                a.saturating_fn = [h](double x) { return h(1.0 - x); };
                a.saturating = "y^(1-b/2) J_(b/2-1)(2 r1 y), y = 1 - x, r1 = " + detail::num(r);
                a.provenance = "beta(1, b) by reflection of beta(b, 1): C = 1/(4 r1^2), r1 the first zero of "
                               "r^(1-b/2) J_(b/2)(2r) (derived, not stated in closed form)";
            } else {
                a.saturating_fn = h;
                a.saturating = "x^(1-a/2) J_(a/2-1)(2 r1 x), r1 = " + detail::num(r);
                a.provenance = "beta(a, 1): C = 1/(4 r1^2), r1 the first zero of r^(1-a/2) J_(a/2)(2r)";
            }
            return a;
        }
    }
    throw not_available("no closed form for " + family + " with weight " + w.describe());
}

// Bracket from the second nested interval of the beta(a, b) density with
// g0 = 1: the ratio L^2 1 / L 1 is the concave quadratic
//     q(x) = -x^2/(3(2+a+b)) + (2+a+3b) x/(6(1+a+b)(2+a+b)) + (1+a)(2+a+3b)/D,
// D = 6(a+b)(1+a+b)(2+a+b), so its range over [0,1] is [min(q(0), q(1)), max q].
inline std::pair<double, double> beta_second_order(double a, double b)
{
    if (!(a > 0.0 && b > 0.0)) throw parameter_error("beta_second_order: alpha and beta must be positive");
    const double s = a + b;
    const double dd = 6.0 * s * (1.0 + s) * (2.0 + s);
    auto q = [&](double x) {
        return -x * x / (3.0 * (2.0 + s)) + (2.0 + a + 3.0 * b) * x / (6.0 * (1.0 + s) * (2.0 + s))
               + (1.0 + a) * (2.0 + a + 3.0 * b) / dd;
    };
    const double vertex = std::clamp((2.0 + a + 3.0 * b) / (4.0 * (1.0 + s)), 0.0, 1.0);
    return {std::min(q(0.0), q(1.0)), q(vertex)};
}

// 3^{2/a-1} <= C <= a^{2/a-1} Gamma(2/a) for the Subbotin density, a > 2.
inline std::pair<double, double> subbotin_bounds(double alpha)
{
    if (!(alpha > 2.0)) throw parameter_error("subbotin_bounds: alpha must exceed 2");
    return {std::pow(3.0, 2.0 / alpha - 1.0), std::pow(alpha, 2.0 / alpha - 1.0) * std::tgamma(2.0 / alpha)};
}

// Polynomials with exact rational coefficients, lowest degree first.
using rational_poly = std::vector<rational>;

namespace detail {

inline rational binomial(int n, int k)
{
    boost::multiprecision::cpp_int r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return rational(r);
}

inline rational factorial(int n)
{
    boost::multiprecision::cpp_int r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return rational(r);
}

inline void add_scaled(rational_poly& out, const rational_poly& p, const rational& c)
{
    if (out.size() < p.size()) out.resize(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) out[i] += c * p[i];
}

// Euler polynomials E_0 ... E_n from E_m = x^m - 1/2 sum_{k<m} C(m,k) E_k.
inline std::vector<rational_poly> euler_polynomials(int n)
{
    std::vector<rational_poly> e;
    for (int m = 0; m <= n; ++m) {
        rational_poly p(m + 1);
        p[m] = 1;
        for (int k = 0; k < m; ++k) add_scaled(p, e[k], -binomial(m, k) / 2);
        e.push_back(p);
    }
    return e;
}

// R_n(y) = y^n - sum_{k<n} C(n,k) C(n+1,k+1) / (n-k+1) R_k(y).
inline std::vector<rational_poly> narayana_inverse_rows(int n)
{
    std::vector<rational_poly> r;
    for (int m = 0; m <= n; ++m) {
        rational_poly p(m + 1);
        p[m] = 1;
        for (int k = 0; k < m; ++k) add_scaled(p, r[k], -binomial(m, k) * binomial(m + 1, k + 1) / (m - k + 1));
        r.push_back(p);
    }
    return r;
}

// Evaluates exactly at the (exactly representable) double x, rounding once.
inline double evaluate(const rational_poly& p, double x)
{
    const rational rx(x);
    rational acc = 0;
    for (std::size_t i = p.size(); i-- > 0;) acc = acc * rx + p[i];
    return static_cast<double>(acc);
}

} // namespace detail

// L^n g0 in closed form as a polynomial in x:
//   uniform1:             L^n 1 on [0,1] = (-1)^n / (2n)! E_{2n}(x)
//   exponential1:         L^n 1 for rate 1 = sum_k k (2n-k-1)! / (n! (n-k)! k!) x^k
//   beta21_x:             L^n x for beta(2,1) = (-1)^n / (4^n n! (n+1)!) x R_n(x^2)
//   beta_alpha1_monomial: L x^n for beta(alpha,1) = (x - x^{n+2}) / ((n+1)(n+alpha+1)),
//                         alpha a non-negative integer or half-integer (exact rational).
inline rational_poly iterate_polynomial(const std::string& family, int n, double alpha = 1.0)
{
    if (n < 0) throw parameter_error("iterate_closed_form: n must be non-negative");
    if (n > 12) throw range_error("iterate_closed_form: n above 12 is not supported");
    if (family == "uniform1") {
        const auto e = detail::euler_polynomials(2 * n);
        rational_poly p = e[2 * n];
        const rational c = rational(n % 2 == 0 ? 1 : -1) / detail::factorial(2 * n);
        for (auto& v : p) v *= c;
        return p;
    }
    if (family == "exponential1") {
        rational_poly p(n + 1);
        if (n == 0) {
            p[0] = 1;
            return p;
        }
        for (int k = 1; k <= n; ++k)
            p[k] = rational(k) * detail::factorial(2 * n - k - 1)
                   / (detail::factorial(n) * detail::factorial(n - k) * detail::factorial(k));
        return p;
    }
    if (family == "beta21_x") {
        const auto r = detail::narayana_inverse_rows(n);
        rational_poly p(2 * n + 2);
        boost::multiprecision::cpp_int four = 1;
        for (int i = 0; i < n; ++i) four *= 4;
        const rational c = rational(n % 2 == 0 ? 1 : -1) / (rational(four) * detail::factorial(n) * detail::factorial(n + 1));
        for (std::size_t i = 0; i < r[n].size(); ++i) p[2 * i + 1] = c * r[n][i];
        return p;
    }
    if (family == "beta_alpha1_monomial") {
        if (!(alpha > 0.0) || std::fabs(2.0 * alpha - std::round(2.0 * alpha)) > 0.0)
            throw parameter_error("iterate_closed_form: alpha must be a positive multiple of 1/2");
        const rational a = rational(static_cast<long>(std::lround(2.0 * alpha))) / 2;
        rational_poly p(n + 3);
        const rational c = 1 / (rational(n + 1) * (rational(n + 1) + a));
        p[1] += c;
        p[n + 2] -= c;
        return p;
    }
    throw parameter_error("iterate_closed_form: unknown family '" + family + "'");
}

inline double iterate_closed_form(const std::string& family, int n, double x, double alpha = 1.0)
{
    return detail::evaluate(iterate_polynomial(family, n, alpha), x);
}

// Var_p[h] for h(x) = int_m^x p / (P Pbar), by nested adaptive quadrature
// (inner integral for h, outer for the moments). Expected: pi^2 / 3 for
// every density.
inline double curious_identity_check(const density_spec& d)
{
    const double m = d.median();
    auto hazard = [&](double t) { return std::exp(d.log_pdf(t) - d.log_cdf(t) - d.log_sf(t)); };
    auto h = [&](double x) {
        if (x == m) return 0.0;
        return x > m ? integrate(hazard, m, x, 1e-10) : -integrate(hazard, x, m, 1e-10);
    };
    auto moment = [&](int k) {
        auto f = [&](double x) {
            if (!d.inside(x)) return 0.0;
            const double lp = d.log_pdf(x);
            if (lp < -700.0) return 0.0; // h grows only logarithmically in the mass
            return std::pow(h(x), k) * std::exp(lp);
        };
        return integrate(f, d.support_lo, m, 1e-9) + integrate(f, m, d.support_hi, 1e-9);
    };
    const double m1 = moment(1);
    return moment(2) - m1 * m1;
}

} // namespace poincare
