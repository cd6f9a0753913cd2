#pragma once

// Probability densities on an interval ]a,b[: the catalog families, tabulated
// densities read from disk, and the weights w that enter the Dirichlet form.
//
// Everything is evaluated in log space (log p, log P, log(1-P)) because the
// operator and the bounds divide tail probabilities by tail densities, which
// underflow long before their ratio does.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "quadrature.hpp"
#include "special.hpp"

namespace poincare {

using param_map = std::map<std::string, double>;

namespace detail {

// Cumulative mass over the abscissae of a tabulated density, refined by a
// fixed Gauss-Legendre rule inside each interval.
struct cdf_table {
    std::vector<double> knots;
    std::vector<double> left;  // mass of [knots[0], knots[k]]
    std::vector<double> right; // mass of [knots[k], knots.back()]
    std::function<double(double)> log_pdf;
    panel_rule rule{16};

    double segment(double a, double b) const
    {
        const double c = 0.5 * (a + b), h = 0.5 * (b - a);
        double s = 0.0;
        for (int i = 0; i < rule.size(); ++i) s += rule.weights()[i] * std::exp(log_pdf(c + h * rule.nodes()[i]));
        return s * h;
    }
    std::size_t locate(double x) const
    {
        auto it = std::upper_bound(knots.begin(), knots.end(), x);
        std::size_t k = static_cast<std::size_t>(it - knots.begin());
        return k == 0 ? 0 : std::min(k - 1, knots.size() - 2);
    }
    double lower(double x) const
    {
        const std::size_t k = locate(x);
        return left[k] + segment(knots[k], x);
    }
    double upper(double x) const
    {
        const std::size_t k = locate(x);
        return right[k + 1] + segment(x, knots[k + 1]);
    }
};

} // namespace detail

class density_spec {
public:
    std::string name;
    param_map params;
    double support_lo = -inf;
    double support_hi = inf;

    std::function<double(double)> log_pdf_fn;
    std::function<double(double)> log_cdf_fn; // empty: numeric table
    std::function<double(double)> log_sf_fn;
    std::function<double(double)> dlogp_fn;   // V' = -(log p)'
    std::function<double(double)> stein_fn;   // closed-form Stein kernel
    std::function<double(double)> quantile_lower_fn; // x with log P(x) = l
    std::function<double(double)> quantile_upper_fn; // x with log(1-P(x)) = l
    std::shared_ptr<const detail::cdf_table> table;
    double mean_value = std::numeric_limits<double>::quiet_NaN();
    double center = 0.0; // bracketing hints for numeric quantiles
    double scale = 1.0;

    bool inside(double x) const { return x > support_lo && x < support_hi; }
    bool bounded_below() const { return std::isfinite(support_lo); }
    bool bounded_above() const { return std::isfinite(support_hi); }

    double log_pdf(double x) const
    {
        if (!inside(x)) throw domain_error(name + ": pdf evaluated outside the support");
        return log_pdf_fn(x);
    }
    double pdf(double x) const { return std::exp(log_pdf(x)); }

    double log_cdf(double x) const
    {
        if (x <= support_lo) return x == support_lo ? -inf : fail_outside(x);
        if (x >= support_hi) return x == support_hi ? 0.0 : fail_outside(x);
        if (log_cdf_fn) return log_cdf_fn(x);
        return std::log(table->lower(x));
    }
    double log_sf(double x) const
    {
        if (x <= support_lo) return x == support_lo ? 0.0 : fail_outside(x);
        if (x >= support_hi) return x == support_hi ? -inf : fail_outside(x);
        if (log_sf_fn) return log_sf_fn(x);
        return std::log(table->upper(x));
    }
    double cdf(double x) const { return std::exp(log_cdf(x)); }
    double sf(double x) const { return std::exp(log_sf(x)); }

    bool has_dlogp() const { return static_cast<bool>(dlogp_fn); }
    double dlogp(double x) const
    {
        if (!dlogp_fn) throw not_available(name + ": no analytic potential derivative");
        return dlogp_fn(x);
    }

    double mean() const { return mean_value; }

    // Stein kernel: closed form when the family has one, otherwise
    // (1/p(x)) * integral of (mean - t) p(t) from the nearer end.
    double stein_kernel(double x) const
    {
        if (!inside(x)) throw domain_error(name + ": Stein kernel outside the support");
        if (stein_fn) return stein_fn(x);
        if (!std::isfinite(mean_value)) throw moment_error(name + ": first moment is not finite");
        const double mu = mean_value;
        double l;
        if (x <= mu) {
            l = log_integral([&](double t) { return t >= mu ? -inf : std::log(mu - t) + log_pdf_safe(t); },
                             support_lo, x, 1e-12);
        } else {
            l = log_integral([&](double t) { return t <= mu ? -inf : std::log(t - mu) + log_pdf_safe(t); },
                             x, support_hi, 1e-12);
        }
        return std::exp(l - log_pdf(x));
    }

    // log p with the endpoints mapped to -inf, for integrands touching them.
    double log_pdf_safe(double x) const { return inside(x) ? log_pdf_fn(x) : -inf; }

    // Point x with log P(x) = l (lower tail) or log(1-P(x)) = l (upper tail).
    double quantile_log_lower(double l) const
    {
        if (!(l < 0.0)) throw domain_error(name + ": log-mass must be negative");
        if (quantile_lower_fn) return quantile_lower_fn(l);
        return solve_quantile(l, true);
    }
    double quantile_log_upper(double l) const
    {
        if (!(l < 0.0)) throw domain_error(name + ": log-mass must be negative");
        if (quantile_upper_fn) return quantile_upper_fn(l);
        return solve_quantile(l, false);
    }
    double quantile(double u) const
    {
        if (!(u > 0.0 && u < 1.0)) throw domain_error(name + ": quantile level outside ]0,1[");
        return u <= 0.5 ? quantile_log_lower(std::log(u)) : quantile_log_upper(std::log1p(-u));
    }
    double median() const { return quantile(0.5); }

private:
    double fail_outside(double x) const
    {
        throw domain_error(name + ": point " + std::to_string(x) + " outside the support");
    }

    // Safeguarded Newton on log P - l (or log(1-P) - l). Bisection steps are
    // geometric towards a finite endpoint so that masses like 1e-300 near a
    // power-law endpoint are reached in a few dozen steps.
    double solve_quantile(double l, bool lower) const
    {
        auto f = [&](double x) { return (lower ? log_cdf(x) : log_sf(x)) - l; };
        // f is increasing in x for the lower tail, decreasing for the upper.
        const double sgn = lower ? 1.0 : -1.0;
        double lo = support_lo, hi = support_hi;
        if (!bounded_below()) {
            double step = scale;
            lo = center - step;
            while (sgn * f(lo) > 0.0) {
                step *= 2.0;
                lo = center - step;
                if (!std::isfinite(lo)) throw construction_error(name + ": quantile bracket diverged");
            }
        }
        if (!bounded_above()) {
            double step = scale;
            hi = center + step;
            while (sgn * f(hi) < 0.0) {
                step *= 2.0;
                hi = center + step;
                if (!std::isfinite(hi)) throw construction_error(name + ": quantile bracket diverged");
            }
        }
        // Smallest distance from an endpoint that is still a distinct double.
        auto resolution = [](double end) {
            return std::max(4.0 * std::numeric_limits<double>::epsilon() * std::fabs(end), 1e-300);
        };
        auto midpoint = [&](double a, double b) {
            if (bounded_below() && a - support_lo < 1e-3 * (b - support_lo)) {
                const double da = std::max(a - support_lo, resolution(support_lo));
                return support_lo + std::sqrt(da * (b - support_lo));
            }
            if (bounded_above() && support_hi - b < 1e-3 * (support_hi - a)) {
                const double db = std::max(support_hi - b, resolution(support_hi));
                return support_hi - std::sqrt(db * (support_hi - a));
            }
            return 0.5 * (a + b);
        };
        double x = midpoint(lo, hi);
        for (int it = 0; it < 500; ++it) {
            const double fx = f(x);
            if (fx == 0.0) return x;
            if (sgn * fx < 0.0) lo = x;
            else hi = x;
            const double ref = std::min({std::fabs(x), bounded_below() ? x - support_lo : inf,
                                         bounded_above() ? support_hi - x : inf});
            const double tol = 4.0 * std::numeric_limits<double>::epsilon() * std::max(ref, 1e-300);
            if (hi - lo <= tol) return x;
            const double lp = log_pdf_fn(x);
            const double slope = sgn * std::exp(lp - (lower ? log_cdf(x) : log_sf(x)));
            double next = x - fx / slope;
            if (!(std::isfinite(next) && next > lo && next < hi)) next = midpoint(lo, hi);
            if (std::fabs(next - x) <= tol) return next;
            x = next;
        }
        return x;
    }
};

inline double cdf(const density_spec& d, double x) { return d.cdf(x); }
inline double survival(const density_spec& d, double x) { return d.sf(x); }
inline double quantile(const density_spec& d, double u) { return d.quantile(u); }
inline double median(const density_spec& d) { return d.median(); }

namespace detail {

inline double take(param_map& p, const std::string& key, double fallback, bool required)
{
    auto it = p.find(key);
    if (it == p.end()) {
        if (required) throw parameter_error("missing parameter '" + key + "'");
        return fallback;
    }
    const double v = it->second;
    p.erase(it);
    if (!std::isfinite(v)) throw parameter_error("parameter '" + key + "' must be finite");
    return v;
}

inline void require_positive(double v, const std::string& key)
{
    if (!(v > 0.0)) throw parameter_error("parameter '" + key + "' must be positive");
}

inline std::string canonical_key(const std::string& k)
{
    static const std::map<std::string, std::string> alias = {
        {"θ", "theta"}, {"α", "alpha"}, {"β", "beta"}, {"λ", "lambda"}, {"μ", "mu"}, {"σ", "sigma"}};
    auto it = alias.find(k);
    return it == alias.end() ? k : it->second;
}

inline double gaussian_log_sf(double z)
{
    constexpr double log_sqrt_2pi = 0.91893853320467274178;
    if (z < -20.0) return log1m_exp(gaussian_log_sf(-z));
    if (z < 20.0) return std::log(0.5 * std::erfc(z / std::sqrt(2.0)));
    // Mills ratio by its continued fraction, evaluated bottom-up.
    double r = z;
    for (int k = 60; k >= 1; --k) r = z + k / r;
    return -0.5 * z * z - log_sqrt_2pi - std::log(r);
}

// e^z * gamma_lower(s, z) / z^s as a series, for the Weibull Stein kernel at
// small z where the closed form cancels.
inline double weibull_stein_small(double s, double z, double lambda, double k, double x)
{
    // A = lambda*Gamma(s)*expm1(z) - lambda*z^s * sum_{n>=1} z^n/(s(s+1)...(s+n))
    double term = 1.0 / s;
    double sum = 0.0;
    for (int n = 1; n < 200; ++n) {
        term *= z / (s + n);
        sum += term;
        if (term < 1e-17 * sum) break;
    }
    const double a = lambda * std::tgamma(s) * std::expm1(z) - lambda * std::pow(z, s) * sum;
    return std::pow(lambda, k) / (k * k) * std::pow(x, 1.0 - k) * a;
}

} // namespace detail

// Catalog of the named families. Parameters are validated strictly; unknown
// names are rejected rather than ignored.
inline density_spec catalog(const std::string& family, const param_map& raw)
{
    param_map p;
    for (const auto& [k, v] : raw) p[detail::canonical_key(k)] = v;
    density_spec d;
    d.name = family;
    if (family == "gaussian") {
        const double mu = detail::take(p, "mu", 0.0, false);
        const double sigma = detail::take(p, "sigma", 1.0, false);
        detail::require_positive(sigma, "sigma");
        d.params = {{"mu", mu}, {"sigma", sigma}};
        const double lnorm = 0.91893853320467274178 + std::log(sigma);
        d.log_pdf_fn = [=](double x) {
            const double z = (x - mu) / sigma;
            return -0.5 * z * z - lnorm;
        };
        d.log_sf_fn = [=](double x) { return detail::gaussian_log_sf((x - mu) / sigma); };
        d.log_cdf_fn = [=](double x) { return detail::gaussian_log_sf((mu - x) / sigma); };
        d.dlogp_fn = [=](double x) { return (x - mu) / (sigma * sigma); };
        d.stein_fn = [=](double) { return sigma * sigma; };
        d.mean_value = mu;
        d.center = mu;
        d.scale = sigma;
    } else if (family == "exponential") {
        const double theta = detail::take(p, "theta", 1.0, false);
        detail::require_positive(theta, "theta");
        d.params = {{"theta", theta}};
        d.support_lo = 0.0;
        d.log_pdf_fn = [=](double x) { return -x / theta - std::log(theta); };
        d.log_sf_fn = [=](double x) { return -x / theta; };
        d.log_cdf_fn = [=](double x) { return log1m_exp(-x / theta); };
        d.dlogp_fn = [=](double) { return 1.0 / theta; };
        d.stein_fn = [=](double x) { return theta * x; };
        d.quantile_upper_fn = [=](double l) { return -theta * l; };
        d.quantile_lower_fn = [=](double l) { return -theta * log1m_exp(l); };
        d.mean_value = theta;
        d.center = theta;
        d.scale = theta;
    } else if (family == "uniform") {
        const double lo = detail::take(p, "lo", 0.0, false);
        const double hi = detail::take(p, "hi", 1.0, false);
        if (!(hi > lo)) throw parameter_error("uniform: need lo < hi");
        d.params = {{"lo", lo}, {"hi", hi}};
        d.support_lo = lo;
        d.support_hi = hi;
        const double len = hi - lo;
        d.log_pdf_fn = [=](double) { return -std::log(len); };
        d.log_cdf_fn = [=](double x) { return std::log((x - lo) / len); };
        d.log_sf_fn = [=](double x) { return std::log((hi - x) / len); };
        d.dlogp_fn = [](double) { return 0.0; };
        d.stein_fn = [=](double x) { return 0.5 * (x - lo) * (hi - x); };
        d.quantile_lower_fn = [=](double l) { return lo + len * std::exp(l); };
        d.quantile_upper_fn = [=](double l) { return hi - len * std::exp(l); };
        d.mean_value = 0.5 * (lo + hi);
        d.center = d.mean_value;
        d.scale = len;
    } else if (family == "beta") {
        const double a = detail::take(p, "alpha", 0.0, true);
        const double b = detail::take(p, "beta", 0.0, true);
        detail::require_positive(a, "alpha");
        detail::require_positive(b, "beta");
        d.params = {{"alpha", a}, {"beta", b}};
        d.support_lo = 0.0;
        d.support_hi = 1.0;
        const double lbeta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
        d.log_pdf_fn = [=](double x) { return (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) - lbeta; };
        d.log_cdf_fn = [=](double x) { return log_incomplete_beta(a, b, x, 1.0 - x).lower; };
        d.log_sf_fn = [=](double x) { return log_incomplete_beta(a, b, x, 1.0 - x).upper; };
        d.dlogp_fn = [=](double x) { return -(a - 1.0) / x + (b - 1.0) / (1.0 - x); };
        d.stein_fn = [=](double x) { return x * (1.0 - x) / (a + b); };
        d.mean_value = a / (a + b);
        d.center = d.mean_value;
        d.scale = 0.25;
    } else if (family == "gamma") {
        const double k = detail::take(p, "k", 0.0, true);
        const double theta = detail::take(p, "theta", 1.0, false);
        detail::require_positive(k, "k");
        detail::require_positive(theta, "theta");
        d.params = {{"k", k}, {"theta", theta}};
        d.support_lo = 0.0;
        const double lnorm = std::lgamma(k) + k * std::log(theta);
        d.log_pdf_fn = [=](double x) { return (k - 1.0) * std::log(x) - x / theta - lnorm; };
        d.log_cdf_fn = [=](double x) { return log_incomplete_gamma(k, x / theta).lower; };
        d.log_sf_fn = [=](double x) { return log_incomplete_gamma(k, x / theta).upper; };
        d.dlogp_fn = [=](double x) { return -(k - 1.0) / x + 1.0 / theta; };
        d.stein_fn = [=](double x) { return theta * x; };
        d.mean_value = k * theta;
        d.center = k * theta;
        d.scale = theta * std::sqrt(k);
    } else if (family == "subbotin") {
        const double a = detail::take(p, "alpha", 0.0, true);
        detail::require_positive(a, "alpha");
        d.params = {{"alpha", a}};
        const double lnorm = std::log(2.0) + std::log(a) / a + std::lgamma(1.0 + 1.0 / a);
        d.log_pdf_fn = [=](double x) { return -std::pow(std::fabs(x), a) / a - lnorm; };
        auto log_tail = [=](double t) { // log P(X > t) for t >= 0
            return std::log(0.5) + log_incomplete_gamma(1.0 / a, std::pow(t, a) / a).upper;
        };
        d.log_sf_fn = [=](double x) { return x >= 0.0 ? log_tail(x) : log1m_exp(log_tail(-x)); };
        d.log_cdf_fn = [=](double x) { return x <= 0.0 ? log_tail(-x) : log1m_exp(log_tail(x)); };
        d.dlogp_fn = [=](double x) {
            return x == 0.0 ? 0.0 : std::copysign(std::pow(std::fabs(x), a - 1.0), x);
        };
        d.stein_fn = [=](double x) {
            const double z = std::pow(std::fabs(x), a) / a;
            return std::exp(z + (2.0 / a - 1.0) * std::log(a) + log_upper_gamma(2.0 / a, z));
        };
        d.mean_value = 0.0;
        d.center = 0.0;
        d.scale = 1.0;
    } else if (family == "weibull") {
        const double k = detail::take(p, "k", 0.0, true);
        const double lambda = detail::take(p, "lambda", 1.0, false);
        detail::require_positive(k, "k");
        detail::require_positive(lambda, "lambda");
        d.params = {{"k", k}, {"lambda", lambda}};
        d.support_lo = 0.0;
        d.log_pdf_fn = [=](double x) {
            return std::log(k / lambda) + (k - 1.0) * std::log(x / lambda) - std::pow(x / lambda, k);
        };
        d.log_sf_fn = [=](double x) { return -std::pow(x / lambda, k); };
        d.log_cdf_fn = [=](double x) { return log1m_exp(-std::pow(x / lambda, k)); };
        d.dlogp_fn = [=](double x) { return -(k - 1.0) / x + (k / lambda) * std::pow(x / lambda, k - 1.0); };
        d.stein_fn = [=](double x) {
            const double z = std::pow(x / lambda, k);
            const double s = 1.0 / k;
            if (z < 1.0) return detail::weibull_stein_small(s, z, lambda, k, x);
            const double a = k * x - lambda * std::tgamma(s) + lambda * std::exp(z + log_upper_gamma(s, z));
            return std::pow(lambda, k) / (k * k) * std::pow(x, 1.0 - k) * a;
        };
        d.quantile_upper_fn = [=](double l) { return lambda * std::pow(-l, 1.0 / k); };
        d.quantile_lower_fn = [=](double l) { return lambda * std::pow(-log1m_exp(l), 1.0 / k); };
        d.mean_value = lambda * std::tgamma(1.0 + 1.0 / k);
        d.center = d.mean_value;
        d.scale = lambda;
    } else {
        throw parameter_error("unknown density family '" + family + "'");
    }
    if (!p.empty()) throw parameter_error(family + ": unexpected parameter '" + p.begin()->first + "'");
    return d;
}

namespace detail {

// Monotone (Fritsch-Carlson) cubic Hermite interpolant.
class monotone_cubic {
public:
    monotone_cubic(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y))
    {
        const std::size_t n = x_.size();
        std::vector<double> h(n - 1), delta(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            h[i] = x_[i + 1] - x_[i];
            delta[i] = (y_[i + 1] - y_[i]) / h[i];
        }
        d_.assign(n, 0.0);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (delta[i - 1] * delta[i] > 0.0) {
                const double w1 = 2.0 * h[i] + h[i - 1];
                const double w2 = h[i] + 2.0 * h[i - 1];
                d_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
            }
        }
        auto end_slope = [](double h0, double h1, double d0, double d1) {
            double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
            if (s * d0 <= 0.0) s = 0.0;
            else if (d0 * d1 <= 0.0 && std::fabs(s) > std::fabs(3.0 * d0)) s = 3.0 * d0;
            return s;
        };
        d_[0] = end_slope(h[0], h[1], delta[0], delta[1]);
        d_[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    }

    double operator()(double x) const
    {
        auto it = std::upper_bound(x_.begin(), x_.end(), x);
        std::size_t k = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
        k = std::min(k, x_.size() - 2);
        const double h = x_[k + 1] - x_[k];
        const double t = (x - x_[k]) / h;
        const double t2 = t * t, t3 = t2 * t;
        return (2 * t3 - 3 * t2 + 1) * y_[k] + (t3 - 2 * t2 + t) * h * d_[k] + (-2 * t3 + 3 * t2) * y_[k + 1]
               + (t3 - t2) * h * d_[k + 1];
    }

private:
    std::vector<double> x_, y_, d_;
};

} // namespace detail

// Reads a two-column table (x, ln p(x)); '#' starts a comment line, columns
// may be separated by whitespace or commas.
inline density_spec load_tabulated(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ingestion_error("cannot open tabulated density '" + path + "'");
    std::vector<double> xs, ys;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        for (char& c : line)
            if (c == ',') c = ' ';
        std::istringstream ss(line);
        std::vector<double> cols;
        std::string tok;
        while (ss >> tok) {
            char* end = nullptr;
            const double v = std::strtod(tok.c_str(), &end);
            if (end == tok.c_str() || *end != '\0' || !std::isfinite(v))
                throw ingestion_error(path + ":" + std::to_string(lineno) + ": not a finite number: '" + tok + "'");
            cols.push_back(v);
        }
        if (cols.size() != 2)
            throw ingestion_error(path + ":" + std::to_string(lineno) + ": expected two columns");
        if (!xs.empty() && !(cols[0] > xs.back()))
            throw ingestion_error(path + ":" + std::to_string(lineno) + ": abscissae must increase strictly");
        xs.push_back(cols[0]);
        ys.push_back(cols[1]);
    }
    if (xs.size() < 8) throw ingestion_error(path + ": need at least 8 rows, got " + std::to_string(xs.size()));

    auto interp = std::make_shared<detail::monotone_cubic>(xs, ys);
    auto table = std::make_shared<detail::cdf_table>();
    table->knots = xs;
    table->log_pdf = [interp](double x) { return (*interp)(x); };
    double z = 0.0;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) z += table->segment(xs[i], xs[i + 1]);
    if (!(z > 0.0) || !std::isfinite(z)) throw ingestion_error(path + ": table does not normalize");
    const double log_z = std::log(z);
    table->log_pdf = [interp, log_z](double x) { return (*interp)(x) - log_z; };
    const std::size_t n = xs.size();
    table->left.assign(n, 0.0);
    table->right.assign(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) table->left[i + 1] = table->left[i] + table->segment(xs[i], xs[i + 1]);
    for (std::size_t i = n - 1; i-- > 0;) table->right[i] = table->right[i + 1] + table->segment(xs[i], xs[i + 1]);

    density_spec d;
    d.name = "tabulated";
    d.params = {{"rows", static_cast<double>(n)}};
    d.support_lo = xs.front();
    d.support_hi = xs.back();
    d.log_pdf_fn = table->log_pdf;
    d.table = table;
    double m = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double c = 0.5 * (xs[i] + xs[i + 1]), h = 0.5 * (xs[i + 1] - xs[i]);
        for (int j = 0; j < table->rule.size(); ++j) {
            const double x = c + h * table->rule.nodes()[j];
            m += h * table->rule.weights()[j] * x * std::exp(table->log_pdf(x));
        }
    }
    d.mean_value = m;
    d.center = m;
    d.scale = xs.back() - xs.front();
    return d;
}

// ---------------------------------------------------------------------------
// Weights

enum class weight_kind { one, stein_kernel, power, rational };

struct weight_spec {
    weight_kind kind = weight_kind::one;
    double param = 0.0; // exponent c for power, b for rational

    static weight_spec one() { return {}; }
    static weight_spec stein() { return {weight_kind::stein_kernel, 0.0}; }
    static weight_spec power(double c) { return {weight_kind::power, c}; }
    static weight_spec rational(double b) { return {weight_kind::rational, b}; }

    bool has_derivative() const { return kind != weight_kind::stein_kernel; }

    std::string describe() const
    {
        std::ostringstream os;
        os.precision(17);
        switch (kind) {
        case weight_kind::one: return "one";
        case weight_kind::stein_kernel: return "stein_kernel";
        case weight_kind::power: os << "power:" << param; return os.str();
        case weight_kind::rational: os << "rational:" << param; return os.str();
        }
        return "?";
    }
};

// Accepts "one", "stein_kernel" (or "stein"), "power:c", "rational:b".
inline weight_spec parse_weight(const std::string& text)
{
    if (text == "one" || text == "1") return weight_spec::one();
    if (text == "stein_kernel" || text == "stein") return weight_spec::stein();
    const auto colon = text.find(':');
    if (colon != std::string::npos) {
        const std::string head = text.substr(0, colon);
        const std::string tail = text.substr(colon + 1);
        char* end = nullptr;
        const double v = std::strtod(tail.c_str(), &end);
        if (end == tail.c_str() || *end != '\0' || !std::isfinite(v))
            throw parameter_error("weight parameter is not a number: '" + tail + "'");
        if (head == "power") return weight_spec::power(v);
        if (head == "rational") return weight_spec::rational(v);
    }
    throw parameter_error("unknown weight '" + text + "'");
}

inline void validate_weight(const density_spec& d, const weight_spec& w)
{
    if (w.kind == weight_kind::power && d.support_lo < 0.0)
        throw parameter_error("power weight requires a support inside the positive half-line");
    if (w.kind == weight_kind::rational && !(w.param >= 0.0))
        throw parameter_error("rational weight needs b >= 0");
}

inline double log_weight(const density_spec& d, const weight_spec& w, double x)
{
    switch (w.kind) {
    case weight_kind::one: return 0.0;
    case weight_kind::stein_kernel: return std::log(d.stein_kernel(x));
    case weight_kind::power: return w.param * std::log(x);
    case weight_kind::rational: return -std::log1p(w.param * x * x);
    }
    return 0.0;
}

inline double weight_value(const density_spec& d, const weight_spec& w, double x)
{
    return std::exp(log_weight(d, w, x));
}

inline double weight_derivative(const density_spec&, const weight_spec& w, double x)
{
    switch (w.kind) {
    case weight_kind::one: return 0.0;
    case weight_kind::power: return w.param * std::pow(x, w.param - 1.0);
    case weight_kind::rational: {
        const double q = 1.0 + w.param * x * x;
        return -2.0 * w.param * x / (q * q);
    }
    case weight_kind::stein_kernel: break;
    }
    throw not_available("weight derivative is only available for one, power and rational weights");
}

} // namespace poincare
