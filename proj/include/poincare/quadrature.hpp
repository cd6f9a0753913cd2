#pragma once

// Gauss-Legendre rules with their spectral integration matrices, adaptive
// Gauss-Kronrod integration (finite or infinite limits), log-space
// integration for integrands spanning hundreds of decades, and the 1-D
// optimizers shared by the bound and iteration modules.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "special.hpp"

namespace poincare {

// Legendre values P_0..P_n at t.
inline std::vector<double> legendre_values(int n, double t)
{
    std::vector<double> p(n + 1);
    p[0] = 1.0;
    if (n >= 1) p[1] = t;
    for (int k = 1; k < n; ++k) p[k + 1] = ((2.0 * k + 1.0) * t * p[k] - k * p[k - 1]) / (k + 1.0);
    return p;
}

// m-point Gauss-Legendre rule on [-1,1], together with the matrices that
// interpolate and integrate the Lagrange basis through its nodes.
class panel_rule {
public:
    explicit panel_rule(int m) : m_(m), t_(m), w_(m), cum_(static_cast<std::size_t>(m) * m)
    {
        if (m < 1 || m > 64) throw domain_error("panel_rule: unsupported number of points");
        for (int i = 0; i < m; ++i) {
            double x = std::cos(pi * (i + 0.75) / (m + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                // after the recurrence p1 = P_m(x), p0 = P_{m-1}(x)
                double p0 = 1.0, p1 = x;
                for (int k = 1; k < m; ++k) {
                    const double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
                    p0 = p1;
                    p1 = p2;
                }
                dp = m * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::fabs(dx) < 1e-16) break;
            }
            t_[m - 1 - i] = x;
            w_[m - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        node_legendre_.resize(static_cast<std::size_t>(m) * m);
        for (int j = 0; j < m; ++j) {
            const auto pj = legendre_values(m - 1, t_[j]);
            for (int k = 0; k < m; ++k) node_legendre_[static_cast<std::size_t>(j) * m + k] = pj[k];
        }
        for (int i = 0; i < m; ++i) {
            const auto row = cumulative(t_[i]);
            std::copy(row.begin(), row.end(), cum_.begin() + static_cast<std::ptrdiff_t>(i) * m);
        }
    }

    int size() const { return m_; }
    const std::vector<double>& nodes() const { return t_; }
    const std::vector<double>& weights() const { return w_; }
    // cum(i,j) = integral over [-1, t_i] of the j-th Lagrange basis polynomial.
    double cum(int i, int j) const { return cum_[static_cast<std::size_t>(i) * m_ + j]; }

    // Lagrange basis values at an arbitrary t in [-1,1].
    std::vector<double> lagrange(double t) const
    {
        const auto pt = legendre_values(m_ - 1, t);
        std::vector<double> out(m_);
        for (int j = 0; j < m_; ++j) {
            double s = 0.0;
            for (int k = 0; k < m_; ++k) s += (2.0 * k + 1.0) * node_legendre_[j * m_ + k] * pt[k];
            out[j] = 0.5 * w_[j] * s;
        }
        return out;
    }

    // Integrals of the Lagrange basis over [-1, t].
    std::vector<double> cumulative(double t) const
    {
        const auto pt = legendre_values(m_, t);
        std::vector<double> out(m_);
        for (int j = 0; j < m_; ++j) {
            double s = 0.5 * (t + 1.0);
            for (int k = 1; k < m_; ++k)
                s += 0.5 * node_legendre_[static_cast<std::size_t>(j) * m_ + k] * (pt[k + 1] - pt[k - 1]);
            out[j] = w_[j] * s;
        }
        return out;
    }

private:
    int m_;
    std::vector<double> t_, w_, cum_, node_legendre_;
};

namespace detail {

inline constexpr std::array<double, 8> kronrod_x = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kronrod_w = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> gauss7_w = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct gk_result {
    double value;
    double error;
};

template <class F>
gk_result gauss_kronrod15(F&& f, double a, double b)
{
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double k = fc * kronrod_w[7];
    double g = fc * gauss7_w[3];
    for (int i = 0; i < 7; ++i) {
        const double dx = h * kronrod_x[i];
        const double s = f(c - dx) + f(c + dx);
        k += kronrod_w[i] * s;
        if (i % 2 == 1) g += gauss7_w[i / 2] * s;
    }
    return {k * h, std::fabs((k - g) * h)};
}

struct interval {
    double a, b, value, error;
};

} // namespace detail

struct integrate_options {
    double rel_tol = 1e-10;
    double abs_tol = 1e-10;
    int max_intervals = 2000;
};

// Adaptive bisection on a finite interval; converged when the summed
// Kronrod-minus-Gauss error is below max(abs_tol, rel_tol*|I|).
template <class F>
double integrate_finite(F&& f, double lo, double hi, const integrate_options& opt)
{
    if (lo == hi) return 0.0;
    std::vector<detail::interval> heap;
    auto cmp = [](const detail::interval& x, const detail::interval& y) { return x.error < y.error; };
    auto first = detail::gauss_kronrod15(f, lo, hi);
    heap.push_back({lo, hi, first.value, first.error});
    double total = first.value;
    double err = first.error;
    while (true) {
        if (!std::isfinite(total) || !std::isfinite(err))
            throw accuracy_error("integrate: non-finite integrand", total, err);
        if (err <= std::max(opt.abs_tol, opt.rel_tol * std::fabs(total))) break;
        if (static_cast<int>(heap.size()) >= opt.max_intervals)
            throw accuracy_error("integrate: subdivision budget exhausted", total, err);
        std::pop_heap(heap.begin(), heap.end(), cmp);
        const auto worst = heap.back();
        heap.pop_back();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b))
            throw accuracy_error("integrate: interval collapsed", total, err);
        const auto left = detail::gauss_kronrod15(f, worst.a, mid);
        const auto right = detail::gauss_kronrod15(f, mid, worst.b);
        heap.push_back({worst.a, mid, left.value, left.error});
        std::push_heap(heap.begin(), heap.end(), cmp);
        heap.push_back({mid, worst.b, right.value, right.error});
        std::push_heap(heap.begin(), heap.end(), cmp);
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        if (heap.size() % 64 == 0) {
            total = 0.0;
            err = 0.0;
            for (const auto& iv : heap) {
                total += iv.value;
                err += iv.error;
            }
        }
    }
    // Final sum in left-to-right order so the result does not depend on heap layout.
    std::sort(heap.begin(), heap.end(), [](const auto& x, const auto& y) { return x.a < y.a; });
    double sum = 0.0;
    for (const auto& iv : heap) sum += iv.value;
    return sum;
}

// Infinite limits are mapped onto finite ones (x = a + t/(1-t) and friends).
template <class F>
double integrate(F&& f, double lo, double hi, const integrate_options& opt = {})
{
    if (std::isnan(lo) || std::isnan(hi)) throw domain_error("integrate: NaN limit");
    if (lo > hi) return -integrate(f, hi, lo, opt);
    const bool lo_inf = std::isinf(lo);
    const bool hi_inf = std::isinf(hi);
    if (!lo_inf && !hi_inf) return integrate_finite(f, lo, hi, opt);
    if (lo_inf && hi_inf) {
        auto g = [&](double t) {
            const double d = 1.0 - t * t;
            return f(t / d) * (1.0 + t * t) / (d * d);
        };
        return integrate_finite(g, -1.0, 1.0, opt);
    }
    if (hi_inf) {
        auto g = [&](double t) {
            const double d = 1.0 - t;
            return f(lo + t / d) / (d * d);
        };
        return integrate_finite(g, 0.0, 1.0, opt);
    }
    auto g = [&](double t) {
        const double d = 1.0 - t;
        return f(hi - t / d) / (d * d);
    };
    return integrate_finite(g, 0.0, 1.0, opt);
}

template <class F>
double integrate(F&& f, double lo, double hi, double tol)
{
    return integrate(std::forward<F>(f), lo, hi, integrate_options{tol, tol, 2000});
}

namespace detail {

// integrate_finite, but a noisy integrand that exhausts the budget with a
// still small error bound is accepted rather than rejected.
// A short budget is tried first so that noise-limited integrands do not burn
// the full one.
template <class F>
double settle(F&& f, double lo, double hi, const integrate_options& opt)
{
    auto acceptable = [&](const accuracy_error& e) {
        return std::isfinite(e.estimate()) && e.error_bound() <= 1e-7 * std::fabs(e.estimate()) + opt.abs_tol;
    };
    try {
        return integrate_finite(f, lo, hi, integrate_options{opt.rel_tol, opt.abs_tol, std::min(opt.max_intervals, 200)});
    } catch (const accuracy_error& e) {
        if (acceptable(e)) return e.estimate();
    }
    try {
        return integrate_finite(f, lo, hi, opt);
    } catch (const accuracy_error& e) {
        if (acceptable(e)) return e.estimate();
        throw;
    }
}

// Decay length of exp(phi) at x when walking in direction dir (+1 or -1).
template <class Phi>
double decay_length(Phi&& phi, double x, double dir, double fallback)
{
    const double h = 1e-6 * std::max(1.0, std::fabs(x));
    const double d = (phi(x + dir * h) - phi(x)) / h;
    if (std::isfinite(d) && d < 0.0) return std::min(fallback, 1.0 / -d);
    return fallback;
}

} // namespace detail

// log of the integral of exp(phi) over [lo, hi]; either limit may be infinite.
// Finite intervals are cut dyadically towards both ends, at a depth set by the
// slope of phi there, so that sharp end peaks are resolved before adaptive
// refinement starts. Infinite sides are walked with geometrically growing
// panels until the contributions die out.
template <class Phi>
double log_integral(Phi&& phi, double lo, double hi, double rel_tol = 1e-12)
{
    if (!(lo < hi)) return -inf;
    if (std::isinf(lo) && std::isinf(hi)) {
        const double l = log_integral(phi, lo, 0.0, rel_tol);
        const double r = log_integral(phi, 0.0, hi, rel_tol);
        return log_add(l, r);
    }
    if (std::isinf(hi) || std::isinf(lo)) {
        const double dir = std::isinf(hi) ? 1.0 : -1.0;
        const double x0 = std::isinf(hi) ? lo : hi;
        const double ref = phi(x0);
        const double step0 = detail::decay_length(phi, x0, dir, std::max(1.0, std::fabs(x0)));
        double acc = -inf;
        double left = 0.0;
        int quiet = 0;
        for (int k = 0; k < 400; ++k) {
            const double right = step0 * (std::exp2(k + 1) - 1.0);
            const double a = x0 + dir * left;
            const double b = x0 + dir * right;
            const double lo_p = std::min(a, b), hi_p = std::max(a, b);
            const double piece_ref = std::max(ref, std::max(phi(lo_p), phi(hi_p)));
            auto g = [&](double t) {
                const double v = phi(t);
                return v == -inf ? 0.0 : std::exp(v - piece_ref);
            };
            const double tol = std::max(rel_tol, 64.0 * std::numeric_limits<double>::epsilon() * std::fabs(piece_ref));
            const double piece = detail::settle(g, lo_p, hi_p, integrate_options{tol, 0.0, 4000});
            const double lp = piece > 0.0 ? piece_ref + std::log(piece) : -inf;
            const double before = acc;
            acc = log_add(acc, lp);
            if (lp < before + std::log(rel_tol * 1e-2)) {
                if (++quiet >= 2 && k >= 3) return acc;
            } else {
                quiet = 0;
            }
            left = right;
            if (!std::isfinite(x0 + dir * right)) break;
        }
        throw accuracy_error("log_integral: tail integral does not settle", acc, inf);
    }
    const double len = hi - lo;
    const double scale = std::max(std::fabs(lo), std::fabs(hi));
    const double min_width = std::max(64.0 * std::numeric_limits<double>::epsilon() * scale, 1e-300);
    auto depth = [&](double x, double dir) {
        const double l = detail::decay_length(phi, x, dir, len);
        int k = static_cast<int>(std::ceil(std::log2(len / l))) + 3;
        while (k > 0 && len * std::exp2(-k) < min_width) --k;
        return std::clamp(k, 1, 60);
    };
    const int k_lo = depth(lo + 0.5 * min_width, 1.0);
    const int k_hi = depth(hi - 0.5 * min_width, -1.0);
    std::vector<double> cuts{lo, hi, lo + 0.5 * len};
    for (int k = 1; k <= k_lo; ++k) cuts.push_back(lo + len * std::exp2(-k - 1));
    for (int k = 1; k <= k_hi; ++k) cuts.push_back(hi - len * std::exp2(-k - 1));
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    double ref = -inf;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double m = 0.5 * (cuts[i] + cuts[i + 1]);
        ref = std::max(ref, phi(m));
    }
    for (double c : {cuts.front(), cuts.back()}) {
        const double v = phi(c);
        if (std::isfinite(v)) ref = std::max(ref, v);
    }
    if (ref == -inf) return -inf;
    auto g = [&](double t) {
        const double v = phi(t);
        return v == -inf ? 0.0 : std::exp(v - ref);
    };
    std::vector<double> pieces(cuts.size() - 1);
    double rough = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        pieces[i] = detail::gauss_kronrod15(g, cuts[i], cuts[i + 1]).value;
        rough += std::fabs(pieces[i]);
    }
    // phi itself carries an absolute rounding error of about eps*|phi|, which
    // caps the relative accuracy any rule can reach.
    const double tol = std::max(rel_tol, 64.0 * std::numeric_limits<double>::epsilon() * std::fabs(ref));
    double total = 0.0;
    const double abs_tol = tol * rough / static_cast<double>(pieces.size());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        total += detail::settle(g, cuts[i], cuts[i + 1], integrate_options{tol, abs_tol, 4000});
    if (!(total > 0.0)) return -inf;
    return ref + std::log(total);
}

struct extremum {
    double x;
    double value;
};

// Golden-section search for the maximum (or minimum) of f on [a,b].
template <class F>
extremum golden_section(F&& f, double a, double b, bool maximize, double x_tol = 1e-12)
{
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    const double sign = maximize ? 1.0 : -1.0;
    double c = b - r * (b - a);
    double d = a + r * (b - a);
    double fc = sign * f(c);
    double fd = sign * f(d);
    for (int it = 0; it < 200 && (b - a) > x_tol * std::max(1.0, std::fabs(c)); ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = sign * f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = sign * f(d);
        }
    }
    if (fc > fd) return {c, sign * fc};
    return {d, sign * fd};
}

// Bisection for a sign change of f on [a,b].
template <class F>
double bisect(F&& f, double a, double b, double x_tol = 1e-15, int max_iter = 400)
{
    double fa = f(a);
    const double fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0.0) == (fb > 0.0)) throw domain_error("bisect: no sign change on bracket");
    for (int it = 0; it < max_iter; ++it) {
        const double m = 0.5 * (a + b);
        if (!(m > a && m < b) || (b - a) <= x_tol * std::max(1.0, std::fabs(m))) return m;
        const double fm = f(m);
        if (fm == 0.0) return m;
        if ((fm > 0.0) == (fa > 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

} // namespace poincare
