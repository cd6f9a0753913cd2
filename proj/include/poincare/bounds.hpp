#pragma once

// Bounds on C(p,w): Muckenhoupt, transport, entropy, Stein kernel, the
// Chen-Wang variational formula in its integral and differential forms, and
// the Hilbert-Schmidt norm of k_w.
//
// Suprema and infima are taken over the grid nodes plus "far probes": points
// whose tail mass is far below the truncation mass (down to e^-1e8). The far
// probes let a bound whose supremum is only approached at infinity be read
// off accurately, and they are what separates a finite limit from a
// divergent one (see extremum_over).

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "density.hpp"
#include "errors.hpp"
#include "grid.hpp"
#include "quadrature.hpp"
#include "special.hpp"

namespace poincare {

struct bound_entry {
    std::string name;
    std::optional<double> lower;
    std::optional<double> upper;
    std::optional<double> lower_at;
    std::optional<double> upper_at;
    bool upper_infinite = false;
    bool constant = false; // the bounded ratio is constant: its test function saturates
    std::string note;
};

struct bound_meta {
    std::size_t grid_size = 0;
    int n_panels = 0;
    int pts_per_panel = 0;
    double eps_trunc = 0.0;
    double polish_tol = 1e-12;
    double divergence_factor = 10.0;
};

struct bound_report {
    std::vector<bound_entry> entries;
    bound_meta meta;

    const bound_entry* find(const std::string& name) const
    {
        for (const auto& e : entries)
            if (e.name == name) return &e;
        return nullptr;
    }
};

// Reference tail mass for divergence detection and the growth factor that
// flags a supremum as infinite.
inline constexpr double reference_mass = 1e-8;
inline constexpr double divergence_factor = 10.0;

namespace detail {

struct probe_set {
    std::vector<double> x; // sorted, strictly inside the support
    double ref_lo = std::numeric_limits<double>::quiet_NaN();
    double ref_hi = std::numeric_limits<double>::quiet_NaN();
};

inline std::vector<double> far_probes(const density_spec& d, double eps, bool lower)
{
    std::vector<double> out;
    const double start = std::log(0.5 * eps);
    double last = lower ? d.support_hi : d.support_lo;
    for (int k = 0; k < 60; ++k) {
        const double l = start - 5.0 * std::exp2(k);
        if (l < -1e8) break;
        double x;
        try {
            x = lower ? d.quantile_log_lower(l) : d.quantile_log_upper(l);
        } catch (const error&) {
            break;
        }
        if (!d.inside(x) || !std::isfinite(x)) break;
        if (lower ? !(x < last) : !(x > last)) break;
        out.push_back(x);
        last = x;
    }
    return out;
}

inline probe_set make_probes(const density_spec& d, const quad_grid& g)
{
    probe_set ps;
    ps.x = g.nodes;
    const double eps = g.options.eps_trunc;
    for (double x : far_probes(d, eps, true)) ps.x.push_back(x);
    for (double x : far_probes(d, eps, false)) ps.x.push_back(x);
    try {
        ps.ref_lo = d.quantile_log_lower(std::log(0.5 * reference_mass));
        ps.ref_hi = d.quantile_log_upper(std::log(0.5 * reference_mass));
        if (d.inside(ps.ref_lo)) ps.x.push_back(ps.ref_lo);
        if (d.inside(ps.ref_hi)) ps.x.push_back(ps.ref_hi);
    } catch (const error&) {
    }
    std::sort(ps.x.begin(), ps.x.end());
    ps.x.erase(std::unique(ps.x.begin(), ps.x.end()), ps.x.end());
    return ps;
}

inline probe_set restrict_probes(const probe_set& ps, double lo, double hi)
{
    probe_set out;
    out.ref_lo = ps.ref_lo;
    out.ref_hi = ps.ref_hi;
    for (double x : ps.x)
        if (x > lo && x < hi) out.x.push_back(x);
    return out;
}

template <class F>
double safe_eval(F&& f, double x)
{
    try {
        const double v = f(x);
        return std::isnan(v) ? std::numeric_limits<double>::quiet_NaN() : v;
    } catch (const error&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

struct located {
    double value = std::numeric_limits<double>::quiet_NaN();
    double at = std::numeric_limits<double>::quiet_NaN();
    bool infinite = false;
    bool at_edge = false;
    double spread = 1.0; // max/min of the positive values seen
};

// Extremum of f over the probes, polished by golden-section search between
// the neighbours of the best probe. A supremum approached at the outermost
// probe is flagged infinite when it exceeds divergence_factor times the value
// at the reference-mass probe on that side.
template <class F>
located extremum_over(const probe_set& ps, F&& f, bool maximize)
{
    const std::size_t n = ps.x.size();
    std::vector<double> vals(n);
    for (std::size_t i = 0; i < n; ++i) vals[i] = safe_eval(f, ps.x[i]);
    std::size_t best = n, first = n, last = n;
    double vmax = -inf, vmin = inf;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::isnan(vals[i])) continue;
        if (first == n) first = i;
        last = i;
        if (vals[i] > 0.0) {
            vmax = std::max(vmax, vals[i]);
            vmin = std::min(vmin, vals[i]);
        }
        if (best == n || (maximize ? vals[i] > vals[best] : vals[i] < vals[best])) best = i;
    }
    located out;
    if (best == n) return out;
    out.value = vals[best];
    out.at = ps.x[best];
    out.spread = vmin > 0.0 && std::isfinite(vmax) ? vmax / vmin : inf;
    if (best == first || best == last) {
        out.at_edge = true;
        if (maximize) {
            const double ref = safe_eval(f, best == first ? ps.ref_lo : ps.ref_hi);
            if (out.value == inf || (std::isfinite(ref) && ref > 0.0 && out.value > divergence_factor * ref))
                out.infinite = true;
        }
        return out;
    }
    std::size_t lo = best, hi = best;
    while (lo > first && std::isnan(vals[lo - 1])) --lo;
    while (hi < last && std::isnan(vals[hi + 1])) ++hi;
    const double a = ps.x[lo > first ? lo - 1 : lo], b = ps.x[hi < last ? hi + 1 : hi];
    auto g = [&](double x) {
        const double v = safe_eval(f, x);
        return std::isnan(v) ? (maximize ? -inf : inf) : v;
    };
    const extremum e = golden_section(g, a, b, maximize, 1e-12);
    if (maximize ? e.value > out.value : e.value < out.value) {
        out.value = e.value;
        out.at = e.x;
    }
    return out;
}

// log of the integral of exp(phi) from an anchor to x, tabulated at sorted
// points and extended in between. Forward: anchor <= x; backward: x <= anchor.
class log_cumulative {
public:
    log_cumulative(std::function<double(double)> phi, double anchor, std::vector<double> xs, bool forward)
        : phi_(std::move(phi)), anchor_(anchor), xs_(std::move(xs)), forward_(forward), cum_(xs_.size())
    {
        const std::size_t n = xs_.size();
        if (n == 0) return;
        if (forward_) {
            cum_[0] = log_integral(phi_, anchor_, xs_[0]);
            for (std::size_t k = 1; k < n; ++k) cum_[k] = log_add(cum_[k - 1], log_integral(phi_, xs_[k - 1], xs_[k]));
        } else {
            cum_[n - 1] = log_integral(phi_, xs_[n - 1], anchor_);
            for (std::size_t k = n - 1; k-- > 0;) cum_[k] = log_add(cum_[k + 1], log_integral(phi_, xs_[k], xs_[k + 1]));
        }
    }

    double operator()(double x) const
    {
        if (forward_) {
            auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
            if (it == xs_.begin()) return log_integral(phi_, anchor_, x);
            const std::size_t k = static_cast<std::size_t>(it - xs_.begin()) - 1;
            return xs_[k] == x ? cum_[k] : log_add(cum_[k], log_integral(phi_, xs_[k], x));
        }
        auto it = std::lower_bound(xs_.begin(), xs_.end(), x);
        if (it == xs_.end()) return log_integral(phi_, x, anchor_);
        const std::size_t k = static_cast<std::size_t>(it - xs_.begin());
        return xs_[k] == x ? cum_[k] : log_add(cum_[k], log_integral(phi_, x, xs_[k]));
    }

private:
    std::function<double(double)> phi_;
    double anchor_;
    std::vector<double> xs_;
    bool forward_;
    std::vector<double> cum_;
};

inline bound_meta meta_of(const quad_grid& g)
{
    bound_meta m;
    m.grid_size = g.size();
    m.n_panels = g.options.n_panels;
    m.pts_per_panel = g.options.pts_per_panel;
    m.eps_trunc = g.options.eps_trunc;
    return m;
}

// -y log y - (1-y) log(1-y) in log form, from log y and log(1-y).
inline double log_binary_entropy(double ly, double lz)
{
    const double a = ly < 0.0 ? ly + std::log(-ly) : -inf;
    const double b = lz < 0.0 ? lz + std::log(-lz) : -inf;
    return log_add(a, b);
}

inline bool second_moment_finite(const density_spec& d)
{
    try {
        const double l = log_integral(
            [&](double t) { return t == 0.0 ? -inf : 2.0 * std::log(std::fabs(t)) + d.log_pdf_safe(t); }, d.support_lo,
            d.support_hi, 1e-8);
        return std::isfinite(l);
    } catch (const error&) {
        return false;
    }
}

} // namespace detail

// B/2 <= C(p,1) <= 4B with B = max(B+, B-),
//     B+ = sup_{x>m} Pbar(x) int_m^x 1/p,   B- = sup_{x<m} P(x) int_x^m 1/p.
inline bound_entry muckenhoupt(const density_spec& d, const grid_options& opt = {})
{
    const auto g = build_grid(d, weight_spec::one(), opt);
    const auto probes = detail::make_probes(d, *g);
    const double m = d.median();
    auto inv_p = [&](double t) { return d.inside(t) ? -d.log_pdf_fn(t) : -inf; };
    const auto upper_side = detail::restrict_probes(probes, m, inf);
    const auto lower_side = detail::restrict_probes(probes, -inf, m);
    const detail::log_cumulative right(inv_p, m, upper_side.x, true);
    const detail::log_cumulative left(inv_p, m, lower_side.x, false);
    const auto bp = detail::extremum_over(upper_side, [&](double x) { return std::exp(d.log_sf(x) + right(x)); }, true);
    const auto bm = detail::extremum_over(lower_side, [&](double x) { return std::exp(d.log_cdf(x) + left(x)); }, true);
    const bool plus = !(bm.value > bp.value);
    const auto& b = plus ? bp : bm;
    bound_entry e;
    e.name = "muckenhoupt";
    e.lower = 0.5 * b.value;
    e.upper_at = e.lower_at = b.at;
    if (bp.infinite || bm.infinite) {
        e.upper_infinite = true;
        e.upper = inf;
        e.note = "tail integral of 1/p outgrows the tail mass";
    } else {
        e.upper = 4.0 * b.value;
    }
    return e;
}

// Upper bound 4 (sup P Pbar / p)^2, unweighted only.
inline bound_entry transport_bound(const density_spec& d, const grid_options& opt = {})
{
    const auto g = build_grid(d, weight_spec::one(), opt);
    const auto probes = detail::make_probes(d, *g);
    const auto r = detail::extremum_over(
        probes, [&](double x) { return std::exp(d.log_cdf(x) + d.log_sf(x) - d.log_pdf(x)); }, true);
    bound_entry e;
    e.name = "transport";
    e.upper_at = r.at;
    e.upper_infinite = r.infinite;
    e.upper = r.infinite ? inf : 4.0 * r.value * r.value;
    return e;
}

// Upper bound sup P Pbar psi(P) / (w p^2), psi the binary entropy.
inline bound_entry entropy_bound(const density_spec& d, const weight_spec& w, const grid_options& opt = {})
{
    const auto g = build_grid(d, w, opt);
    const auto probes = detail::make_probes(d, *g);
    const auto r = detail::extremum_over(
        probes,
        [&](double x) {
            const double lc = d.log_cdf(x), ls = d.log_sf(x);
            return std::exp(lc + ls + detail::log_binary_entropy(lc, ls) - log_weight(d, w, x) - 2.0 * d.log_pdf(x));
        },
        true);
    bound_entry e;
    e.name = "entropy";
    e.upper_at = r.at;
    e.upper_infinite = r.infinite;
    e.upper = r.infinite ? inf : r.value;
    return e;
}

// inf tau/w <= C(p,w) <= sup tau/w; the lower side needs a finite second
// moment, the upper side a finite first moment.
inline bound_entry stein_kernel_bounds(const density_spec& d, const weight_spec& w, const grid_options& opt = {})
{
    if (!std::isfinite(d.mean())) throw moment_error(d.name + ": first moment is not finite");
    const auto g = build_grid(d, w, opt);
    const auto probes = detail::make_probes(d, *g);
    auto ratio = [&](double x) {
        if (w.kind == weight_kind::stein_kernel) return 1.0;
        return std::exp(std::log(d.stein_kernel(x)) - log_weight(d, w, x));
    };
    const auto hi = detail::extremum_over(probes, ratio, true);
    bound_entry e;
    e.name = "stein_kernel";
    e.upper_at = hi.at;
    e.upper_infinite = hi.infinite;
    e.upper = hi.infinite ? inf : hi.value;
    if (detail::second_moment_finite(d)) {
        const auto lo = detail::extremum_over(probes, ratio, false);
        e.lower = lo.value;
        e.lower_at = lo.at;
        e.constant = hi.spread < 1.0 + 1e-6;
    } else {
        e.note = "second moment diverges: lower side suppressed";
    }
    return e;
}

// h' for the Chen-Wang formula. When h' over- or underflows in the far tails,
// log_neg supplies log(-h') directly.
struct test_derivative {
    std::function<double(double)> value;
    std::function<double(double)> log_neg;

    double log_minus(double x) const { return log_neg ? log_neg(x) : std::log(-value(x)); }
    double operator()(double x) const { return value ? value(x) : -std::exp(log_neg(x)); }
};

enum class bound_side { lower, upper };

struct chen_wang_result {
    double value = std::numeric_limits<double>::quiet_NaN();
    double at = std::numeric_limits<double>::quiet_NaN();
    bool infinite = false;
    bool constant = false;
};

namespace detail {

// -T~h / (h' w) through the kernel representation
//     -T~h(x) = [Pbar(x) int_a^x P (-h') + P(x) int_x^b Pbar (-h')] / p(x),
// with both integrals carried in log space.
struct chen_wang_ratio {
    const density_spec& d;
    const weight_spec& w;
    const test_derivative& hp;
    log_cumulative left, right;

    chen_wang_ratio(const density_spec& dd, const weight_spec& ww, const test_derivative& h, const std::vector<double>& xs)
        : d(dd), w(ww), hp(h),
          left([&dd, &h](double t) { return dd.inside(t) ? dd.log_cdf(t) + h.log_minus(t) : -inf; }, dd.support_lo, xs,
               true),
          right([&dd, &h](double t) { return dd.inside(t) ? dd.log_sf(t) + h.log_minus(t) : -inf; }, dd.support_hi, xs,
                false)
    {
    }

    double operator()(double x) const
    {
        const double num = log_add(d.log_sf(x) + left(x), d.log_cdf(x) + right(x));
        return std::exp(num - d.log_pdf(x) - log_weight(d, w, x) - hp.log_minus(x));
    }
};

} // namespace detail

inline chen_wang_result chen_wang(const density_spec& d, const weight_spec& w, const test_derivative& hprime,
                                  bound_side side, const grid_options& opt = {})
{
    const auto g = build_grid(d, w, opt);
    for (double x : g->nodes) {
        const double v = hprime.log_minus(x);
        if (std::isnan(v) || v == -inf || (hprime.value && !(hprime.value(x) < 0.0)))
            throw precondition_error("chen_wang: h' must be negative at every grid node");
    }
    if (side == bound_side::lower) {
        // h in L2(p): the p-second moment of the primitive must not grow
        // when the truncation is tightened.
        auto second_moment = [&](const grid_options& o) {
            const auto gg = build_grid(d, w, o);
            grid_function f = sample(gg, [&](double x) { return hprime(x); });
            const auto h = primitive(f);
            double m1 = 0.0, m2 = 0.0, mass = 0.0;
            for (std::size_t i = 0; i < gg->size(); ++i) {
                const double wp = gg->weights[i] * gg->pdf_vals[i];
                mass += wp;
                m1 += wp * h.values[i];
                m2 += wp * h.values[i] * h.values[i];
            }
            return m2 / mass - (m1 / mass) * (m1 / mass);
        };
        grid_options tight = opt;
        tight.eps_trunc = opt.eps_trunc * 1e-4;
        const double v1 = second_moment(opt), v2 = second_moment(tight);
        if (!std::isfinite(v1) || !std::isfinite(v2) || v2 > 1.1 * v1 + 1e-12)
            throw moment_error("chen_wang: the primitive of h' is not square integrable");
    }
    const auto probes = detail::make_probes(d, *g);
    const detail::chen_wang_ratio ratio(d, w, hprime, probes.x);
    const auto r = detail::extremum_over(probes, ratio, side == bound_side::upper);
    chen_wang_result out;
    out.value = r.value;
    out.at = r.at;
    out.infinite = r.infinite;
    out.constant = r.spread < 1.0 + 1e-6;
    if (out.infinite) out.value = inf;
    return out;
}

// f' and f'' for the differential form.
struct test_function {
    std::function<double(double)> d1;
    std::function<double(double)> d2;
};

struct differential_result {
    double lower = std::numeric_limits<double>::quiet_NaN();
    double upper = std::numeric_limits<double>::quiet_NaN();
    double lower_at = std::numeric_limits<double>::quiet_NaN();
    double upper_at = std::numeric_limits<double>::quiet_NaN();
    bool upper_infinite = false;
    bool constant = false;
    bool boundary_flag = false; // |f' w p| at a truncation end exceeds 1e-6
    double boundary_lo = 0.0;   // estimated limits of f' w p at the ends
    double boundary_hi = 0.0;
};

// (f'w - Phi(f'w)) / (-(Lf)' w) with Lf = f''w + f'(-V'w + w'), where
//     Phi g(x) = Pbar(x)/p(x) lim_a g p + P(x)/p(x) lim_b g p.
inline differential_result chen_wang_differential(const density_spec& d, const weight_spec& w, const test_function& f,
                                                  const grid_options& opt = {})
{
    if (!d.has_dlogp()) throw not_available(d.name + ": chen_wang_differential needs the potential derivative");
    if (!w.has_derivative()) throw not_available("chen_wang_differential needs a weight with a derivative");
    const auto g = build_grid(d, w, opt);
    auto lf = [&](double x) {
        const double wv = weight_value(d, w, x);
        return f.d2(x) * wv + f.d1(x) * (-d.dlogp(x) * wv + weight_derivative(d, w, x));
    };
    // Five-point differences, halving the step until two successive
    // estimates agree; Lf may vary on a scale much shorter than |x|. Returns
    // NaN where the derivative cannot be resolved to 1e-7 relative (e.g.
    // near an endpoint where (Lf)' is tiny next to Lf itself).
    auto lf_prime = [&](double x) {
        double h = 1e-2 * std::max(1.0, std::fabs(x));
        if (d.bounded_below()) h = std::min(h, 0.2 * (x - d.support_lo));
        if (d.bounded_above()) h = std::min(h, 0.2 * (d.support_hi - x));
        auto diff = [&](double s) { return (lf(x - 2 * s) - 8 * lf(x - s) + 8 * lf(x + s) - lf(x + 2 * s)) / (12 * s); };
        // Rounding noise of a difference quotient with step s: Lf is a sum of
        // terms that may be much larger than Lf itself.
        const double wv = weight_value(d, w, x);
        const double mag = std::fabs(f.d2(x) * wv)
                           + std::fabs(f.d1(x)) * (std::fabs(d.dlogp(x) * wv) + std::fabs(weight_derivative(d, w, x)));
        auto noise = [&](double s) { return 2.0 * std::numeric_limits<double>::epsilon() * mag / s; };
        double prev = diff(h), best = prev, best_gap = inf, best_h = h;
        for (int k = 0; k < 30; ++k) {
            h *= 0.5;
            const double cur = diff(h);
            const double gap = std::fabs(cur - prev);
            if (gap < best_gap) {
                best_gap = gap;
                best = cur;
                best_h = h;
            }
            if (gap <= 1e-11 * std::fabs(cur) && std::fabs(cur) > 1e7 * noise(h)) return cur;
            prev = cur;
        }
        const bool resolved = best_gap <= 1e-7 * std::fabs(best) && std::fabs(best) > 1e7 * noise(best_h);
        return resolved ? best : std::numeric_limits<double>::quiet_NaN();
    };
    for (double x : g->nodes) {
        const double v = lf_prime(x);
        if (std::isfinite(v) && !(v < 0.0))
            throw precondition_error("chen_wang_differential: -(Lf)' must be positive at every grid node (x = "
                                     + std::to_string(x) + ")");
    }
    auto probes = detail::make_probes(d, *g);
    // Boundary limits of g p, g = f' w, read at the farthest probe where they
    // are still finite.
    auto gp = [&](double x) { return f.d1(x) * weight_value(d, w, x) * d.pdf(x); };
    differential_result out;
    for (std::size_t i = 0; i < probes.x.size(); ++i) {
        const double v = detail::safe_eval(gp, probes.x[i]);
        if (std::isfinite(v)) {
            out.boundary_lo = v;
            break;
        }
    }
    for (std::size_t i = probes.x.size(); i-- > 0;) {
        const double v = detail::safe_eval(gp, probes.x[i]);
        if (std::isfinite(v)) {
            out.boundary_hi = v;
            break;
        }
    }
    out.boundary_flag = std::fabs(out.boundary_lo) > 1e-6 || std::fabs(out.boundary_hi) > 1e-6;
    auto ratio = [&](double x) {
        const double wv = weight_value(d, w, x);
        const double phi = (d.sf(x) * out.boundary_lo + d.cdf(x) * out.boundary_hi) / d.pdf(x);
        const double v = (f.d1(x) * wv - phi) / (-lf_prime(x) * wv);
        return std::isfinite(v) ? v : std::numeric_limits<double>::quiet_NaN();
    };
    const auto hi = detail::extremum_over(probes, ratio, true);
    const auto lo = detail::extremum_over(probes, ratio, false);
    out.upper = hi.infinite ? inf : hi.value;
    out.upper_infinite = hi.infinite;
    out.upper_at = hi.at;
    out.lower = lo.value;
    out.lower_at = lo.at;
    out.constant = hi.spread < 1.0 + 1e-6;
    return out;
}

struct hilbert_schmidt_result {
    double value = std::numeric_limits<double>::quiet_NaN();
    bool infinite = false;
    std::vector<double> eps;    // truncation masses tried
    std::vector<double> values; // the norm at each of them
};

// ||k_w|| in L2(pw x pw) on one grid, from the split form
//     ||k_w||^2 = 2 int a(x) int_{y<x} b(y) dy dx,  a = Pbar^2/(pw), b = P^2/(pw),
// which needs no N x N matrix.
inline double hilbert_schmidt_on(const grid_ptr& g)
{
    const quad_grid& q = *g;
    grid_function b{g, std::vector<double>(q.size())};
    for (std::size_t i = 0; i < q.size(); ++i) b.values[i] = std::exp(2.0 * q.log_cdf[i] - q.log_pdf[i] - q.log_w[i]);
    const auto cum = primitive(b);
    double s = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i)
        s += q.weights[i] * std::exp(2.0 * q.log_sf[i] - q.log_pdf[i] - q.log_w[i]) * cum.values[i];
    return std::sqrt(2.0 * s);
}

// Norm evaluated at truncation masses 1e-8 ... 1e-20. Divergence: the last
// increment is more than 0.75 of the previous one and more than 1% of the
// value, i.e. the sequence is not settling geometrically.
inline hilbert_schmidt_result hilbert_schmidt(const density_spec& d, const weight_spec& w, const grid_options& opt = {})
{
    hilbert_schmidt_result out;
    for (double eps : {1e-8, 1e-12, 1e-16, 1e-20}) {
        grid_options o = opt;
        o.eps_trunc = eps;
        out.eps.push_back(eps);
        out.values.push_back(hilbert_schmidt_on(build_grid(d, w, o)));
    }
    const auto& v = out.values;
    const std::size_t n = v.size();
    const double d1 = v[n - 2] - v[n - 3], d2 = v[n - 1] - v[n - 2];
    out.value = v.back();
    out.infinite = !std::isfinite(out.value) || (d2 > 0.75 * d1 && d2 > 0.01 * v.back());
    return out;
}

// Every bound that applies to (d, w); inapplicable ones carry a reason.
inline bound_report all_bounds(const density_spec& d, const weight_spec& w, const grid_options& opt = {})
{
    bound_report rep;
    rep.meta = detail::meta_of(*build_grid(d, w, opt));
    auto attempt = [&](const std::string& name, auto&& fn) {
        try {
            rep.entries.push_back(fn());
        } catch (const error& e) {
            bound_entry b;
            b.name = name;
            b.note = std::string("not available: ") + e.what();
            rep.entries.push_back(b);
        }
    };
    const bool unweighted = w.kind == weight_kind::one;
    attempt("muckenhoupt", [&] {
        if (!unweighted) throw precondition_error("requires w = one");
        return muckenhoupt(d, opt);
    });
    attempt("transport", [&] {
        if (!unweighted) throw precondition_error("requires w = one");
        return transport_bound(d, opt);
    });
    attempt("entropy", [&] { return entropy_bound(d, w, opt); });
    attempt("stein_kernel", [&] { return stein_kernel_bounds(d, w, opt); });
    attempt("hilbert_schmidt", [&] {
        const auto hs = hilbert_schmidt(d, w, opt);
        bound_entry b;
        b.name = "hilbert_schmidt";
        b.upper = hs.infinite ? inf : hs.value;
        b.upper_infinite = hs.infinite;
        if (hs.infinite) b.note = "norm grows under refinement; compactness not certified";
        return b;
    });
    return rep;
}

} // namespace poincare
