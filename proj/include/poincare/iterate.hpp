#pragma once

// Iterative estimators of C(p,w) built on the discretized operator L:
// nested intervals [inf, sup] of L^{n+1}g0 / L^n g0, power iteration to the
// top eigenfunction, pointwise ratio sequences, Rayleigh quotients and a
// Monte-Carlo estimator of L^n g0 at a point.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "density.hpp"
#include "errors.hpp"
#include "grid.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"
#include "stein.hpp"

namespace poincare {

struct iteration_step {
    int n = 0;
    // Range of L^{n+1}g0 / L^n g0 over the truncated support.
    double lo = std::numeric_limits<double>::quiet_NaN();
    double hi = std::numeric_limits<double>::quiet_NaN();
    double lo_at = std::numeric_limits<double>::quiet_NaN();
    double hi_at = std::numeric_limits<double>::quiet_NaN();
    bool lo_at_edge = false; // extremum in the outermost panel of an unbounded side
    bool hi_at_edge = false;
    bool hi_infinite = false;  // hi keeps growing when the truncation is tightened
    bool lo_vanishing = false; // lo keeps shrinking when the truncation is tightened
    double ratio_at_probe = std::numeric_limits<double>::quiet_NaN();
    double rayleigh = std::numeric_limits<double>::quiet_NaN();
    double residual = std::numeric_limits<double>::quiet_NaN();
};

struct iteration_trace {
    std::vector<iteration_step> steps;
    double estimate = std::numeric_limits<double>::quiet_NaN();
    std::optional<grid_function> e1;         // unit L2(pw) norm, positive
    std::optional<grid_function> saturating; // p-centred primitive of e1
    bool converged = false;
    double kappa2 = std::numeric_limits<double>::quiet_NaN(); // deflated second eigenvalue
    double probe_x = std::numeric_limits<double>::quiet_NaN();
    std::string warning;
};

namespace detail {

inline void require_positive_start(const grid_function& g0)
{
    for (std::size_t i = 0; i < g0.size(); ++i)
        if (!(g0.values[i] > 0.0))
            throw precondition_error("g0 must be positive at every grid node (node " + std::to_string(i) + ")");
}

inline grid_function scaled(const grid_function& f, double s)
{
    grid_function out = f;
    for (double& v : out.values) v *= s;
    return out;
}

// Drives g_{n+1} = L g_n / |L g_n| and fills one step per iteration. The
// ratio between nodes uses the Nystrom extension of both iterates; for n = 0
// the start function is interpolated unless a callable is given.
class iteration_driver {
public:
    iteration_driver(const operator_l& op, const grid_function& g0, std::function<double(double)> g0_fn)
        : op_(op), g0_fn_(std::move(g0_fn)), g_(g0)
    {
        if (g0.grid != op.grid_handle()) throw contract_error("g0 lives on a different grid than the operator");
        require_positive_start(g0);
        const double nrm = norm(g_);
        g_ = scaled(g_, 1.0 / nrm);
    }

    const grid_function& current() const { return g_; }
    const grid_function& image() const { return lg_; }

    // Applies the operator to the current iterate; returns the step record
    // (ratios, Rayleigh quotient, residual) and, if polish is set, the
    // polished range of the ratio.
    iteration_step step(int n, std::size_t probe, bool polish)
    {
        const auto& q = op_.grid();
        lg_ = op_.apply(g_);
        iteration_step s;
        s.n = n;
        const std::size_t N = q.size();
        std::size_t imin = 0, imax = 0;
        std::vector<double> r(N);
        for (std::size_t i = 0; i < N; ++i) {
            r[i] = lg_.values[i] / g_.values[i];
            if (r[i] < r[imin]) imin = i;
            if (r[i] > r[imax]) imax = i;
        }
        s.lo = r[imin];
        s.hi = r[imax];
        s.lo_at = q.nodes[imin];
        s.hi_at = q.nodes[imax];
        const auto& d = op_.density();
        auto on_edge = [&](std::size_t i) {
            const std::size_t panel = q.panel_of_node(i);
            return (panel == 0 && !d.bounded_below()) || (panel + 1 == q.panels() && !d.bounded_above());
        };
        s.lo_at_edge = on_edge(imin);
        s.hi_at_edge = on_edge(imax);
        if (polish) {
            auto ratio = [&](double x) {
                const double num = op_.apply_at(g_, x);
                double den;
                if (n == 0) den = g0_fn_ ? g0_fn_(x) / g0_scale_ : interpolate(g_, x);
                else den = op_.apply_at(prev_, x) / prev_norm_;
                return num / den;
            };
            auto refine = [&](std::size_t i, bool maximize, double& value, double& at) {
                if (i == 0 || i + 1 >= N) return;
                const extremum e = golden_section(ratio, q.nodes[i - 1], q.nodes[i + 1], maximize, 1e-10);
                if (std::isfinite(e.value) && (maximize ? e.value > value : e.value < value)) {
                    value = e.value;
                    at = e.x;
                }
            };
            refine(imin, false, s.lo, s.lo_at);
            refine(imax, true, s.hi, s.hi_at);
        }
        s.ratio_at_probe = r[probe];
        const double gg = inner(g_, g_);
        s.rayleigh = inner(g_, lg_) / gg;
        double res = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double e = lg_.values[i] - s.rayleigh * g_.values[i];
            res += e * e * q.pdf_vals[i] * q.w_vals[i] * q.weights[i];
        }
        s.residual = std::sqrt(res / gg);
        return s;
    }

    // Moves to the normalized image.
    void advance()
    {
        if (g0_scale_ == 0.0) g0_scale_ = 1.0;
        prev_ = g_;
        prev_norm_ = norm(lg_);
        if (!(prev_norm_ > 0.0) || !std::isfinite(prev_norm_))
            throw range_error("iteration: the iterate vanished or overflowed");
        g_ = scaled(lg_, 1.0 / prev_norm_);
    }

    void set_start_scale(double s) { g0_scale_ = s; }

private:
    const operator_l& op_;
    std::function<double(double)> g0_fn_;
    grid_function g_;
    grid_function lg_;
    grid_function prev_;
    double prev_norm_ = 1.0;
    double g0_scale_ = 0.0;
};

inline std::size_t median_node(const quad_grid& q)
{
    std::size_t best = 0;
    for (std::size_t i = 0; i < q.size(); ++i)
        if (std::fabs(q.cdf_vals[i] - 0.5) < std::fabs(q.cdf_vals[best] - 0.5)) best = i;
    return best;
}

} // namespace detail

// Nested intervals I_0 ... I_{n_max}. Steps whose extremum sits in the
// outermost panel of an unbounded side are marked; the density-level overload
// below decides whether such an endpoint diverges.
inline iteration_trace nested_intervals(const operator_l& op, const grid_function& g0, int n_max,
                                        std::function<double(double)> g0_fn = {})
{
    if (n_max < 0) throw parameter_error("nested_intervals: n_max must be non-negative");
    detail::iteration_driver it(op, g0, g0_fn);
    if (g0_fn) it.set_start_scale(norm(g0));
    const std::size_t probe = detail::median_node(op.grid());
    iteration_trace tr;
    tr.probe_x = op.grid().nodes[probe];
    for (int n = 0; n <= n_max; ++n) {
        tr.steps.push_back(it.step(n, probe, true));
        it.advance();
    }
    tr.estimate = tr.steps.back().rayleigh;
    return tr;
}

// Same, starting from a function of x, with a divergence check: endpoints
// that sit on an unbounded edge are recomputed with the truncation mass
// tightened 1e4-fold; an upper endpoint that grows by more than 1% is flagged
// infinite, a lower one that shrinks by more than 1% is flagged vanishing.
inline iteration_trace nested_intervals(const density_spec& d, const weight_spec& w,
                                        const std::function<double(double)>& g0, int n_max,
                                        const grid_options& opt = {})
{
    const auto g = build_grid(d, w, opt);
    const auto op = build_operator(d, w, g);
    auto tr = nested_intervals(op, sample(g, g0), n_max, g0);
    bool edge = false;
    for (const auto& s : tr.steps) edge = edge || s.hi_at_edge || s.lo_at_edge;
    if (!edge) return tr;
    grid_options tight = opt;
    tight.eps_trunc = opt.eps_trunc * 1e-4;
    const auto g2 = build_grid(d, w, tight);
    const auto op2 = build_operator(d, w, g2);
    const auto tr2 = nested_intervals(op2, sample(g2, g0), n_max, g0);
    for (std::size_t i = 0; i < tr.steps.size(); ++i) {
        auto& s = tr.steps[i];
        const auto& t = tr2.steps[i];
        if (s.hi_at_edge && t.hi > 1.01 * s.hi) s.hi_infinite = true;
        if (s.lo_at_edge && t.lo < 0.99 * s.lo) s.lo_vanishing = true;
    }
    return tr;
}

// Power iteration with per-step normalization; stops when the residual
// |L g - rho g| / |g| drops below stop_tol.
inline iteration_trace power_iterate(const operator_l& op, const grid_function& g0, int n_max, double stop_tol = 1e-10)
{
    if (n_max < 1) throw parameter_error("power_iterate: n_max must be at least 1");
    if (!(stop_tol > 0.0)) throw parameter_error("power_iterate: stop tolerance must be positive");
    detail::iteration_driver it(op, g0, {});
    const std::size_t probe = detail::median_node(op.grid());
    iteration_trace tr;
    tr.probe_x = op.grid().nodes[probe];
    for (int n = 0; n < n_max; ++n) {
        tr.steps.push_back(it.step(n, probe, false));
        tr.estimate = tr.steps.back().rayleigh;
        if (tr.steps.back().residual < stop_tol) {
            tr.converged = true;
            break;
        }
        it.advance();
    }
    if (!tr.converged) tr.warning = "residual did not reach the stop tolerance; last interval reported";

    const auto& q = op.grid();
    grid_function e = it.current();
    double sum = 0.0;
    for (double v : e.values) sum += v;
    if (sum < 0.0) e = detail::scaled(e, -1.0);
    e = detail::scaled(e, 1.0 / norm(e));
    tr.e1 = e;
    auto prim = primitive(e);
    const double mean = p_integral(prim) / p_integral(sample(e.grid, [](double) { return 1.0; }));
    for (double& v : prim.values) v -= mean;
    tr.saturating = prim;

    // Second eigenvalue by deflation, started from P - 1/2 (orthogonal to
    // constants in L2(p) and sign-changing, like e2).
    grid_function v{e.grid, std::vector<double>(q.size())};
    for (std::size_t i = 0; i < q.size(); ++i) v.values[i] = q.cdf_vals[i] - 0.5;
    auto deflate = [&](grid_function& f) {
        const double c = inner(f, e);
        for (std::size_t i = 0; i < q.size(); ++i) f.values[i] -= c * e.values[i];
        const double nf = norm(f);
        if (nf > 0.0) f = detail::scaled(f, 1.0 / nf);
    };
    deflate(v);
    double kappa = 0.0;
    for (int k = 0; k < 500; ++k) {
        grid_function lv = op.apply(v);
        const double next = inner(v, lv);
        deflate(lv);
        v = lv;
        if (std::fabs(next - kappa) <= 1e-12 * std::fabs(next)) {
            kappa = next;
            break;
        }
        kappa = next;
    }
    tr.kappa2 = kappa;
    return tr;
}

struct ratio_sequence {
    double probe_x = std::numeric_limits<double>::quiet_NaN(); // grid node actually used
    std::vector<double> values; // (L^{n+1}g0 / L^n g0)(probe), n = 0, 1, ...
    double row_norm = std::numeric_limits<double>::quiet_NaN();
    std::string warning;
};

// Ratios at the grid node nearest probe_x. The hypothesis k_w(x,.) in
// L2(pw) is checked through the discrete row norm at that node.
inline ratio_sequence ratio_at(const operator_l& op, const grid_function& g0, double probe_x, int n_max)
{
    const auto& q = op.grid();
    if (!(probe_x >= q.trunc_lo && probe_x <= q.trunc_hi))
        throw domain_error("ratio_at: probe outside the truncated support");
    if (n_max < 1) throw parameter_error("ratio_at: n_max must be at least 1");
    ratio_sequence out;
    const std::size_t node = q.nearest_node(probe_x);
    out.probe_x = q.nodes[node];
    out.row_norm = std::sqrt(op.row_norm2(node));
    if (!std::isfinite(out.row_norm)) out.warning = "row norm of k_w at the probe is not finite; the limit may fail";
    detail::iteration_driver it(op, g0, {});
    for (int n = 0; n < n_max; ++n) {
        out.values.push_back(it.step(n, node, false).ratio_at_probe);
        it.advance();
    }
    return out;
}

// <g_n, L g_n> / |g_n|^2 after n normalized iterations.
inline double rayleigh(const operator_l& op, const grid_function& g0, int n)
{
    if (n < 0) throw parameter_error("rayleigh: n must be non-negative");
    detail::iteration_driver it(op, g0, {});
    for (int k = 0; k < n; ++k) {
        it.step(k, 0, false);
        it.advance();
    }
    const auto& g = it.current();
    return variance_of_primitive(op, g) / inner(g, g);
}

struct mc_result {
    double estimate = 0.0;
    double stderr_ = 0.0;
    double normalization = 1.0; // integral of p w used for the chains
    std::size_t samples = 0;
};

// Chains are grouped in fixed blocks of mc_block; each block owns one
// generator, so results do not depend on the number of threads.
inline constexpr std::size_t mc_block = 64;

// L^n g0 at x as E[k_w(x,X1) k_w(X1,X2) ... k_w(X_{n-1},Xn) g0(Xn)] * Z^n with
// X_i iid from p w / Z. Block b of chains draws from mt19937_64 seeded with
// seed_seq{seed lo/hi 32 bits, b lo/hi 32 bits}, chains in order, depth
// draws per chain; uniforms are ((u >> 11) + 0.5) * 2^-53. For w = one the draws use the quantile of p;
// otherwise they sample the grid's discrete measure q_i p_i w_i, whose mass
// is the Z used.
inline mc_result mc_estimate(const density_spec& d, const weight_spec& w, const std::function<double(double)>& g0,
                             double probe_x, int depth, std::size_t samples, std::uint64_t seed,
                             const grid_options& opt = {})
{
    if (!d.inside(probe_x)) throw domain_error("mc_estimate: probe outside the support");
    if (depth < 0) throw parameter_error("mc_estimate: depth must be non-negative");
    mc_result out;
    out.samples = samples;
    if (depth == 0) {
        out.estimate = g0(probe_x);
        return out;
    }
    if (samples < 1000) throw precondition_error("mc_estimate: need at least 1000 samples");
    const bool plain = w.kind == weight_kind::one;
    grid_ptr g;
    std::vector<double> cum;
    if (!plain) {
        double lz;
        try {
            lz = log_integral([&](double t) { return d.inside(t) ? d.log_pdf(t) + log_weight(d, w, t) : -inf; },
                              d.support_lo, d.support_hi, 1e-8);
        } catch (const error&) {
            lz = inf;
        }
        if (!std::isfinite(lz)) throw normalization_error("mc_estimate: p w is not integrable");
        g = build_grid(d, w, opt);
        cum.resize(g->size());
        double s = 0.0;
        for (std::size_t i = 0; i < g->size(); ++i) {
            s += g->weights[i] * g->pdf_vals[i] * g->w_vals[i];
            cum[i] = s;
        }
        out.normalization = s;
    }
    auto draw = [&](double u) {
        if (plain) return d.quantile(u);
        const double target = u * cum.back();
        const auto it = std::lower_bound(cum.begin(), cum.end(), target);
        return g->nodes[std::min<std::size_t>(static_cast<std::size_t>(it - cum.begin()), cum.size() - 1)];
    };
    const double zn = std::pow(out.normalization, depth);
    std::vector<double> vals(samples);
    const std::size_t blocks = (samples + mc_block - 1) / mc_block;
    parallel_for(blocks, [&](std::size_t b) {
        const std::uint64_t id = b;
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(id), static_cast<std::uint32_t>(id >> 32)};
        std::mt19937_64 rng(seq);
        for (std::size_t c = b * mc_block; c < std::min(samples, (b + 1) * mc_block); ++c) {
            double x = probe_x, prod = 1.0;
            for (int j = 0; j < depth; ++j) {
                const double u = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
                const double y = draw(u);
                prod *= kernel_kw(d, w, x, y);
                x = y;
            }
            vals[c] = prod * g0(x) * zn;
        }
    });
    double mean = 0.0;
    for (double v : vals) mean += v;
    mean /= static_cast<double>(samples);
    double var = 0.0;
    for (double v : vals) var += (v - mean) * (v - mean);
    var /= static_cast<double>(samples - 1);
    out.estimate = mean;
    out.stderr_ = std::sqrt(var / static_cast<double>(samples));
    return out;
}

// Generalized Laguerre polynomial L_m^{(1)}(t).
inline double laguerre1(int m, double t)
{
    if (m == 0) return 1.0;
    double a = 1.0, b = 2.0 - t; // L_0, L_1
    for (int j = 1; j < m; ++j) {
        const double c = ((2.0 * j + 2.0 - t) * b - (j + 1.0) * a) / (j + 1.0);
        a = b;
        b = c;
    }
    return b;
}

struct laguerre_check {
    int index = 0;
    double eigenvalue = 0.0;    // lambda^k / (k^2 i)
    double rel_residual = 0.0;  // |L e_i - eigenvalue e_i| / |eigenvalue e_i| in L2(pw)
};

// Conjectured eigenpairs of the Weibull(k, lambda) operator with weight
// x^{2-k}: e_i(x) = x^{k-1} L^{(1)}_{i-1}(x^k / lambda^k) with eigenvalue
// lambda^k / (k^2 i). Checked on the discretized operator.
inline std::vector<laguerre_check> laguerre_conjecture_check(double k, double lambda, int count,
                                                             const grid_options& opt)
{
    const auto d = catalog("weibull", {{"k", k}, {"lambda", lambda}});
    const auto w = weight_spec::power(2.0 - k);
    const auto g = build_grid(d, w, opt);
    const auto op = build_operator(d, w, g);
    std::vector<laguerre_check> out;
    for (int i = 1; i <= count; ++i) {
        const auto e = sample(g, [&](double x) {
            return std::pow(x, k - 1.0) * laguerre1(i - 1, std::pow(x / lambda, k));
        });
        const auto le = op.apply(e);
        laguerre_check c;
        c.index = i;
        c.eigenvalue = std::pow(lambda, k) / (k * k * i);
        grid_function diff = le;
        for (std::size_t j = 0; j < diff.size(); ++j) diff.values[j] -= c.eigenvalue * e.values[j];
        c.rel_residual = norm(diff) / (c.eigenvalue * norm(e));
        out.push_back(c);
    }
    return out;
}

} // namespace poincare
