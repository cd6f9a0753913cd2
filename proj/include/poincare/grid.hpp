#pragma once

// The shared discretization: composite Gauss-Legendre panels whose edges are
// equispaced in probability mass, plus log-mass graded panels in each
// unbounded tail down to the truncation mass.

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "density.hpp"
#include "errors.hpp"
#include "quadrature.hpp"

namespace poincare {

struct grid_options {
    int n_panels = 64;
    int pts_per_panel = 8;
    double eps_trunc = 1e-10;
    // Width, in natural-log units of tail mass, of the graded tail panels.
    double tail_step = 1.0;
};

struct quad_grid {
    std::vector<double> nodes;
    std::vector<double> weights;
    std::vector<double> log_pdf, log_cdf, log_sf, log_w;
    std::vector<double> pdf_vals, cdf_vals, sf_vals, w_vals;
    std::vector<double> edges; // panel boundaries
    double trunc_lo = 0.0;
    double trunc_hi = 0.0;
    grid_options options;
    std::shared_ptr<const panel_rule> rule;
    std::string density_name;
    std::string weight_name;

    std::size_t size() const { return nodes.size(); }
    std::size_t panels() const { return edges.size() - 1; }
    int pts() const { return rule->size(); }
    std::size_t panel_of_node(std::size_t i) const { return i / static_cast<std::size_t>(pts()); }
    double half_width(std::size_t panel) const { return 0.5 * (edges[panel + 1] - edges[panel]); }

    // Panel containing x (clamped to the truncated range).
    std::size_t locate(double x) const
    {
        auto it = std::upper_bound(edges.begin(), edges.end(), x);
        std::size_t k = it == edges.begin() ? 0 : static_cast<std::size_t>(it - edges.begin()) - 1;
        return std::min(k, panels() - 1);
    }
    // Local coordinate of x in its panel, in [-1,1].
    double local(std::size_t panel, double x) const
    {
        const double c = 0.5 * (edges[panel] + edges[panel + 1]);
        return std::clamp((x - c) / half_width(panel), -1.0, 1.0);
    }
    std::size_t nearest_node(double x) const
    {
        auto it = std::lower_bound(nodes.begin(), nodes.end(), x);
        if (it == nodes.begin()) return 0;
        if (it == nodes.end()) return nodes.size() - 1;
        const std::size_t i = static_cast<std::size_t>(it - nodes.begin());
        return (x - nodes[i - 1] <= nodes[i] - x) ? i - 1 : i;
    }
};

using grid_ptr = std::shared_ptr<const quad_grid>;

inline grid_ptr build_grid(const density_spec& d, const weight_spec& w, const grid_options& opt = {})
{
    if (opt.n_panels < 4) throw parameter_error("build_grid: need at least 4 panels");
    if (opt.pts_per_panel < 4 || opt.pts_per_panel > 16)
        throw parameter_error("build_grid: points per panel must lie in 4..16");
    if (!(opt.eps_trunc > 0.0 && opt.eps_trunc <= 1e-6))
        throw parameter_error("build_grid: truncation mass must lie in ]0, 1e-6]");
    if (!(opt.tail_step > 0.0)) throw parameter_error("build_grid: tail step must be positive");
    validate_weight(d, w);

    auto g = std::make_shared<quad_grid>();
    g->options = opt;
    g->rule = std::make_shared<panel_rule>(opt.pts_per_panel);
    g->density_name = d.name;
    g->weight_name = w.describe();

    const int n = opt.n_panels;
    const double l_tail = std::log(0.5 * opt.eps_trunc);
    const double l_body = -std::log(static_cast<double>(n));
    auto tail_marks = [&]() {
        std::vector<double> marks;
        if (l_tail >= l_body) return marks;
        const int k = static_cast<int>(std::ceil((l_body - l_tail) / opt.tail_step));
        for (int i = 0; i < k; ++i) marks.push_back(l_tail + (l_body - l_tail) * i / k);
        return marks;
    };
    // A bounded side is graded too unless the density is flat next to it:
    // vanishing or singular endpoint behaviour (beta, gamma, Weibull) would
    // otherwise sit inside one wide panel.
    auto flat_near = [&](bool lower) {
        const double x2 = lower ? d.quantile_log_lower(l_body) : d.quantile_log_upper(l_body);
        double x1 = lower ? d.quantile_log_lower(l_tail) : d.quantile_log_upper(l_tail);
        if (!d.inside(x1)) x1 = std::nextafter(lower ? d.support_lo : d.support_hi, x2);
        const double a = d.log_pdf(x1), b = d.log_pdf(x2);
        return std::fabs(a - b) <= 1e-12 * (1.0 + std::fabs(b));
    };
    std::vector<double> edges;
    try {
        if (d.bounded_below()) {
            edges.push_back(d.support_lo);
            if (!flat_near(true))
                for (double l : tail_marks()) edges.push_back(d.quantile_log_lower(l));
        } else {
            for (double l : tail_marks()) edges.push_back(d.quantile_log_lower(l));
        }
        for (int j = 1; j < n; ++j) {
            const double u = static_cast<double>(j) / n;
            edges.push_back(d.quantile(u));
        }
        if (!d.bounded_above() || !flat_near(false)) {
            auto marks = tail_marks();
            for (auto it = marks.rbegin(); it != marks.rend(); ++it) edges.push_back(d.quantile_log_upper(*it));
        }
        if (d.bounded_above()) edges.push_back(d.support_hi);
    } catch (const error& e) {
        throw construction_error(std::string("build_grid: quantile evaluation failed: ") + e.what());
    }
    for (std::size_t i = 0; i + 1 < edges.size(); ++i)
        if (!(edges[i + 1] > edges[i]) || !std::isfinite(edges[i]) || !std::isfinite(edges[i + 1]))
            throw construction_error("build_grid: panel edges are not strictly increasing (mass too small to resolve)");
    g->edges = edges;
    g->trunc_lo = edges.front();
    g->trunc_hi = edges.back();

    const auto& t = g->rule->nodes();
    const auto& wt = g->rule->weights();
    const std::size_t total = (edges.size() - 1) * t.size();
    g->nodes.reserve(total);
    g->weights.reserve(total);
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
        const double c = 0.5 * (edges[p] + edges[p + 1]);
        const double h = 0.5 * (edges[p + 1] - edges[p]);
        for (std::size_t i = 0; i < t.size(); ++i) {
            g->nodes.push_back(c + h * t[i]);
            g->weights.push_back(h * wt[i]);
        }
    }
    for (std::size_t i = 0; i + 1 < g->nodes.size(); ++i)
        if (!(g->nodes[i + 1] > g->nodes[i]))
            throw construction_error("build_grid: nodes collapsed; panels narrower than double resolution");
    const std::size_t m = g->nodes.size();
    g->log_pdf.resize(m);
    g->log_cdf.resize(m);
    g->log_sf.resize(m);
    g->log_w.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double x = g->nodes[i];
        if (!d.inside(x)) throw construction_error("build_grid: node outside the open support");
        g->log_pdf[i] = d.log_pdf(x);
        g->log_cdf[i] = d.log_cdf(x);
        g->log_sf[i] = d.log_sf(x);
        g->log_w[i] = log_weight(d, w, x);
        if (!std::isfinite(g->log_pdf[i]) || !std::isfinite(g->log_cdf[i]) || !std::isfinite(g->log_sf[i])
            || !std::isfinite(g->log_w[i]))
            throw construction_error("build_grid: non-finite density or weight at node x = " + std::to_string(x));
    }
    auto expv = [](const std::vector<double>& v) {
        std::vector<double> out(v.size());
        std::transform(v.begin(), v.end(), out.begin(), [](double a) { return std::exp(a); });
        return out;
    };
    g->pdf_vals = expv(g->log_pdf);
    g->cdf_vals = expv(g->log_cdf);
    g->sf_vals = expv(g->log_sf);
    g->w_vals = expv(g->log_w);
    return g;
}

// A function carried by its values at the grid nodes.
struct grid_function {
    grid_ptr grid;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    double operator[](std::size_t i) const { return values[i]; }
};

template <class F>
grid_function sample(const grid_ptr& g, F&& f)
{
    grid_function out{g, std::vector<double>(g->size())};
    for (std::size_t i = 0; i < g->size(); ++i) out.values[i] = f(g->nodes[i]);
    return out;
}

inline void require_same_grid(const grid_function& f, const grid_function& g)
{
    if (f.grid != g.grid) throw contract_error("grid functions live on different grids");
    if (f.values.size() != f.grid->size() || g.values.size() != g.grid->size())
        throw contract_error("grid function length does not match its grid");
}

// Discrete inner product in L2(p w).
inline double inner(const grid_function& f, const grid_function& g)
{
    require_same_grid(f, g);
    const auto& q = *f.grid;
    double s = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) s += f.values[i] * g.values[i] * q.pdf_vals[i] * q.w_vals[i] * q.weights[i];
    return s;
}

inline double norm(const grid_function& f) { return std::sqrt(inner(f, f)); }

// Integral of f p over the truncated support (p-mean of f, up to the lost mass).
inline double p_integral(const grid_function& f)
{
    const auto& q = *f.grid;
    double s = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) s += f.values[i] * q.pdf_vals[i] * q.weights[i];
    return s;
}

// Polynomial interpolation of f inside the panel containing x.
inline double interpolate(const grid_function& f, double x)
{
    const auto& q = *f.grid;
    const std::size_t p = q.locate(x);
    const auto basis = q.rule->lagrange(q.local(p, x));
    const std::size_t off = p * static_cast<std::size_t>(q.pts());
    double s = 0.0;
    for (std::size_t j = 0; j < basis.size(); ++j) s += basis[j] * f.values[off + j];
    return s;
}

// Primitive x -> integral of f from trunc_lo to x, at the nodes, using the
// panel integration matrix (spectrally accurate for smooth f).
inline grid_function primitive(const grid_function& f)
{
    const auto& q = *f.grid;
    const int m = q.pts();
    grid_function out{f.grid, std::vector<double>(q.size())};
    double before = 0.0;
    for (std::size_t p = 0; p < q.panels(); ++p) {
        const double h = q.half_width(p);
        const std::size_t off = p * static_cast<std::size_t>(m);
        for (int i = 0; i < m; ++i) {
            double s = 0.0;
            for (int j = 0; j < m; ++j) s += q.rule->cum(i, j) * f.values[off + j];
            out.values[off + i] = before + h * s;
        }
        for (int j = 0; j < m; ++j) before += q.weights[off + j] * f.values[off + j];
    }
    return out;
}

} // namespace poincare
