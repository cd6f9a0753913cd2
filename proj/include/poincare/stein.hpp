#pragma once

// Covariance kernel K(x,y) = P(x^y) Pbar(x v y), its normalized forms, the
// pseudo-inverse Stein operator and the discretized operator
//     (L f)(x) = 1/(p(x) w(x)) * integral K(x,y) f(y) dy.
//
// The matrix splits the integral at x:
//     L f(x) = [Pbar(x) int_a^x P f + P(x) int_x^b Pbar f] / (p(x) w(x)),
// and integrates each smooth half with the panel integration matrix. A plain
// Nystrom rule would integrate across the kink of K on the diagonal and lose
// its spectral accuracy there. The split matrix is exactly self-adjoint in the
// discrete L2(pw) product because q_i S_ij + q_j S_ji = q_i q_j for
// Gauss-Legendre panels.

#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "density.hpp"
#include "errors.hpp"
#include "grid.hpp"
#include "parallel.hpp"

namespace poincare {

inline void require_inside(const density_spec& d, double x, const char* what)
{
    if (!d.inside(x)) throw domain_error(std::string(what) + ": point outside the open support");
}

inline double kernel_K(const density_spec& d, double x, double y)
{
    require_inside(d, x, "kernel_K");
    require_inside(d, y, "kernel_K");
    return d.cdf(std::min(x, y)) * d.sf(std::max(x, y));
}

inline double kernel_k(const density_spec& d, double x, double y)
{
    require_inside(d, x, "kernel_k");
    require_inside(d, y, "kernel_k");
    const double lo = std::min(x, y), hi = std::max(x, y);
    return std::exp(d.log_cdf(lo) + d.log_sf(hi) - d.log_pdf(lo) - d.log_pdf(hi));
}

inline double kernel_kw(const density_spec& d, const weight_spec& w, double x, double y)
{
    const double lo = std::min(x, y), hi = std::max(x, y);
    return std::exp(std::log(kernel_k(d, lo, hi)) - log_weight(d, w, lo) - log_weight(d, w, hi));
}

inline double stein_kernel(const density_spec& d, double x)
{
    if (!std::isfinite(d.mean())) throw moment_error(d.name + ": first moment is not finite");
    return d.stein_kernel(x);
}

// Pseudo-inverse Stein operator at the nodes: (1/p) * integral of (h - E h) p
// from the left truncation point. Nodes in the upper half use the equal
// right-hand form -(1/p) * integral to the right end, which avoids cancelling
// two nearly equal sums in the upper tail.
inline grid_function tinv(const density_spec&, const grid_function& h)
{
    const auto& q = *h.grid;
    double mass = 0.0, mean = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        mass += q.weights[i] * q.pdf_vals[i];
        mean += q.weights[i] * q.pdf_vals[i] * h.values[i];
    }
    mean /= mass;
    grid_function centered{h.grid, std::vector<double>(q.size())};
    for (std::size_t i = 0; i < q.size(); ++i) centered.values[i] = (h.values[i] - mean) * q.pdf_vals[i];
    const grid_function left = primitive(centered);
    double total = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) total += q.weights[i] * centered.values[i];
    grid_function out{h.grid, std::vector<double>(q.size())};
    for (std::size_t i = 0; i < q.size(); ++i) {
        const double integral = q.cdf_vals[i] <= 0.5 ? left.values[i] : -(total - left.values[i]);
        out.values[i] = integral / q.pdf_vals[i];
    }
    return out;
}

class operator_l {
public:
    operator_l(std::shared_ptr<const density_spec> d, weight_spec w, grid_ptr g)
        : density_(std::move(d)), weight_(w), grid_(std::move(g))
    {
        assemble();
    }

    const quad_grid& grid() const { return *grid_; }
    const grid_ptr& grid_handle() const { return grid_; }
    const density_spec& density() const { return *density_; }
    const weight_spec& weight() const { return weight_; }
    std::size_t size() const { return grid_->size(); }
    double operator()(std::size_t i, std::size_t j) const { return matrix_[i * size() + j]; }
    const std::vector<double>& matrix() const { return matrix_; }

    grid_function apply(const grid_function& f) const
    {
        if (f.grid != grid_) throw contract_error("apply: function lives on a different grid");
        const std::size_t n = size();
        grid_function out{grid_, std::vector<double>(n)};
        for (std::size_t i = 0; i < n; ++i) {
            const double* row = &matrix_[i * n];
            double s = 0.0;
            for (std::size_t j = 0; j < n; ++j) s += row[j] * f.values[j];
            out.values[i] = s;
        }
        return out;
    }

    // Natural (Nystrom) extension of L f to an arbitrary point of the
    // truncated support.
    double apply_at(const grid_function& f, double x) const
    {
        if (f.grid != grid_) throw contract_error("apply_at: function lives on a different grid");
        const auto& q = *grid_;
        const density_spec& d = *density_;
        const std::size_t panel = q.locate(x);
        const auto cum = q.rule->cumulative(q.local(panel, x));
        const std::size_t m = static_cast<std::size_t>(q.pts());
        const std::size_t start = panel * m;
        const double h = q.half_width(panel);
        double left = 0.0, right = 0.0;
        for (std::size_t j = 0; j < start; ++j) left += q.weights[j] * q.cdf_vals[j] * f.values[j];
        for (std::size_t j = 0; j < m; ++j) {
            const std::size_t jj = start + j;
            const double s = h * cum[j];
            left += s * q.cdf_vals[jj] * f.values[jj];
            right += (q.weights[jj] - s) * q.sf_vals[jj] * f.values[jj];
        }
        for (std::size_t j = start + m; j < q.size(); ++j) right += q.weights[j] * q.sf_vals[j] * f.values[j];
        const double base = d.log_pdf(x) + log_weight(d, weight_, x);
        return std::exp(d.log_sf(x) - base) * left + std::exp(d.log_cdf(x) - base) * right;
    }

    // Squared L2(pw) norm of the row k_w(x_i, .) as seen by the quadrature.
    double row_norm2(std::size_t i) const
    {
        const auto& q = *grid_;
        double s = 0.0;
        for (std::size_t j = 0; j < size(); ++j) {
            const double m = matrix_[i * size() + j];
            s += m * m / (q.weights[j] * q.pdf_vals[j] * q.w_vals[j]);
        }
        return s;
    }

private:
    void assemble()
    {
        const auto& q = *grid_;
        const std::size_t n = q.size();
        const std::size_t m = static_cast<std::size_t>(q.pts());
        matrix_.assign(n * n, 0.0);
        parallel_for(n, [&](std::size_t i) {
            const double a = std::exp(q.log_sf[i] - q.log_pdf[i] - q.log_w[i]);
            const double b = std::exp(q.log_cdf[i] - q.log_pdf[i] - q.log_w[i]);
            const std::size_t panel = i / m, local = i % m, start = panel * m;
            const double h = q.half_width(panel);
            double* row = &matrix_[i * n];
            for (std::size_t j = 0; j < start; ++j) row[j] = a * q.weights[j] * q.cdf_vals[j];
            for (std::size_t j = 0; j < m; ++j) {
                const std::size_t jj = start + j;
                const double s = h * q.rule->cum(static_cast<int>(local), static_cast<int>(j));
                row[jj] = a * s * q.cdf_vals[jj] + b * (q.weights[jj] - s) * q.sf_vals[jj];
            }
            for (std::size_t j = start + m; j < n; ++j) row[j] = b * q.weights[j] * q.sf_vals[j];
        });
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (!std::isfinite(matrix_[i * n + j]))
                    throw assembly_error("build_operator: non-finite entry in row " + std::to_string(i)
                                             + " (x = " + std::to_string(q.nodes[i])
                                             + "); increase the truncation mass",
                                         i, q.nodes[i]);
    }

    std::shared_ptr<const density_spec> density_;
    weight_spec weight_;
    grid_ptr grid_;
    std::vector<double> matrix_;
};

inline operator_l build_operator(const density_spec& d, const weight_spec& w, const grid_ptr& g)
{
    if (g->density_name != d.name || g->weight_name != w.describe())
        throw contract_error("build_operator: grid was built for a different density or weight");
    return operator_l(std::make_shared<const density_spec>(d), w, g);
}

inline grid_function apply(const operator_l& op, const grid_function& f) { return op.apply(f); }

// Var_p[If] through the operator: <f, L f>_{pw}.
inline double variance_of_primitive(const operator_l& op, const grid_function& f)
{
    return inner(f, op.apply(f));
}

// Var_p[If] computed directly from the primitive of f; an independent route
// to the same number used to cross-check the operator.
inline double variance_of_primitive_direct(const grid_function& f)
{
    const auto prim = primitive(f);
    const auto& q = *f.grid;
    double mass = 0.0, m1 = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        const double wp = q.weights[i] * q.pdf_vals[i];
        mass += wp;
        m1 += wp * prim.values[i];
        m2 += wp * prim.values[i] * prim.values[i];
    }
    m1 /= mass;
    return m2 / mass - m1 * m1;
}

} // namespace poincare
