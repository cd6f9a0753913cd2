#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "support.hpp"

using namespace poincare;
using poincare::testing::catalog_zoo;
using poincare::testing::one_fn;

namespace {

struct setup {
    density_spec d;
    weight_spec w;
    grid_ptr g;
    operator_l op;

    setup(const density_spec& dd, const weight_spec& ww, const grid_options& o = {})
        : d(dd), w(ww), g(build_grid(dd, ww, o)), op(build_operator(dd, ww, g))
    {
    }
    grid_function ones() const { return sample(g, one_fn); }
};

} // namespace

TEST(nested_intervals, uniform_sixth_interval)
{
    const setup s(catalog("uniform", {}), weight_spec::one());
    const auto tr = nested_intervals(s.op, s.ones(), 6, one_fn);
    EXPECT_GE(tr.steps[6].lo, 0.101317);
    EXPECT_LE(tr.steps[6].hi, 0.101324);
    EXPECT_LE(tr.steps[6].lo, 1.0 / (pi * pi));
    EXPECT_GE(tr.steps[6].hi, 1.0 / (pi * pi));
}

TEST(nested_intervals, uniform_first_interval_is_exact)
{
    // L1 / 1 = x(1 - x)/2 has range ]0, 1/8].
    const setup s(catalog("uniform", {}), weight_spec::one());
    const auto tr = nested_intervals(s.op, s.ones(), 0, one_fn);
    EXPECT_NEAR(tr.steps[0].hi, 0.125, 1e-12);
    EXPECT_LT(tr.steps[0].lo, 1e-3);
}

TEST(nested_intervals, nesting_for_every_density)
{
    for (const auto& [label, d] : catalog_zoo()) {
        const setup s(d, weight_spec::one());
        const auto tr = nested_intervals(s.op, s.ones(), 8, one_fn);
        for (std::size_t n = 1; n < tr.steps.size(); ++n) {
            EXPECT_GE(tr.steps[n].lo, tr.steps[n - 1].lo - 1e-9) << label << " n=" << n;
            EXPECT_LE(tr.steps[n].hi, tr.steps[n - 1].hi + 1e-9) << label << " n=" << n;
        }
    }
}

TEST(nested_intervals, exponential_identity_start_is_uninformative)
{
    const auto tr = nested_intervals(catalog("exponential", {{"theta", 1.0}}), weight_spec::one(),
                                     [](double x) { return x; }, 3);
    for (const auto& s : tr.steps) EXPECT_TRUE(s.hi_infinite) << s.n;
}

TEST(nested_intervals, rejects_non_positive_start)
{
    const setup s(catalog("gaussian", {}), weight_spec::one());
    EXPECT_THROW(nested_intervals(s.op, sample(s.g, [](double x) { return x; }), 3), precondition_error);
}

TEST(power_iterate, uniform_eigenpair)
{
    const setup s(catalog("uniform", {}), weight_spec::one());
    const auto tr = power_iterate(s.op, s.ones(), 200);
    EXPECT_TRUE(tr.converged);
    EXPECT_NEAR(tr.estimate, 1.0 / (pi * pi), 1e-6);
    ASSERT_TRUE(tr.e1.has_value());
    // sin(pi x) has L2 norm 1/sqrt(2).
    double err = 0.0;
    for (std::size_t i = 0; i < s.g->size(); ++i)
        err = std::max(err, std::fabs(tr.e1->values[i] - std::sqrt(2.0) * std::sin(pi * s.g->nodes[i])));
    EXPECT_LT(err, 1e-4);
    EXPECT_NEAR(tr.kappa2, 1.0 / (4.0 * pi * pi), 1e-6);
    // The saturating function is -cos(pi x) up to scale: monotone.
    for (std::size_t i = 1; i < s.g->size(); ++i) EXPECT_GT(tr.saturating->values[i], tr.saturating->values[i - 1]);
}

TEST(power_iterate, eigenvector_has_one_sign)
{
    for (const auto& [label, d] : catalog_zoo()) {
        if (label == "exponential") continue; // not compact: no eigenvector
        const setup s(d, weight_spec::one());
        const auto tr = power_iterate(s.op, s.ones(), 400);
        ASSERT_TRUE(tr.e1.has_value()) << label;
        for (double v : tr.e1->values) EXPECT_GT(v, 0.0) << label;
    }
}

TEST(power_iterate, agrees_with_nested_interval)
{
    for (const auto& [label, d] : catalog_zoo()) {
        if (label == "exponential") continue;
        const setup s(d, weight_spec::one());
        const auto tr = power_iterate(s.op, s.ones(), 400);
        const auto ni = nested_intervals(s.op, s.ones(), 8, one_fn);
        const auto& last = ni.steps.back();
        const double mid = 0.5 * (last.lo + last.hi), half = 0.5 * (last.hi - last.lo);
        EXPECT_LE(std::fabs(tr.estimate - mid), half + 1e-6) << label;
    }
}

TEST(power_iterate, weibull_with_power_weight)
{
    const setup s(catalog("weibull", {{"k", 1.5}, {"lambda", 1.0}}), weight_spec::power(0.5));
    EXPECT_NEAR(power_iterate(s.op, s.ones(), 400).estimate, 4.0 / 9.0, 1e-3);
}

TEST(ratio_at, uniform_matches_euler_polynomial_ratios)
{
    const setup s(catalog("uniform", {}), weight_spec::one());
    const auto seq = ratio_at(s.op, s.ones(), 0.5, 8);
    // The node nearest 0.5 is used; evaluate the exact ratio there.
    for (int n = 0; n < 8; ++n) {
        const double exact = iterate_closed_form("uniform1", n + 1, seq.probe_x) / iterate_closed_form("uniform1", n, seq.probe_x);
        EXPECT_NEAR(seq.values[n], exact, 1e-9) << n;
        if (n > 0) EXPECT_LE(seq.values[n], seq.values[n - 1] + 1e-12);
    }
    EXPECT_NEAR(seq.values.back(), 1.0 / (pi * pi), 1e-6);
}

TEST(ratio_at, weighted_gaussian_sequence)
{
    const setup s(catalog("gaussian", {}), weight_spec::rational(0.1));
    const auto seq = ratio_at(s.op, s.ones(), 0.0, 4);
    EXPECT_NEAR(seq.values[0], 1.0, 1e-6); // L1 = 1/w at the origin
    EXPECT_NEAR(seq.values[1], 1.06667, 5e-3);
    EXPECT_NEAR(seq.values[2], 1.0925, 5e-3);
    EXPECT_NEAR(seq.values[3], 1.10507, 5e-3);
    EXPECT_NEAR(rayleigh(s.op, s.ones(), 12), 10.0 / 9.0, 1e-3);
}

TEST(ratio_at, probe_outside_support)
{
    const setup s(catalog("uniform", {}), weight_spec::one());
    EXPECT_THROW(ratio_at(s.op, s.ones(), 2.0, 3), domain_error);
}

TEST(rayleigh, uniform_and_beta)
{
    const setup u(catalog("uniform", {}), weight_spec::one());
    EXPECT_NEAR(rayleigh(u.op, u.ones(), 0), 1.0 / 12.0, 1e-12);
    EXPECT_NEAR(rayleigh(u.op, u.ones(), 6), 1.0 / (pi * pi), 1e-6);
    double prev = 0.0;
    for (int n = 0; n < 8; ++n) {
        const double r = rayleigh(u.op, u.ones(), n);
        EXPECT_GE(r, prev - 1e-9);
        prev = r;
    }
    const setup b(catalog("beta", {{"alpha", 2.0}, {"beta", 2.0}}), weight_spec::one());
    EXPECT_NEAR(rayleigh(b.op, b.ones(), 8), 0.05408, 2e-4);
}

TEST(mc_estimate, reference_points)
{
    const auto e = mc_estimate(catalog("exponential", {{"theta", 1.0}}), weight_spec::one(), one_fn, 1.0, 1, 100000, 7);
    EXPECT_NEAR(e.estimate, 1.0, 3.0 * e.stderr_);
    const auto u = mc_estimate(catalog("uniform", {}), weight_spec::one(), one_fn, 0.5, 2, 100000, 7);
    EXPECT_NEAR(u.estimate, (0.5 - 2.0 * 0.125 + 0.0625) / 24.0, 3.0 * u.stderr_);
    const auto z = mc_estimate(catalog("gaussian", {}), weight_spec::one(), [](double x) { return x * x; }, 0.7, 0, 1, 1);
    EXPECT_EQ(z.estimate, 0.7 * 0.7);
    EXPECT_EQ(z.stderr_, 0.0);
}

TEST(mc_estimate, reproducible_and_seed_dependent)
{
    const auto d = catalog("uniform", {});
    const auto a = mc_estimate(d, weight_spec::one(), one_fn, 0.5, 2, 5000, 42);
    const auto b = mc_estimate(d, weight_spec::one(), one_fn, 0.5, 2, 5000, 42);
    const auto c = mc_estimate(d, weight_spec::one(), one_fn, 0.5, 2, 5000, 43);
    EXPECT_EQ(a.estimate, b.estimate);
    EXPECT_EQ(a.stderr_, b.stderr_);
    EXPECT_NE(a.estimate, c.estimate);
}

TEST(mc_estimate, weighted_gaussian_matches_operator)
{
    const setup s(catalog("gaussian", {}), weight_spec::rational(0.1));
    const double grid_value = s.op.apply_at(s.ones(), 0.0);
    const auto r = mc_estimate(s.d, s.w, one_fn, 0.0, 1, 200000, 3);
    EXPECT_NEAR(r.estimate, grid_value, 4.0 * r.stderr_);
}

TEST(mc_estimate, preconditions)
{
    const auto d = catalog("uniform", {});
    EXPECT_THROW(mc_estimate(d, weight_spec::one(), one_fn, 0.5, 1, 10, 1), precondition_error);
    EXPECT_THROW(mc_estimate(d, weight_spec::one(), one_fn, 1.5, 1, 2000, 1), domain_error);
}

TEST(laguerre, conjectured_eigenpairs)
{
    grid_options o;
    o.n_panels = 128;
    o.pts_per_panel = 16;
    o.eps_trunc = 1e-16;
    const auto checks = laguerre_conjecture_check(1.5, 1.0, 3, o);
    ASSERT_EQ(checks.size(), 3u);
    for (const auto& c : checks) EXPECT_LT(c.rel_residual, 1e-5) << c.index;
    EXPECT_NEAR(laguerre1(2, 0.5), 0.5 * 0.25 - 3.0 * 0.5 + 3.0, 1e-15);
}
