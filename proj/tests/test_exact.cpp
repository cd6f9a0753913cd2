#include <cmath>

#include <boost/math/special_functions/bessel.hpp>
#include <gtest/gtest.h>

#include "support.hpp"

using namespace poincare;
using poincare::testing::one_fn;

namespace {

void expect_monotone(const exact_answer& a, double lo, double hi)
{
    ASSERT_TRUE(static_cast<bool>(a.saturating_fn));
    double prev = a.saturating_fn(lo + (hi - lo) / 101.0);
    const bool up = a.saturating_fn(lo + (hi - lo) * 2.0 / 101.0) > prev;
    for (int i = 2; i <= 100; ++i) {
        const double v = a.saturating_fn(lo + (hi - lo) * i / 101.0);
        EXPECT_TRUE(up ? v > prev : v < prev) << a.saturating << " i=" << i;
        prev = v;
    }
}

double power_estimate(const density_spec& d, const weight_spec& w, const grid_options& o = {})
{
    const auto g = build_grid(d, w, o);
    return power_iterate(build_operator(d, w, g), sample(g, one_fn), 1000).estimate;
}

} // namespace

TEST(exact_constant, covered_cases)
{
    EXPECT_NEAR(exact_constant("uniform", {}, weight_spec::one()).constant, 1.0 / (pi * pi), 1e-15);
    const auto ga = exact_constant("gamma", {{"k", 2.0}, {"theta", 1.0}}, weight_spec::one());
    EXPECT_NEAR(ga.constant, 4.5, 1e-15);
    EXPECT_NEAR(ga.saturating_fn(1.0), -2.0 * std::exp(1.0 / 3.0), 1e-14);
    const auto b = exact_constant("beta", {{"alpha", 1.0}, {"beta", 1.0}}, weight_spec::one());
    EXPECT_NEAR(beta_alpha1_root(1.0), pi / 2.0, 1e-13);
    EXPECT_NEAR(b.constant, 1.0 / (pi * pi), 1e-13);
    const auto w = exact_constant("weibull", {{"k", 2.0}, {"lambda", 1.0}}, weight_spec::power(0.0));
    EXPECT_NEAR(w.constant, 0.25, 1e-15);
    EXPECT_EQ(w.saturating, "x^2 - 1");
    EXPECT_NEAR(exact_constant("gaussian", {}, weight_spec::rational(0.1)).constant, 1.0 / 0.9, 1e-15);
    EXPECT_NEAR(exact_constant("gaussian", {}, weight_spec::rational(1.0)).constant, 4.0, 1e-15);
    EXPECT_NEAR(exact_constant("exponential", {{"theta", 2.0}}, weight_spec::one()).constant, 16.0, 1e-15);
    EXPECT_EQ(exact_constant("beta", {{"alpha", 2.0}, {"beta", 5.0}}, weight_spec::stein()).constant, 1.0);
}

TEST(exact_constant, uncovered_cases)
{
    EXPECT_THROW(exact_constant("subbotin", {{"alpha", 3.0}}, weight_spec::one()), not_available);
    EXPECT_THROW(exact_constant("beta", {{"alpha", 2.0}, {"beta", 2.0}}, weight_spec::one()), not_available);
    EXPECT_THROW(exact_constant("gamma", {{"k", 0.5}}, weight_spec::one()), not_available);
}

TEST(exact_constant, saturating_functions_are_monotone)
{
    expect_monotone(exact_constant("uniform", {}, weight_spec::one()), 0.0, 1.0);
    expect_monotone(exact_constant("gaussian", {}, weight_spec::one()), -5.0, 5.0);
    expect_monotone(exact_constant("gamma", {{"k", 2.0}}, weight_spec::one()), 0.0, 30.0);
    expect_monotone(exact_constant("weibull", {{"k", 1.5}, {"lambda", 1.0}}, weight_spec::power(0.5)), 0.0, 10.0);
    for (double a : {0.5, 2.0, 3.5}) {
        expect_monotone(exact_constant("beta", {{"alpha", a}, {"beta", 1.0}}, weight_spec::one()), 0.0, 1.0);
        expect_monotone(exact_constant("beta", {{"alpha", 1.0}, {"beta", a}}, weight_spec::one()), 0.0, 1.0);
    }
}

TEST(exact_constant, bessel_root_path)
{
    const double j11 = boost::math::cyl_bessel_j_zero(1.0, 1);
    EXPECT_NEAR(beta_alpha1_root(2.0), j11 / 2.0, 1e-12);
    const auto d = catalog("beta", {{"alpha", 2.0}, {"beta", 1.0}});
    EXPECT_NEAR(power_estimate(d, weight_spec::one()), 1.0 / (j11 * j11), 1e-5);
}

TEST(exact_constant, reflection_matches_iteration)
{
    const auto d = catalog("beta", {{"alpha", 1.0}, {"beta", 3.0}});
    const double c = exact_constant("beta", {{"alpha", 1.0}, {"beta", 3.0}}, weight_spec::one()).constant;
    EXPECT_NEAR(power_estimate(d, weight_spec::one()), c, 1e-4 * c);
}

TEST(exact_constant, oracle_agrees_with_iteration)
{
    struct item {
        std::string family;
        param_map params;
        weight_spec w;
        double eps;
    };
    const std::vector<item> cases{
        {"uniform", {{"lo", -1.0}, {"hi", 2.0}}, weight_spec::one(), 1e-10},
        {"gaussian", {{"mu", 1.0}, {"sigma", 2.0}}, weight_spec::one(), 1e-10},
        // Slowly decaying eigenfunction again; b >= 1/2 is left out because
        // the operator is then not compact and 4b is not an eigenvalue.
        {"gaussian", {}, weight_spec::rational(0.3), 1e-18},
        {"weibull", {{"k", 1.5}, {"lambda", 1.0}}, weight_spec::power(0.5), 1e-10},
        {"weibull", {{"k", 2.0}, {"lambda", 1.0}}, weight_spec::one(), 1e-10},
        {"beta", {{"alpha", 3.5}, {"beta", 1.0}}, weight_spec::one(), 1e-10},
        {"beta", {{"alpha", 2.0}, {"beta", 3.0}}, weight_spec::stein(), 1e-10},
        // The gamma eigenfunction grows like e^{x/3}: the default truncation
        // is too coarse for 1e-4.
        {"gamma", {{"k", 2.0}, {"theta", 1.0}}, weight_spec::one(), 1e-30},
    };
    for (const auto& c : cases) {
        const double exact = exact_constant(c.family, c.params, c.w).constant;
        grid_options o;
        o.eps_trunc = c.eps;
        const double est = power_estimate(catalog(c.family, c.params), c.w, o);
        EXPECT_NEAR(est, exact, 1e-4 * exact) << c.family << ' ' << c.w.describe();
    }
}

TEST(beta_second_order, table_values)
{
    auto r = beta_second_order(2.0, 2.0);
    EXPECT_NEAR(r.first, 1.0 / 24.0, 1e-12);
    EXPECT_NEAR(r.second, 5.0 / 90.0, 1e-12);
    r = beta_second_order(0.5, 3.0);
    EXPECT_NEAR(r.first, 0.03318, 1e-5);
    EXPECT_NEAR(r.second, 0.05792, 1e-5);
    r = beta_second_order(3.0, 2.0);
    EXPECT_NEAR(r.first, 0.03095, 1e-5);
    EXPECT_NEAR(r.second, 0.04492, 1e-5);
}

TEST(beta_second_order, equals_second_nested_interval)
{
    for (auto [a, b] : {std::pair{2.0, 2.0}, std::pair{0.5, 3.0}, std::pair{3.0, 2.0}}) {
        const auto d = catalog("beta", {{"alpha", a}, {"beta", b}});
        const auto g = build_grid(d, weight_spec::one());
        const auto tr = nested_intervals(build_operator(d, weight_spec::one(), g), sample(g, one_fn), 1, one_fn);
        const auto r = beta_second_order(a, b);
        EXPECT_NEAR(tr.steps[1].lo, r.first, 1e-7) << a << ',' << b;
        EXPECT_NEAR(tr.steps[1].hi, r.second, 1e-7) << a << ',' << b;
    }
}

TEST(subbotin_bounds, alpha_three)
{
    const auto r = subbotin_bounds(3.0);
    EXPECT_NEAR(r.first, std::pow(3.0, -1.0 / 3.0), 1e-15);
    EXPECT_NEAR(r.second, 0.938893, 1e-6);
    EXPECT_THROW(subbotin_bounds(1.5), parameter_error);
}

TEST(iterate_closed_form, reference_points)
{
    const double x = 0.5;
    EXPECT_NEAR(iterate_closed_form("uniform1", 3, x),
                (3 * x - 5 * std::pow(x, 3) + 3 * std::pow(x, 5) - std::pow(x, 6)) / 720.0, 1e-16);
    EXPECT_NEAR(iterate_closed_form("uniform1", 2, 0.3), (0.3 - 2 * 0.027 + 0.0081) / 24.0, 1e-16);
    EXPECT_EQ(iterate_closed_form("exponential1", 1, 2.0), 2.0);
    EXPECT_EQ(iterate_closed_form("exponential1", 2, 2.0), 4.0);
    EXPECT_EQ(iterate_closed_form("beta21_x", 0, 0.37), 0.37);
    EXPECT_THROW(iterate_closed_form("uniform1", 13, 0.5), range_error);
    EXPECT_THROW(iterate_closed_form("cauchy1", 1, 0.5), parameter_error);
}

TEST(iterate_closed_form, exponential_obeys_monomial_recursion)
{
    // L x^i = sum_{j=1}^{i+1} i!/j! x^j on the exponential, applied to the
    // polynomial of step n, must give step n + 1.
    for (int n = 0; n < 8; ++n) {
        const auto p = iterate_polynomial("exponential1", n);
        rational_poly next(p.size() + 1);
        for (std::size_t i = 0; i < p.size(); ++i) {
            rational fi = 1;
            for (std::size_t k = 2; k <= i; ++k) fi *= static_cast<long>(k);
            rational fj = 1;
            for (std::size_t j = 1; j <= i + 1; ++j) {
                fj *= static_cast<long>(j);
                next[j] += p[i] * fi / fj;
            }
        }
        const auto q = iterate_polynomial("exponential1", n + 1);
        for (std::size_t k = 0; k < next.size(); ++k) EXPECT_EQ(next[k], k < q.size() ? q[k] : rational(0)) << n;
    }
}

TEST(iterate_closed_form, euler_identity_on_the_grid)
{
    const auto d = catalog("uniform", {});
    const auto g = build_grid(d, weight_spec::one());
    const auto op = build_operator(d, weight_spec::one(), g);
    auto f = sample(g, one_fn);
    for (int n = 1; n <= 5; ++n) {
        f = op.apply(f);
        for (std::size_t i = 0; i < g->size(); i += g->size() / 20)
            EXPECT_NEAR(f.values[i], iterate_closed_form("uniform1", n, g->nodes[i]), 1e-8) << n;
    }
}

TEST(iterate_closed_form, monomial_identity_on_the_grid)
{
    for (double a : {1.0, 2.0, 3.5}) {
        const auto d = catalog("beta", {{"alpha", a}, {"beta", 1.0}});
        const auto g = build_grid(d, weight_spec::one());
        const auto op = build_operator(d, weight_spec::one(), g);
        for (int i = 0; i <= 4; ++i) {
            const auto f = op.apply(sample(g, [i](double x) { return std::pow(x, i); }));
            for (std::size_t j = 0; j < g->size(); j += g->size() / 20)
                EXPECT_NEAR(f.values[j], iterate_closed_form("beta_alpha1_monomial", i, g->nodes[j], a), 1e-7)
                    << "alpha=" << a << " i=" << i;
        }
    }
}

TEST(iterate_closed_form, beta21_on_the_grid)
{
    const auto d = catalog("beta", {{"alpha", 2.0}, {"beta", 1.0}});
    const auto g = build_grid(d, weight_spec::one());
    const auto op = build_operator(d, weight_spec::one(), g);
    auto f = sample(g, [](double x) { return x; });
    for (int n = 1; n <= 4; ++n) {
        f = op.apply(f);
        for (std::size_t j = 0; j < g->size(); j += g->size() / 20)
            EXPECT_NEAR(f.values[j], iterate_closed_form("beta21_x", n, g->nodes[j]), 1e-9) << n;
    }
}

TEST(curious_identity, pi_squared_over_three)
{
    for (const auto& [label, d] : poincare::testing::catalog_zoo())
        EXPECT_NEAR(curious_identity_check(d), pi * pi / 3.0, 1e-5) << label;
}
