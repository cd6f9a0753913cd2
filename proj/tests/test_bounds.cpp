#include <cmath>

#include <gtest/gtest.h>

#include "support.hpp"

using namespace poincare;

namespace {

// h' = -(1/2 + x^2/4) e^{x^2/4}, the test function for the weighted Gaussian.
test_derivative weighted_gaussian_h()
{
    test_derivative h;
    h.log_neg = [](double x) { return x * x / 4.0 + std::log(0.5 + x * x / 4.0); };
    return h;
}

} // namespace

TEST(muckenhoupt, reference_values)
{
    const auto g = muckenhoupt(catalog("gaussian", {}));
    EXPECT_NEAR(*g.lower, 0.239406, 1e-4);
    EXPECT_NEAR(*g.upper, 1.91525, 1e-4);
    const auto e = muckenhoupt(catalog("exponential", {{"theta", 1.0}}));
    EXPECT_NEAR(*e.lower, 0.5, 1e-6);
    EXPECT_NEAR(*e.upper, 4.0, 1e-6);
    const auto u = muckenhoupt(catalog("uniform", {}));
    EXPECT_LE(*u.lower, 1.0 / (pi * pi));
    EXPECT_GE(*u.upper, 1.0 / (pi * pi));
}

TEST(transport, gaussian)
{
    EXPECT_NEAR(*transport_bound(catalog("gaussian", {})).upper, pi / 2.0, 1e-6);
}

TEST(entropy, gaussian_and_exponential)
{
    EXPECT_NEAR(*entropy_bound(catalog("gaussian", {}), weight_spec::one()).upper, pi * std::log(std::sqrt(2.0)), 1e-6);
    const auto e = entropy_bound(catalog("exponential", {{"theta", 1.0}}), weight_spec::one());
    EXPECT_TRUE(e.upper_infinite);
}

TEST(entropy, equals_chen_wang_with_entropy_test_function)
{
    const auto d = catalog("gaussian", {});
    test_derivative h;
    h.log_neg = [&](double x) { return d.log_pdf(x) - d.log_cdf(x) - d.log_sf(x); };
    const auto cw = chen_wang(d, weight_spec::one(), h, bound_side::upper);
    const auto en = entropy_bound(d, weight_spec::one());
    EXPECT_NEAR(cw.value, *en.upper, 1e-8);
}

TEST(stein_bounds, catalog_cases)
{
    const auto g = stein_kernel_bounds(catalog("gaussian", {}), weight_spec::one());
    EXPECT_NEAR(*g.lower, 1.0, 1e-9);
    EXPECT_NEAR(*g.upper, 1.0, 1e-9);
    EXPECT_TRUE(g.constant);
    for (auto [a, b] : {std::pair{2.0, 2.0}, std::pair{0.5, 3.0}, std::pair{3.0, 2.0}}) {
        const auto r = stein_kernel_bounds(catalog("beta", {{"alpha", a}, {"beta", b}}), weight_spec::one());
        EXPECT_NEAR(*r.upper, 1.0 / (4.0 * (a + b)), 1e-6);
        EXPECT_GE(*r.lower, 0.0);
        EXPECT_LT(*r.lower, 1e-6);
    }
    const auto s = stein_kernel_bounds(catalog("subbotin", {{"alpha", 3.0}}), weight_spec::one());
    EXPECT_NEAR(*s.upper, std::pow(3.0, -1.0 / 3.0) * std::tgamma(2.0 / 3.0), 1e-6);
    EXPECT_TRUE(stein_kernel_bounds(catalog("exponential", {{"theta", 1.0}}), weight_spec::one()).upper_infinite);
}

TEST(stein_bounds, stein_weight_is_exact)
{
    for (const auto& [label, d] : poincare::testing::catalog_zoo()) {
        const auto r = stein_kernel_bounds(d, weight_spec::stein());
        EXPECT_NEAR(*r.lower, 1.0, 1e-9) << label;
        EXPECT_NEAR(*r.upper, 1.0, 1e-9) << label;
    }
}

TEST(bounds, scale_covariance)
{
    const auto a = catalog("uniform", {{"lo", 0.0}, {"hi", 1.0}});
    const auto b = catalog("uniform", {{"lo", 0.0}, {"hi", 2.0}});
    const auto ma = muckenhoupt(a), mb = muckenhoupt(b);
    EXPECT_NEAR(*mb.lower / *ma.lower, 4.0, 1e-8);
    EXPECT_NEAR(*mb.upper / *ma.upper, 4.0, 1e-8);
    EXPECT_NEAR(*transport_bound(b).upper / *transport_bound(a).upper, 4.0, 1e-8);
    EXPECT_NEAR(*stein_kernel_bounds(b, weight_spec::one()).upper / *stein_kernel_bounds(a, weight_spec::one()).upper, 4.0,
                1e-8);
}

TEST(bounds, ordering_against_known_constants)
{
    struct known {
        density_spec d;
        double c;
    };
    const std::vector<known> cases{
        {catalog("gaussian", {}), 1.0},
        {catalog("exponential", {{"theta", 1.0}}), 4.0},
        {catalog("uniform", {}), 1.0 / (pi * pi)},
        {catalog("gamma", {{"k", 2.0}}), 4.5},
        {catalog("beta", {{"alpha", 2.0}, {"beta", 1.0}}), exact_constant("beta", {{"alpha", 2.0}, {"beta", 1.0}}, weight_spec::one()).constant},
    };
    for (const auto& k : cases) {
        const auto rep = all_bounds(k.d, weight_spec::one());
        for (const auto& e : rep.entries) {
            if (e.lower) EXPECT_LE(*e.lower, k.c + 1e-6) << k.d.name << ' ' << e.name;
            if (e.upper) EXPECT_GE(*e.upper, k.c - 1e-6) << k.d.name << ' ' << e.name;
            if (e.lower && e.upper) EXPECT_LE(*e.lower, *e.upper + 1e-12);
        }
    }
}

TEST(bounds, report_marks_inapplicable_entries)
{
    const auto rep = all_bounds(catalog("gaussian", {}), weight_spec::rational(0.5));
    const auto* m = rep.find("muckenhoupt");
    ASSERT_NE(m, nullptr);
    EXPECT_FALSE(m->upper.has_value());
    EXPECT_NE(m->note.find("not available"), std::string::npos);
    EXPECT_EQ(rep.meta.n_panels, 64);
}

TEST(chen_wang, weighted_gaussian_upper_is_4b)
{
    for (double b : {0.5, 1.0}) {
        const auto r = chen_wang(catalog("gaussian", {}), weight_spec::rational(b), weighted_gaussian_h(), bound_side::upper);
        EXPECT_NEAR(r.value, 4.0 * b, 1e-6) << b;
    }
}

TEST(chen_wang, rejects_increasing_h)
{
    test_derivative h;
    h.value = [](double) { return 1.0; };
    EXPECT_THROW(chen_wang(catalog("gaussian", {}), weight_spec::one(), h, bound_side::upper), precondition_error);
}

TEST(chen_wang, linear_h_on_gaussian_is_constant)
{
    test_derivative h;
    h.value = [](double) { return -1.0; };
    const auto lo = chen_wang(catalog("gaussian", {}), weight_spec::one(), h, bound_side::lower);
    const auto hi = chen_wang(catalog("gaussian", {}), weight_spec::one(), h, bound_side::upper);
    EXPECT_NEAR(lo.value, 1.0, 1e-8);
    EXPECT_NEAR(hi.value, 1.0, 1e-8);
    EXPECT_TRUE(hi.constant);
}

TEST(chen_wang_differential, gamma_saturating_function)
{
    // f' for f(x) = (x - 3) e^{x/3}, written without cancellation.
    test_function f{[](double x) { return x / 3.0 * std::exp(x / 3.0); },
                    [](double x) { return (1.0 / 3.0 + x / 9.0) * std::exp(x / 3.0); }};
    const auto r = chen_wang_differential(catalog("gamma", {{"k", 2.0}, {"theta", 1.0}}), weight_spec::one(), f);
    EXPECT_NEAR(r.lower, 4.5, 1e-5);
    EXPECT_NEAR(r.upper, 4.5, 1e-5);
    EXPECT_TRUE(r.constant);
}

TEST(chen_wang_differential, weighted_gaussian)
{
    // f' = -h' for the weighted Gaussian test function.
    test_function f{[](double x) { return (0.5 + x * x / 4.0) * std::exp(x * x / 4.0); },
                    [](double x) { return (0.75 * x + x * x * x / 8.0) * std::exp(x * x / 4.0); }};
    const auto r = chen_wang_differential(catalog("gaussian", {}), weight_spec::rational(0.5), f);
    EXPECT_NEAR(r.lower, 2.0, 1e-6);
    EXPECT_NEAR(r.upper, 2.0, 1e-6);
    EXPECT_TRUE(r.constant);
}

TEST(hilbert_schmidt, reference_values)
{
    EXPECT_NEAR(hilbert_schmidt(catalog("beta", {{"alpha", 2.0}, {"beta", 2.0}}), weight_spec::one()).value, 0.0579, 2e-4);
    EXPECT_NEAR(hilbert_schmidt(catalog("subbotin", {{"alpha", 3.0}}), weight_spec::one()).value, 0.89442, 1e-3);
    EXPECT_TRUE(hilbert_schmidt(catalog("exponential", {{"theta", 1.0}}), weight_spec::one()).infinite);
}

TEST(hilbert_schmidt, uniform_closed_form)
{
    // ||k||^2 = sum 1/(pi^2 n^2)^2 = 1/90 for the uniform on [0,1].
    const auto r = hilbert_schmidt(catalog("uniform", {}), weight_spec::one());
    EXPECT_NEAR(r.value, std::sqrt(1.0 / 90.0), 1e-9);
    EXPECT_FALSE(r.infinite);
}
