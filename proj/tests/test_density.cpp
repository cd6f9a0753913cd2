#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include <boost/math/distributions.hpp>
#include <gtest/gtest.h>

#include "support.hpp"

using namespace poincare;
using poincare::testing::catalog_zoo;

TEST(density, uniform_pdf)
{
    const auto d = catalog("uniform", {{"lo", 0.0}, {"hi", 1.0}});
    EXPECT_DOUBLE_EQ(d.pdf(0.5), 1.0);
}

TEST(density, gamma_shape_one_is_exponential)
{
    const auto d = catalog("gamma", {{"k", 1.0}, {"theta", 1.0}});
    for (double x : {0.1, 1.0, 3.0}) EXPECT_NEAR(d.pdf(x), std::exp(-x), 1e-14);
    EXPECT_NEAR(d.cdf(1.0), 1.0 - std::exp(-1.0), 1e-14);
}

TEST(density, subbotin_normalizing_constant)
{
    const auto d = catalog("subbotin", {{"alpha", 3.0}});
    const double z = integrate([](double x) { return std::exp(-std::pow(std::fabs(x), 3.0) / 3.0); }, -inf, inf, 1e-13);
    EXPECT_NEAR(d.pdf(0.0), 1.0 / z, 1e-12);
    EXPECT_NEAR(d.pdf(0.0), 1.0 / (2.0 * std::cbrt(3.0) * std::tgamma(4.0 / 3.0)), 1e-12);
}

TEST(density, cdf_against_boost)
{
    namespace bm = boost::math;
    const auto g = catalog("gaussian", {{"mu", 1.0}, {"sigma", 2.0}});
    const auto b = catalog("beta", {{"alpha", 0.5}, {"beta", 3.0}});
    const auto ga = catalog("gamma", {{"k", 2.5}, {"theta", 1.5}});
    const auto w = catalog("weibull", {{"k", 1.5}, {"lambda", 2.0}});
    for (double u : {0.01, 0.2, 0.5, 0.8, 0.99}) {
        const double xg = bm::quantile(bm::normal(1.0, 2.0), u);
        EXPECT_NEAR(g.cdf(xg), u, 1e-13);
        const double xb = bm::quantile(bm::beta_distribution<>(0.5, 3.0), u);
        EXPECT_NEAR(b.cdf(xb), u, 1e-12);
        const double xa = bm::quantile(bm::gamma_distribution<>(2.5, 1.5), u);
        EXPECT_NEAR(ga.cdf(xa), u, 1e-12);
        const double xw = bm::quantile(bm::weibull(1.5, 2.0), u);
        EXPECT_NEAR(w.cdf(xw), u, 1e-13);
    }
}

TEST(density, deep_tails_stay_in_log_space)
{
    const auto g = catalog("gaussian", {});
    namespace bm = boost::math;
    EXPECT_NEAR(g.log_sf(30.0), std::log(bm::cdf(bm::complement(bm::normal(), 30.0))), 1e-10);
    EXPECT_TRUE(std::isfinite(g.log_cdf(-40.0)));
}

TEST(density, medians_and_quantiles)
{
    EXPECT_NEAR(catalog("gaussian", {}).median(), 0.0, 1e-12);
    EXPECT_NEAR(catalog("exponential", {{"theta", 1.0}}).quantile(1.0 - std::exp(-1.0)), 1.0, 1e-12);
    EXPECT_NEAR(catalog("beta", {{"alpha", 2.0}, {"beta", 2.0}}).cdf(0.5), 0.5, 1e-14);
}

TEST(density, total_mass_is_one)
{
    for (const auto& [label, d] : catalog_zoo()) {
        const double lo = std::isfinite(d.support_lo) ? d.support_lo : -inf;
        const double hi = std::isfinite(d.support_hi) ? d.support_hi : inf;
        const double m = integrate([&](double x) { return d.inside(x) ? d.pdf(x) : 0.0; }, lo, hi, 1e-12);
        EXPECT_NEAR(m, 1.0, 1e-8) << label;
    }
}

TEST(density, quantile_inverts_cdf)
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u01(0.001, 0.999);
    for (const auto& [label, d] : catalog_zoo()) {
        for (int i = 0; i < 50; ++i) {
            const double x = d.quantile(u01(rng));
            EXPECT_NEAR(d.quantile(d.cdf(x)), x, 1e-9 * std::max(1.0, std::fabs(x))) << label;
        }
    }
}

TEST(density, cdf_is_monotone)
{
    for (const auto& [label, d] : catalog_zoo()) {
        double prev = 0.0;
        for (int i = 1; i < 200; ++i) {
            const double c = d.cdf(d.quantile(i / 200.0));
            EXPECT_GE(c, prev) << label;
            prev = c;
        }
    }
}

TEST(density, stein_kernels_match_definition)
{
    // tau(x) = (1/p) int_x^b (y - mean) p(y) dy, by quadrature.
    for (const auto& [label, d] : catalog_zoo()) {
        for (double u : {0.1, 0.5, 0.9}) {
            const double x = d.quantile(u);
            const double hi = std::isfinite(d.support_hi) ? d.support_hi : inf;
            const double v = integrate([&](double y) { return d.inside(y) ? (y - d.mean()) * d.pdf(y) : 0.0; }, x, hi, 1e-12)
                             / d.pdf(x);
            EXPECT_NEAR(d.stein_kernel(x), v, 1e-7 * std::max(1.0, std::fabs(v))) << label << " x=" << x;
        }
    }
}

TEST(density, errors)
{
    EXPECT_THROW(catalog("cauchy", {}), parameter_error);
    EXPECT_THROW(catalog("gaussian", {{"sigma", -1.0}}), parameter_error);
    EXPECT_THROW(catalog("exponential", {{"theta", 1.0}}).cdf(-1.0), domain_error);
    EXPECT_THROW(catalog("gaussian", {}).quantile(1.0), domain_error);
}

TEST(weights, parse_and_validate)
{
    EXPECT_EQ(parse_weight("one").kind, weight_kind::one);
    EXPECT_EQ(parse_weight("power:0.5").kind, weight_kind::power);
    EXPECT_DOUBLE_EQ(parse_weight("rational:0.1").param, 0.1);
    EXPECT_EQ(parse_weight("stein_kernel").kind, weight_kind::stein_kernel);
    EXPECT_THROW(parse_weight("cubic"), parameter_error);
    EXPECT_THROW(validate_weight(catalog("gaussian", {}), weight_spec::power(0.5)), parameter_error);
    const auto b = catalog("beta", {{"alpha", 2.0}, {"beta", 2.0}});
    EXPECT_NEAR(weight_value(b, weight_spec::stein(), 0.3), 0.3 * 0.7 / 4.0, 1e-14);
}

namespace {

std::string write_table(const std::string& name, double lo, double hi, int n, double (*log_p)(double))
{
    const std::string path = ::testing::TempDir() + name;
    std::ofstream out(path);
    out.precision(17);
    for (int i = 0; i < n; ++i) {
        const double x = lo + (hi - lo) * i / (n - 1);
        out << x << ' ' << log_p(x) << '\n';
    }
    return path;
}

} // namespace

TEST(tabulated, uniform_table_gives_uniform_constant)
{
    const auto path = write_table("uniform_table.txt", 0.0, 1.0, 32, [](double) { return 0.0; });
    const auto d = load_tabulated(path);
    const double m = integrate([&](double x) { return d.inside(x) ? d.pdf(x) : 0.0; }, 0.0, 1.0, 1e-12);
    EXPECT_NEAR(m, 1.0, 1e-6);
    const auto g = build_grid(d, weight_spec::one());
    const auto tr = power_iterate(build_operator(d, weight_spec::one(), g), sample(g, poincare::testing::one_fn), 200);
    EXPECT_NEAR(tr.estimate, 1.0 / (pi * pi), 0.01 / (pi * pi));
}

TEST(tabulated, gaussian_table_stein_kernel)
{
    const auto path = write_table("gauss_table.txt", -8.0, 8.0, 200, [](double x) { return -0.5 * x * x; });
    const auto d = load_tabulated(path);
    EXPECT_NEAR(d.stein_kernel(0.0), 1.0, 1e-3);
}

TEST(tabulated, rejects_decreasing_abscissae)
{
    const std::string path = ::testing::TempDir() + "bad_table.txt";
    {
        std::ofstream out(path);
        for (int i = 10; i > 0; --i) out << i << " 0\n";
    }
    EXPECT_THROW(load_tabulated(path), ingestion_error);
}
