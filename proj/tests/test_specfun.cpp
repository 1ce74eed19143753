#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "hplc/specfun.hpp"
#include "oracles.hpp"

namespace {

const double kSqrtPi = std::sqrt(std::numbers::pi);

/// Σ w x^j, summing mirror pairs together so odd moments cancel exactly.
double rule_moment(const hplc::QuadratureRule& rule, int j) {
    const std::size_t n = rule.nodes.size();
    double sum = 0.0;
    for (std::size_t i = 0; i < n / 2; ++i) {
        const std::size_t k = n - 1 - i;
        sum += rule.weights[i] * std::pow(rule.nodes[i], j) +
               rule.weights[k] * std::pow(rule.nodes[k], j);
    }
    if (n % 2 == 1) sum += rule.weights[n / 2] * std::pow(rule.nodes[n / 2], j);
    return sum;
}

TEST(GaussHermite, OrderOneIsOriginWithWeightSqrtPi) {
    const auto rule = hplc::gauss_hermite(1);
    ASSERT_EQ(rule.nodes.size(), 1u);
    EXPECT_EQ(rule.nodes[0], 0.0);
    EXPECT_NEAR(rule.weights[0], kSqrtPi, 1e-15);
}

TEST(GaussHermite, OrderTwo) {
    const auto rule = hplc::gauss_hermite(2);
    ASSERT_EQ(rule.nodes.size(), 2u);
    EXPECT_NEAR(rule.nodes[0], -1.0 / std::numbers::sqrt2, 1e-15);
    EXPECT_NEAR(rule.nodes[1], 1.0 / std::numbers::sqrt2, 1e-15);
    EXPECT_NEAR(rule.weights[0], kSqrtPi / 2, 1e-15);
    EXPECT_NEAR(rule.weights[1], kSqrtPi / 2, 1e-15);
}

TEST(GaussHermite, SixthMomentAtOrder32) {
    const auto rule = hplc::gauss_hermite(32);
    const double exact = 15.0 * kSqrtPi / 8.0;
    EXPECT_NEAR(rule.integrate([](double x) { return std::pow(x, 6); }), exact, 1e-12 * exact);
}

TEST(GaussHermite, InvariantsAcrossOrders) {
    for (int n : {1, 2, 3, 4, 5, 7, 10, 16, 20, 31, 32, 50, 64, 100, 128, 150, 199, 200}) {
        SCOPED_TRACE(n);
        const auto rule = hplc::gauss_hermite(n);
        ASSERT_EQ(rule.order, n);
        ASSERT_EQ(rule.nodes.size(), static_cast<std::size_t>(n));
        double sum_w = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            EXPECT_GT(rule.weights[i], 0.0);
            if (i > 0) {
                EXPECT_LT(rule.nodes[i - 1], rule.nodes[i]);
            }
            EXPECT_NEAR(rule.nodes[i], -rule.nodes[rule.nodes.size() - 1 - i], 1e-12);
            sum_w += rule.weights[i];
        }
        EXPECT_NEAR(sum_w, kSqrtPi, 1e-12 * kSqrtPi);
        EXPECT_NEAR(rule_moment(rule, 1), 0.0, 1e-12);
        if (n >= 2) {
            EXPECT_NEAR(rule_moment(rule, 2), kSqrtPi / 2, 1e-10 * kSqrtPi / 2);
        }
    }
}

TEST(GaussHermite, ExactForMonomialsUpToDegree2NMinus1) {
    for (int n : {1, 2, 5, 8, 16, 32}) {
        SCOPED_TRACE(n);
        const auto rule = hplc::gauss_hermite(n);
        for (int j = 0; j <= 2 * n - 1; ++j) {
            const double exact = oracle::gaussian_moment(j);
            const double got = rule_moment(rule, j);
            if (j % 2 == 1) {
                EXPECT_NEAR(got, 0.0, 1e-10) << "j=" << j;
            } else {
                EXPECT_NEAR(got, exact, 1e-10 * exact) << "j=" << j;
            }
        }
    }
}

TEST(GaussHermite, RejectsOutOfRangeOrder) {
    EXPECT_THROW(hplc::gauss_hermite(0), hplc::ParameterError);
    EXPECT_THROW(hplc::gauss_hermite(-3), hplc::ParameterError);
    EXPECT_THROW(hplc::gauss_hermite(201), hplc::ParameterError);
}

TEST(BesselK1, KnownValues) {
    EXPECT_NEAR(hplc::bessel_k1(1.0), 0.6019072302, 1e-10);
    EXPECT_NEAR(hplc::bessel_k1(10.0), 1.8648773e-5, 1e-12);
}

TEST(BesselK1, SmallArgumentLimit) {
    const double x = 1e-8;
    EXPECT_NEAR(x * hplc::bessel_k1(x), 1.0, 1e-6);
}

TEST(BesselK1, MatchesIntegralRepresentation) {
    // 50 log-spaced points on [1e-6, 50].
    for (int i = 0; i < 50; ++i) {
        const double x = std::pow(10.0, -6.0 + (std::log10(50.0) + 6.0) * i / 49.0);
        const double ref = oracle::bessel_k1_integral(x);
        EXPECT_NEAR(hplc::bessel_k1(x), ref, 1e-9 * ref) << "x=" << x;
    }
}

TEST(BesselK1, BranchSeamIsContinuous) {
    const double below = hplc::bessel_k1(std::nextafter(2.0, 0.0));
    const double above = hplc::bessel_k1(std::nextafter(2.0, 3.0));
    EXPECT_NEAR(below, above, 1e-13);
}

TEST(BesselK1, MonotoneDecreasingAndAsymptotic) {
    double prev = hplc::bessel_k1(1e-8);
    for (double x = 1e-7; x < 700.0; x *= 1.3) {
        const double v = hplc::bessel_k1(x);
        EXPECT_LT(v, prev) << "x=" << x;
        prev = v;
    }
    const double x = 400.0;
    const double leading = std::sqrt(std::numbers::pi / (2 * x)) * std::exp(-x);
    EXPECT_NEAR(hplc::bessel_k1(x) / leading, 1.0 + 3.0 / (8.0 * x), 1e-5);
}

TEST(BesselK1, DomainErrors) {
    EXPECT_THROW(hplc::bessel_k1(0.0), hplc::DomainError);
    EXPECT_THROW(hplc::bessel_k1(-1.0), hplc::DomainError);
    EXPECT_THROW(hplc::bessel_k1(std::nan("")), hplc::DomainError);
}

TEST(SemiInfinite, KnownIntegrals) {
    const double tol = 1e-8;
    EXPECT_NEAR(hplc::integrate_semi_infinite([](double z) { return std::exp(-z); }, tol), 1.0,
                tol);
    EXPECT_NEAR(hplc::integrate_semi_infinite([](double z) { return z * std::exp(-z); }, tol),
                1.0, tol);
    EXPECT_NEAR(hplc::integrate_semi_infinite([](double z) { return std::exp(-std::sqrt(z)); }, tol),
                2.0, 2.0 * tol);
    EXPECT_EQ(hplc::integrate_semi_infinite([](double) { return 0.0; }, tol), 0.0);
}

TEST(SemiInfinite, BesselIntegrandAgainstBruteForceTrapezoid) {
    const double tol = 1e-8;
    auto f = [](double z) {
        const double x = 2.0 * std::sqrt(z);
        return x * hplc::bessel_k1(x) / z * -std::expm1(-z);
    };
    const double got = hplc::integrate_semi_infinite(f, tol);
    const double ref = oracle::log_grid_trapezoid(f, -40.0, 8.0, 1e-3);
    EXPECT_TRUE(std::isfinite(got));
    EXPECT_NEAR(got, ref, 10 * tol * ref);
}

TEST(SemiInfinite, PanelCountDoesNotMatter) {
    const double tol = 1e-8;
    auto f = [](double z) {
        const double x = 2.0 * std::sqrt(0.3 * z);
        return x * hplc::bessel_k1(x) * std::exp(-0.1 * z) / z * -std::expm1(-2.0 * z);
    };
    hplc::SemiInfiniteOptions base;
    base.rel_tol = tol;
    const double reference = hplc::integrate_semi_infinite_detailed(f, base).value;
    for (double width : {0.5, 2.0}) {
        hplc::SemiInfiniteOptions o = base;
        o.initial_panel_width = width;
        EXPECT_NEAR(hplc::integrate_semi_infinite_detailed(f, o).value, reference, tol * reference);
    }
}

TEST(SemiInfinite, Deterministic) {
    auto f = [](double z) { return std::exp(-z) / (1.0 + z); };
    EXPECT_EQ(hplc::integrate_semi_infinite(f), hplc::integrate_semi_infinite(f));
}

TEST(SemiInfinite, NonDecayingIntegrandRaisesWithEstimate) {
    EXPECT_THROW(
        hplc::integrate_semi_infinite([](double z) { return std::exp(1e-3 * z) / (1.0 + z); }),
        hplc::NumericalError);
}

TEST(SemiInfinite, PanelBudgetExhaustionCarriesPartialResult) {
    hplc::SemiInfiniteOptions o;
    o.rel_tol = 1e-15;
    o.max_panels = 8;
    o.initial_panel_width = 50.0;
    try {
        hplc::integrate_semi_infinite_detailed([](double z) { return std::exp(-z) * std::cos(z); }, o);
        FAIL() << "expected NumericalError";
    } catch (const hplc::NumericalError& e) {
        EXPECT_TRUE(std::isfinite(e.partial()));
        EXPECT_GE(e.error_estimate(), 0.0);
    }
}

}  // namespace
