#ifndef HPLC_SPECFUN_HPP
#define HPLC_SPECFUN_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "hplc/errors.hpp"

namespace hplc {

// ---------------------------------------------------------------------------
// Gauss-Hermite quadrature
// ---------------------------------------------------------------------------

/// N-point Gauss-Hermite rule for the weight e^{-x^2} on the real line.
/// Nodes are ascending and exactly mirror-symmetric; weights are positive.
struct QuadratureRule {
    int order = 0;
    std::vector<double> nodes;
    std::vector<double> weights;

    /// Σ w_n f(x_n), the rule's estimate of ∫ e^{-x²} f(x) dx.
    template <typename F>
    double integrate(F&& f) const {
        double sum = 0.0;
        for (std::size_t n = 0; n < nodes.size(); ++n) sum += weights[n] * f(nodes[n]);
        return sum;
    }
};

inline constexpr int kMaxHermiteOrder = 200;
inline constexpr int kDefaultHermiteOrder = 32;

namespace detail {

/// Number of eigenvalues below x of the Hermite Jacobi matrix (zero diagonal,
/// off-diagonal sqrt(k/2)), by Sturm sequence.
inline int hermite_jacobi_count_below(int n, double x) {
    int count = 0;
    double q = -x;
    if (q < 0.0) ++count;
    for (int k = 1; k < n; ++k) {
        if (q == 0.0) q = 1e-300;
        q = -x - (0.5 * k) / q;
        if (q < 0.0) ++count;
    }
    return count;
}

}  // namespace detail

/// Builds the Gauss-Hermite rule of the given order (1..200).
///
/// Each non-negative root is bracketed by Sturm-sequence bisection on the
/// Jacobi matrix, then polished by Newton on the orthonormal three-term
/// recurrence, which also yields the weight 2 / H̃'_n(x)². The negative half
/// is the exact mirror image.
inline QuadratureRule gauss_hermite(int order) {
    if (order < 1 || order > kMaxHermiteOrder) {
        throw ParameterError("gauss_hermite: order must be in [1, 200], got " +
                             std::to_string(order));
    }
    const int n = order;
    // π^{-1/4}
    const double pim4 = 0.7511255444649425;
    const double bound = std::sqrt(2.0 * n + 1.0) + 1.0;

    QuadratureRule rule;
    rule.order = n;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));

    // Roots with ascending index n/2 .. n-1 are the non-negative ones.
    for (int idx = n / 2; idx < n; ++idx) {
        double lo = (idx == n / 2) ? -1e-3 : rule.nodes[static_cast<std::size_t>(idx - 1)];
        double hi = bound;
        for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, hi); ++it) {
            const double mid = 0.5 * (lo + hi);
            if (detail::hermite_jacobi_count_below(n, mid) > idx) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        double z = 0.5 * (lo + hi);
        if (n % 2 == 1 && idx == n / 2) z = 0.0;

        double pp = 0.0;
        for (int iter = 0; iter < 3; ++iter) {
            double p1 = pim4;
            double p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / (j + 1.0)) * p2 - std::sqrt(j / (j + 1.0)) * p3;
            }
            pp = std::sqrt(2.0 * n) * p2;
            if (iter < 2 && !(n % 2 == 1 && idx == n / 2)) z -= p1 / pp;
        }
        const auto pos = static_cast<std::size_t>(idx);
        const auto neg = static_cast<std::size_t>(n - 1 - idx);
        rule.nodes[pos] = z;
        rule.nodes[neg] = -z;
        rule.weights[pos] = rule.weights[neg] = 2.0 / (pp * pp);
    }
    if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
    return rule;
}

// ---------------------------------------------------------------------------
// Modified Bessel function of the second kind, order one
// ---------------------------------------------------------------------------

namespace detail {

/// Ascending series about the origin, accurate for 0 < x <= 2.
inline double bessel_k1_series(double x) {
    const double q = 0.25 * x * x;
    // ψ(k+1) + ψ(k+2), starting at k = 0: ψ(1) = -γ, ψ(2) = 1 - γ.
    const double euler_gamma = std::numbers::egamma;
    double psi_k1 = -euler_gamma;
    double psi_k2 = 1.0 - euler_gamma;
    double term = 1.0;  // q^k / (k! (k+1)!)
    double i1_sum = 0.0;
    double psi_sum = 0.0;
    for (int k = 0; k < 60; ++k) {
        i1_sum += term;
        psi_sum += (psi_k1 + psi_k2) * term;
        if (term < 1e-18 * i1_sum) break;
        psi_k1 += 1.0 / (k + 1.0);
        psi_k2 += 1.0 / (k + 2.0);
        term *= q / ((k + 1.0) * (k + 2.0));
    }
    const double i1 = 0.5 * x * i1_sum;
    return 1.0 / x + std::log(0.5 * x) * i1 - 0.25 * x * psi_sum;
}

/// Steed's continued fraction (Temme's CF2) for K_0, K_1 at x >= 2.
/// Returns K_1(x); underflows gracefully to 0 for very large x.
inline double bessel_k1_cf2(double x) {
    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double h = d;
    double delh = d;
    double q1 = 0.0;
    double q2 = 1.0;
    const double a1 = 0.25;  // 1/4 - ν² with ν = 0
    double q = a1;
    double c = a1;
    double a = -a1;
    double s = 1.0 + q * delh;
    for (int i = 1; i < 10000; ++i) {
        a -= 2.0 * i;
        c = -a * c / (i + 1.0);
        const double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const double dels = q * delh;
        s += dels;
        if (std::abs(dels / s) < 1e-17) break;
    }
    h *= a1;
    const double k0 = std::sqrt(std::numbers::pi / (2.0 * x)) * std::exp(-x) / s;
    return k0 * (x + 0.5 - h) / x;
}

}  // namespace detail

/// K₁(x), the modified Bessel function of the second kind of order one.
///
/// This is the function behind E[e^{-a/X}] = 2√a K₁(2√a) for X ~ Exp(1).
/// Power series for x <= 2, continued fraction beyond. Relative error is
/// around 1e-15 on [1e-8, 700]; results underflow to 0 past about x = 705.
inline double bessel_k1(double x) {
    if (!(x > 0.0)) throw DomainError("bessel_k1: argument must be positive");
    if (std::isinf(x)) return 0.0;
    return x <= 2.0 ? detail::bessel_k1_series(x) : detail::bessel_k1_cf2(x);
}

// ---------------------------------------------------------------------------
// Semi-infinite integration
// ---------------------------------------------------------------------------

namespace detail {

template <std::size_t N>
struct LegendreRule {
    std::array<double, N> nodes{};
    std::array<double, N> weights{};
};

/// N-point Gauss-Legendre rule on [-1, 1].
template <std::size_t N>
LegendreRule<N> make_legendre_rule() {
    LegendreRule<N> rule;
    const int n = static_cast<int>(N);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = 1.0;
            double p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) <= 1e-16) break;
        }
        const auto lo = static_cast<std::size_t>(i);
        const auto hi = static_cast<std::size_t>(n - 1 - i);
        rule.nodes[lo] = -z;
        rule.nodes[hi] = z;
        rule.weights[lo] = rule.weights[hi] = 2.0 / ((1.0 - z * z) * pp * pp);
    }
    return rule;
}

inline const LegendreRule<16>& legendre16() {
    static const LegendreRule<16> rule = make_legendre_rule<16>();
    return rule;
}

}  // namespace detail

struct SemiInfiniteOptions {
    double rel_tol = 1e-8;
    /// Panel width (in log z) used for the first composite pass.
    double initial_panel_width = 1.0;
    /// Refinement stops with NumericalError past this many panels.
    std::size_t max_panels = std::size_t{1} << 16;
};

struct IntegralResult {
    double value = 0.0;
    double error_estimate = 0.0;
    std::size_t panels = 0;
    double log_lower = 0.0;
    double log_upper = 0.0;
};

/// ∫₀^∞ f(z) dz for integrands that are bounded near 0 and decay at least
/// like e^{-c√z}.
///
/// Works in t = ln z, where such integrands become bell-shaped. The t-window
/// grows until f(e^t)·e^t at both ends is below 1e-16 of the largest value
/// seen, then composite 16-point Gauss-Legendre panels are halved until two
/// successive estimates agree to rel_tol.
template <typename F>
IntegralResult integrate_semi_infinite_detailed(F&& f, const SemiInfiniteOptions& opts = {}) {
    if (!(opts.rel_tol > 0.0)) throw ParameterError("integrate_semi_infinite: rel_tol must be > 0");
    if (!(opts.initial_panel_width > 0.0)) {
        throw ParameterError("integrate_semi_infinite: panel width must be > 0");
    }

    auto g = [&f](double t) {
        const double z = std::exp(t);
        const double v = f(z) * z;
        if (!std::isfinite(v)) {
            throw NumericalError("integrate_semi_infinite: integrand not finite at z = " +
                                     std::to_string(z),
                                 std::numeric_limits<double>::quiet_NaN(),
                                 std::numeric_limits<double>::infinity());
        }
        return v;
    };

    constexpr double kTailRatio = 1e-16;
    constexpr double kScanStep = 0.25;
    constexpr double kGrowStep = 4.0;
    constexpr double kMinT = -700.0;
    constexpr double kMaxT = 700.0;

    double lo = -4.0;
    double hi = 4.0;
    double peak = 0.0;
    for (double t = lo; t <= hi; t += kScanStep) peak = std::max(peak, std::abs(g(t)));
    // Lower tail.
    while (std::abs(g(lo)) > kTailRatio * peak) {
        if (lo <= kMinT) break;
        const double next = std::max(kMinT, lo - kGrowStep);
        for (double t = next; t < lo; t += kScanStep) peak = std::max(peak, std::abs(g(t)));
        lo = next;
    }
    // Upper tail; an integrand still large at the overflow edge cannot be integrated.
    while (std::abs(g(hi)) > kTailRatio * peak) {
        if (hi >= kMaxT) {
            throw NumericalError("integrate_semi_infinite: integrand does not decay",
                                 std::numeric_limits<double>::quiet_NaN(),
                                 std::numeric_limits<double>::infinity());
        }
        const double next = std::min(kMaxT, hi + kGrowStep);
        for (double t = hi + kScanStep; t <= next; t += kScanStep) {
            peak = std::max(peak, std::abs(g(t)));
        }
        hi = next;
    }

    const auto& rule = detail::legendre16();
    auto composite = [&](std::size_t panels) {
        const double width = (hi - lo) / static_cast<double>(panels);
        double sum = 0.0;
        for (std::size_t p = 0; p < panels; ++p) {
            const double mid = lo + (static_cast<double>(p) + 0.5) * width;
            double panel = 0.0;
            for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
                panel += rule.weights[k] * g(mid + 0.5 * width * rule.nodes[k]);
            }
            sum += 0.5 * width * panel;
        }
        return sum;
    };

    std::size_t panels = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil((hi - lo) / opts.initial_panel_width)));
    double previous = composite(panels);
    for (;;) {
        const std::size_t refined = panels * 2;
        const double current = composite(refined);
        const double diff = std::abs(current - previous);
        if (diff <= opts.rel_tol * std::abs(current)) {
            return IntegralResult{current, diff, refined, lo, hi};
        }
        if (refined * 2 > opts.max_panels) {
            throw NumericalError("integrate_semi_infinite: no convergence within panel budget",
                                 current, diff);
        }
        panels = refined;
        previous = current;
    }
}

/// Value-only form of integrate_semi_infinite_detailed.
template <typename F>
double integrate_semi_infinite(F&& f, double rel_tol = 1e-8) {
    SemiInfiniteOptions opts;
    opts.rel_tol = rel_tol;
    return integrate_semi_infinite_detailed(std::forward<F>(f), opts).value;
}

}  // namespace hplc

#endif  // HPLC_SPECFUN_HPP
