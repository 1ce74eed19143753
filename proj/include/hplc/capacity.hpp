#ifndef HPLC_CAPACITY_HPP
#define HPLC_CAPACITY_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>
#include <thread>
#include <vector>

#include "hplc/channel.hpp"
#include "hplc/errors.hpp"
#include "hplc/specfun.hpp"

namespace hplc {

enum class Method { analytic, monte_carlo };

inline std::string_view to_string(Method m) {
    return m == Method::analytic ? "analytic" : "monte_carlo";
}

/// Ergodic capacity in bits/s/Hz. Analytic results carry no standard error
/// and zero samples.
struct CapacityEstimate {
    double bits_per_s_per_hz = 0.0;
    Method method = Method::analytic;
    double std_error = 0.0;
    std::uint64_t samples = 0;
};

struct McSettings {
    std::uint64_t n_samples = 1'000'000;
    std::uint64_t seed = 1;
    /// Worker threads; 0 picks the hardware concurrency. Does not affect results.
    unsigned workers = 0;

    void validate() const {
        if (n_samples < 1) throw ParameterError("mc: n_samples must be >= 1");
    }
};

inline constexpr double kDefaultRelTol = 1e-8;

// ---------------------------------------------------------------------------
// Moment generating functions, Laplace convention M_X(z) = E[e^{-zX}]
// ---------------------------------------------------------------------------

namespace detail {

/// Per-node values of K = P_s e^{-2αd₁} |h_P|² at the Hermite abscissae:
/// |h_P|² = 10^{(2√2 σ x_n + 2μ)/10}.
inline std::vector<double> k_node_values(const HybridSystem& sys, const QuadratureRule& rule) {
    const double alpha = attenuation_coefficient(sys.plc);
    const double scale = sys.src_power_w * std::exp(-2.0 * alpha * sys.plc.length_m);
    std::vector<double> values(rule.nodes.size());
    for (std::size_t n = 0; n < rule.nodes.size(); ++n) {
        const double g_db = 2.0 * std::numbers::sqrt2 * sys.plc.fading_sigma_db * rule.nodes[n] +
                            2.0 * sys.plc.fading_mu_db;
        values[n] = scale * std::pow(10.0, g_db / 10.0);
    }
    return values;
}

/// 1 - M_K(z), summed term by term with expm1 so it stays accurate as z → 0.
inline double one_minus_mgf_k(double z, const std::vector<double>& k_values,
                              const QuadratureRule& rule) {
    double sum = 0.0;
    for (std::size_t n = 0; n < k_values.size(); ++n) {
        sum -= rule.weights[n] * std::expm1(-z * k_values[n]);
    }
    return sum / std::sqrt(std::numbers::pi);
}

inline double relay_mgf_scale(const HybridSystem& sys) {
    const double denom = sys.relay_power_w * sys.relay_gain * sys.relay_gain *
                         sys.wireless.path_gain();
    if (!(denom > 0.0)) {
        throw DegenerateRelayError("mgf_lm: relay gain and relay power must be positive");
    }
    return sys.wireless.noise_var / denom;
}

/// e^{∓zσ_r²} · 2√c K₁(2√c) with c = z · scale. flip_sign selects the
/// (wrong) growing exponential and exists only as a negative control.
inline double mgf_lm_scaled(double z, double scale, double relay_noise, bool flip_sign = false) {
    if (z == 0.0) return 1.0;
    const double x = 2.0 * std::sqrt(z * scale);
    const double bessel_part = x * bessel_k1(x);
    const double exponent = flip_sign ? z * relay_noise : -z * relay_noise;
    return std::exp(exponent) * bessel_part;
}

}  // namespace detail

/// M_K(z) for K = P_s e^{-2αd₁} |h_P|², by Gauss-Hermite quadrature over the
/// log-normal fading.
inline double mgf_k(double z, const HybridSystem& sys, const QuadratureRule& rule) {
    if (!(z >= 0.0)) throw ParameterError("mgf_k: z must be >= 0");
    const auto k_values = detail::k_node_values(sys, rule);
    double sum = 0.0;
    for (std::size_t n = 0; n < k_values.size(); ++n) {
        sum += rule.weights[n] * std::exp(-z * k_values[n]);
    }
    return sum / std::sqrt(std::numbers::pi);
}

/// M_{L+M}(z) with L = σ_r² and M = σ_d² / (P_r G² d₂^{-m} |h_w|²), |h_w|² ~ Exp(1).
///
/// For X ~ Exp(1), E[e^{-c/X}] = 2√c K₁(2√c); the second-kind K₁ is the only
/// choice that gives M(0) = 1 and a nonincreasing MGF. Throws
/// DegenerateRelayError when G = 0 or P_r = 0.
inline double mgf_lm(double z, const HybridSystem& sys) {
    if (!(z >= 0.0)) throw ParameterError("mgf_lm: z must be >= 0");
    return detail::mgf_lm_scaled(z, detail::relay_mgf_scale(sys), sys.plc.noise_var);
}

// ---------------------------------------------------------------------------
// Analytic capacity
// ---------------------------------------------------------------------------

struct HybridAnalyticOptions {
    double rel_tol = kDefaultRelTol;
    /// Evaluate the relay MGF with e^{+zσ_r²}. Negative control for validation
    /// tooling; never set this for real results.
    bool flip_relay_noise_sign = false;
};

/// Ergodic capacity of the hybrid link from the MGF form
///   C = 1/(2 ln 2) ∫₀^∞ z⁻¹ (1 - M_K(z)) M_{L+M}(z) dz,
/// which rests on E[ln(1 + u/v)] = ∫₀^∞ z⁻¹ (1 - M_u(z)) M_v(z) dz for
/// non-negative u, v. The ½ is the two-slot half-duplex penalty.
inline CapacityEstimate analytic_hybrid_capacity(const HybridSystem& sys,
                                                 const QuadratureRule& rule,
                                                 const HybridAnalyticOptions& opts) {
    sys.validate();
    CapacityEstimate est;
    est.method = Method::analytic;
    if (sys.src_power_w == 0.0 || sys.relay_gain == 0.0 || sys.relay_power_w == 0.0) return est;

    const auto k_values = detail::k_node_values(sys, rule);
    const double scale = detail::relay_mgf_scale(sys);
    const double relay_noise = sys.plc.noise_var;
    auto integrand = [&](double z) {
        return detail::one_minus_mgf_k(z, k_values, rule) / z *
               detail::mgf_lm_scaled(z, scale, relay_noise, opts.flip_relay_noise_sign);
    };
    SemiInfiniteOptions quad;
    quad.rel_tol = opts.rel_tol;
    const double nats = integrate_semi_infinite_detailed(integrand, quad).value;
    est.bits_per_s_per_hz = std::max(0.0, nats / (2.0 * std::numbers::ln2));
    return est;
}

inline CapacityEstimate analytic_hybrid_capacity(const HybridSystem& sys,
                                                 const QuadratureRule& rule,
                                                 double rel_tol = kDefaultRelTol) {
    HybridAnalyticOptions opts;
    opts.rel_tol = rel_tol;
    return analytic_hybrid_capacity(sys, rule, opts);
}

/// Ergodic capacity of a direct PLC link, E[log₂(1 + a·|h|²)] with
/// a = P_s e^{-2αd}/σ², evaluated as
///   (1/√π) Σ w_n log₂(1 + exp((√8 σ x_n + 2μ + ζ ln a)/ζ)),  ζ = 10/ln 10.
/// Halved when half_duplex is set.
inline CapacityEstimate analytic_plc_capacity(const PlcLink& link, double src_power_w,
                                              const QuadratureRule& rule, bool half_duplex) {
    link.validate();
    if (!(src_power_w >= 0.0)) throw ParameterError("plc capacity: src_power_w must be >= 0");
    CapacityEstimate est;
    est.method = Method::analytic;
    if (src_power_w == 0.0) return est;

    const double snr_scale = plc_only_snr(1.0, link, src_power_w);
    const double factor = half_duplex ? 0.5 : 1.0;
    if (link.fading_sigma_db == 0.0) {
        const double gain = std::pow(10.0, 2.0 * link.fading_mu_db / 10.0);
        est.bits_per_s_per_hz = factor * std::log1p(snr_scale * gain) / std::numbers::ln2;
        return est;
    }

    const double zeta = 10.0 / std::numbers::ln10;
    const double log_scale = std::log(snr_scale);
    double sum = 0.0;
    for (std::size_t n = 0; n < rule.nodes.size(); ++n) {
        const double exponent = (std::sqrt(8.0) * link.fading_sigma_db * rule.nodes[n] +
                                 2.0 * link.fading_mu_db + zeta * log_scale) /
                                zeta;
        sum += rule.weights[n] * std::log1p(std::exp(exponent)) / std::numbers::ln2;
    }
    est.bits_per_s_per_hz = factor * sum / std::sqrt(std::numbers::pi);
    return est;
}

// ---------------------------------------------------------------------------
// Monte Carlo capacity
// ---------------------------------------------------------------------------

namespace detail {

inline constexpr std::uint64_t kMcBlockSize = std::uint64_t{1} << 16;

struct RunningMoments {
    std::uint64_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++count;
        const double delta = x - mean;
        mean += delta / static_cast<double>(count);
        m2 += delta * (x - mean);
    }

    /// Chan et al. pairwise combination; equal means combine exactly.
    void merge(const RunningMoments& other) {
        if (other.count == 0) return;
        if (count == 0) {
            *this = other;
            return;
        }
        const double n = static_cast<double>(count + other.count);
        const double delta = other.mean - mean;
        mean += delta * (static_cast<double>(other.count) / n);
        m2 += other.m2 + delta * delta * (static_cast<double>(count) *
                                          static_cast<double>(other.count) / n);
        count += other.count;
    }
};

inline unsigned resolve_workers(unsigned requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

/// Mean of sample_fn over mc.n_samples draws. Samples are split into fixed
/// blocks, block b drawing from substream (seed, b); block moments are merged
/// in block order, so the result does not depend on the worker count.
template <typename SampleFn>
RunningMoments monte_carlo_mean(const McSettings& mc, SampleFn&& sample_fn) {
    mc.validate();
    const std::uint64_t blocks = (mc.n_samples + kMcBlockSize - 1) / kMcBlockSize;
    std::vector<RunningMoments> partial(blocks);

    auto run_block = [&](std::uint64_t b) {
        RandomStream rng = make_substream(mc.seed, b);
        const std::uint64_t begin = b * kMcBlockSize;
        const std::uint64_t end = std::min(mc.n_samples, begin + kMcBlockSize);
        RunningMoments acc;
        for (std::uint64_t i = begin; i < end; ++i) acc.add(sample_fn(rng));
        partial[b] = acc;
    };

    const unsigned workers =
        static_cast<unsigned>(std::min<std::uint64_t>(resolve_workers(mc.workers), blocks));
    if (workers <= 1) {
        for (std::uint64_t b = 0; b < blocks; ++b) run_block(b);
    } else {
        std::atomic<std::uint64_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::uint64_t b = next++; b < blocks; b = next++) run_block(b);
            });
        }
        for (auto& t : pool) t.join();
    }

    RunningMoments total;
    for (const auto& p : partial) total.merge(p);
    return total;
}

inline CapacityEstimate to_estimate(const RunningMoments& m) {
    CapacityEstimate est;
    est.method = Method::monte_carlo;
    est.samples = m.count;
    est.bits_per_s_per_hz = m.mean;
    if (m.count > 1) {
        const double n = static_cast<double>(m.count);
        est.std_error = std::sqrt(m.m2 / (n - 1.0) / n);
    }
    return est;
}

}  // namespace detail

/// Sample mean of ½ log₂(1 + γ) with γ the end-to-end AF SNR.
inline CapacityEstimate mc_hybrid_capacity(const HybridSystem& sys, const McSettings& mc) {
    sys.validate();
    auto sample = [&sys](RandomStream& rng) {
        ChannelSample s;
        s.hp_sq = sample_plc_gain(sys.plc, rng);
        s.hw_sq = sample_wireless_gain(rng);
        return 0.5 * std::log1p(hybrid_snr(s, sys)) / std::numbers::ln2;
    };
    return detail::to_estimate(detail::monte_carlo_mean(mc, sample));
}

/// Sample mean of log₂(1 + γ) over a direct PLC link, halved if half_duplex.
inline CapacityEstimate mc_plc_capacity(const PlcLink& link, double src_power_w,
                                        const McSettings& mc, bool half_duplex) {
    link.validate();
    if (!(src_power_w >= 0.0)) throw ParameterError("plc capacity: src_power_w must be >= 0");
    const double factor = half_duplex ? 0.5 : 1.0;
    auto sample = [&](RandomStream& rng) {
        const double hp_sq = sample_plc_gain(link, rng);
        return factor * std::log1p(plc_only_snr(hp_sq, link, src_power_w)) / std::numbers::ln2;
    };
    return detail::to_estimate(detail::monte_carlo_mean(mc, sample));
}

/// |analytic - mc| <= max(3·SE, 1% of analytic), the agreement criterion used
/// throughout validation.
inline bool agrees_with_mc(const CapacityEstimate& analytic, const CapacityEstimate& mc,
                           double se_multiple = 3.0, double rel = 0.01) {
    const double diff = std::abs(analytic.bits_per_s_per_hz - mc.bits_per_s_per_hz);
    return diff <= std::max(se_multiple * mc.std_error, rel * analytic.bits_per_s_per_hz);
}

}  // namespace hplc

#endif  // HPLC_CAPACITY_HPP
