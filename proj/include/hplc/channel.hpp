#ifndef HPLC_CHANNEL_HPP
#define HPLC_CHANNEL_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>

#include "hplc/errors.hpp"

namespace hplc {

/// Source-to-relay power-line hop (or the whole path for a PLC-only link).
///
/// Cable loss follows α = a₀ + a₁ f^k nepers per meter. The fading amplitude
/// |h| is log-normal: 10·log₁₀|h| ~ N(μ, σ²) in dB, so |h|² has dB mean 2μ
/// and dB standard deviation 2σ.
struct PlcLink {
    double freq_hz = 500e3;
    double atten_k = 0.7;
    double atten_a0 = 2.03e-3;
    double atten_a1 = 3.75e-7;
    double length_m = 10.0;
    double fading_mu_db = 0.0;
    double fading_sigma_db = 3.0;
    /// Noise variance at the receiving end of this hop (the relay in the hybrid system).
    double noise_var = 0.1;

    void validate() const {
        if (!(freq_hz > 0.0)) throw ParameterError("plc: freq_hz must be > 0");
        if (!(length_m >= 0.0)) throw ParameterError("plc: length_m must be >= 0");
        if (!(atten_a0 >= 0.0)) throw ParameterError("plc: atten_a0 must be >= 0");
        if (!(atten_a1 >= 0.0)) throw ParameterError("plc: atten_a1 must be >= 0");
        if (!std::isfinite(atten_k)) throw ParameterError("plc: atten_k must be finite");
        if (!std::isfinite(fading_mu_db)) throw ParameterError("plc: fading_mu_db must be finite");
        if (!(fading_sigma_db >= 0.0)) throw ParameterError("plc: fading_sigma_db must be >= 0");
        if (!(noise_var > 0.0)) throw ParameterError("plc: noise_var must be > 0");
    }
};

/// Relay-to-destination wireless hop with unit-mean Rayleigh fading.
struct WirelessLink {
    double dist_m = 1.0;
    double pathloss_exp = 2.0;
    double noise_var = 0.1;

    void validate() const {
        if (!(dist_m > 0.0)) throw ParameterError("wireless: dist_m must be > 0");
        if (!(pathloss_exp >= 0.0)) throw ParameterError("wireless: pathloss_exp must be >= 0");
        if (!(noise_var > 0.0)) throw ParameterError("wireless: noise_var must be > 0");
    }

    /// d^{-m}, the power path gain.
    double path_gain() const { return std::pow(dist_m, -pathloss_exp); }
};

/// Source → PLC → amplify-and-forward relay → wireless → destination.
/// relay_gain is a linear amplitude multiplier.
struct HybridSystem {
    double src_power_w = 1.0;
    double relay_power_w = 1.0;
    double relay_gain = 1.0;
    PlcLink plc;
    WirelessLink wireless;

    void validate() const {
        if (!(src_power_w >= 0.0)) throw ParameterError("system: src_power_w must be >= 0");
        if (!(relay_power_w >= 0.0)) throw ParameterError("system: relay_power_w must be >= 0");
        if (!(relay_gain >= 0.0)) throw ParameterError("system: relay_gain must be >= 0");
        plc.validate();
        wireless.validate();
    }
};

struct ChannelSample {
    double hp_sq = 1.0;
    double hw_sq = 1.0;
};

/// How a relay gain quoted in dB maps to the linear amplitude factor G.
enum class GainConvention {
    amplitude,  ///< G = 10^{dB/20}
    power,      ///< G = 10^{dB/10}
};

inline double relay_gain_from_db(double gain_db, GainConvention convention) {
    return convention == GainConvention::amplitude ? std::pow(10.0, gain_db / 20.0)
                                                   : std::pow(10.0, gain_db / 10.0);
}

/// α = a₀ + a₁ f^k in nepers per meter.
inline double attenuation_coefficient(const PlcLink& link) {
    return link.atten_a0 + link.atten_a1 * std::pow(link.freq_hz, link.atten_k);
}

/// E|h|² of the log-normal fading: 10^{2μ/10} · exp(½ (2σ ln10 / 10)²).
inline double mean_plc_power_gain(const PlcLink& link) {
    const double s = 2.0 * link.fading_sigma_db * std::log(10.0) / 10.0;
    return std::pow(10.0, 2.0 * link.fading_mu_db / 10.0) * std::exp(0.5 * s * s);
}

/// e^{-α d}, the deterministic amplitude gain of a cable of length d.
inline double plc_amplitude_gain(double alpha, double d) { return std::exp(-alpha * d); }

// ---------------------------------------------------------------------------
// Random streams
// ---------------------------------------------------------------------------

/// Engine used for every sampler in the library.
using RandomStream = std::mt19937_64;

/// Independent substream keyed by (seed, index). The same pair always yields
/// the same sequence, which is what makes parallel sampling reproducible.
inline RandomStream make_substream(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                      0x68706c63u};
    return RandomStream(seq);
}

/// Uniform on [0, 1) with 53 random bits.
template <typename Urbg>
double uniform01(Urbg& rng) {
    static_assert(Urbg::min() == 0 && Urbg::max() == std::numeric_limits<std::uint64_t>::max(),
                  "uniform01 needs a full 64-bit engine");
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Inverse CDF of Exp(1): -ln(1 - u).
inline double exponential_from_uniform(double u) { return -std::log1p(-u); }

/// One draw of |h_P|²: 10^{g/10} with g ~ N(2μ, (2σ)²) dB.
template <typename Urbg>
double sample_plc_gain(const PlcLink& link, Urbg& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    const double g_db = 2.0 * link.fading_mu_db + 2.0 * link.fading_sigma_db * normal(rng);
    return std::pow(10.0, g_db / 10.0);
}

/// One draw of |h_w|² ~ Exp(1), i.e. |h_w| Rayleigh with E|h_w|² = 1.
template <typename Urbg>
double sample_wireless_gain(Urbg& rng) {
    return exponential_from_uniform(uniform01(rng));
}

// ---------------------------------------------------------------------------
// Instantaneous SNR
// ---------------------------------------------------------------------------

/// End-to-end SNR of the AF relay link:
///   γ = G² P_r d₂^{-m} P_s e^{-2αd₁} |h_P|² |h_w|² / (G² P_r d₂^{-m} |h_w|² σ_r² + σ_d²).
inline double hybrid_snr(const ChannelSample& sample, const HybridSystem& sys) {
    const double alpha = attenuation_coefficient(sys.plc);
    const double relay_path = sys.relay_gain * sys.relay_gain * sys.relay_power_w *
                              sys.wireless.path_gain() * sample.hw_sq;
    const double received = sys.src_power_w * std::exp(-2.0 * alpha * sys.plc.length_m) *
                            sample.hp_sq;
    return relay_path * received / (relay_path * sys.plc.noise_var + sys.wireless.noise_var);
}

/// The same SNR written as K / (L + M) with K the relay-input signal power,
/// L = σ_r² and M = σ_d² / (P_r G² d₂^{-m} |h_w|²).
inline double hybrid_snr_relay_form(const ChannelSample& sample, const HybridSystem& sys) {
    const double alpha = attenuation_coefficient(sys.plc);
    const double k = sys.src_power_w * std::exp(-2.0 * alpha * sys.plc.length_m) * sample.hp_sq;
    const double m = sys.wireless.noise_var /
                     (sys.relay_power_w * sys.relay_gain * sys.relay_gain *
                      sys.wireless.path_gain() * sample.hw_sq);
    return k / (sys.plc.noise_var + m);
}

/// SNR of a direct PLC link: P_s e^{-2αd} |h|² / σ².
inline double plc_only_snr(double hp_sq, const PlcLink& link, double src_power_w) {
    const double alpha = attenuation_coefficient(link);
    return src_power_w * std::exp(-2.0 * alpha * link.length_m) * hp_sq / link.noise_var;
}

}  // namespace hplc

#endif  // HPLC_CHANNEL_HPP
