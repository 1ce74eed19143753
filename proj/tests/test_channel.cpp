#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "hplc/channel.hpp"
#include "oracles.hpp"

namespace {

using hplc::ChannelSample;
using hplc::HybridSystem;
using hplc::PlcLink;

// α from the indoor defaults, by hand: a₀ + a₁ · f^k.
const double kAlpha = 2.03e-3 + 3.75e-7 * std::pow(500e3, 0.7);

TEST(Attenuation, ZeroConstants) {
    PlcLink link;
    link.atten_a0 = 0.0;
    link.atten_a1 = 0.0;
    EXPECT_EQ(hplc::attenuation_coefficient(link), 0.0);
}

TEST(Attenuation, IndoorDefaults) {
    const PlcLink link;
    EXPECT_NEAR(hplc::attenuation_coefficient(link), kAlpha, 1e-15);
    EXPECT_NEAR(hplc::attenuation_coefficient(link), 5.689e-3, 5e-7);
}

TEST(Attenuation, ZeroFrequencyLeavesA0) {
    PlcLink link;
    link.freq_hz = 0.0;
    EXPECT_EQ(hplc::attenuation_coefficient(link), 2.03e-3);
}

TEST(Attenuation, IncreasingInFrequency) {
    PlcLink link;
    double prev = 0.0;
    for (double f = 1e3; f < 1e8; f *= 2.0) {
        link.freq_hz = f;
        const double a = hplc::attenuation_coefficient(link);
        EXPECT_GT(a, prev);
        prev = a;
    }
}

TEST(AmplitudeGain, Values) {
    EXPECT_EQ(hplc::plc_amplitude_gain(0.37, 0.0), 1.0);
    EXPECT_EQ(hplc::plc_amplitude_gain(0.0, 123.0), 1.0);
    EXPECT_NEAR(hplc::plc_amplitude_gain(5.689e-3, 10.0), 0.9447, 5e-5);
    // exp(-0.28445) = 0.75245...; quoted to four places as 0.7523.
    EXPECT_NEAR(hplc::plc_amplitude_gain(5.689e-3, 50.0), std::exp(-5.689e-3 * 50.0), 1e-15);
    EXPECT_NEAR(hplc::plc_amplitude_gain(5.689e-3, 50.0), 0.7523, 3e-4);
}

TEST(AmplitudeGain, ComposesOverDistance) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> a(0.0, 0.05), d(0.0, 200.0);
    for (int i = 0; i < 1000; ++i) {
        const double alpha = a(rng), d1 = d(rng), d2 = d(rng);
        EXPECT_NEAR(hplc::plc_amplitude_gain(alpha, d1 + d2),
                    hplc::plc_amplitude_gain(alpha, d1) * hplc::plc_amplitude_gain(alpha, d2), 1e-12);
    }
}

TEST(PlcSampler, DegenerateFadingIsDeterministic) {
    PlcLink link;
    link.fading_sigma_db = 0.0;
    link.fading_mu_db = 0.0;
    auto rng = hplc::make_substream(5, 0);
    for (int i = 0; i < 1000; ++i) EXPECT_EQ(hplc::sample_plc_gain(link, rng), 1.0);
    link.fading_mu_db = -5.0;
    for (int i = 0; i < 1000; ++i) EXPECT_DOUBLE_EQ(hplc::sample_plc_gain(link, rng), 0.1);
}

TEST(PlcSampler, DbStatistics) {
    PlcLink link;
    link.fading_sigma_db = 3.0;
    link.fading_mu_db = 0.0;
    auto rng = hplc::make_substream(17, 0);
    const auto stats = oracle::sample_mean(1'000'000, [&] {
        return 10.0 * std::log10(hplc::sample_plc_gain(link, rng));
    });
    EXPECT_NEAR(stats.mean, 0.0, 3.0 * stats.se);
    // sd = se · √n
    const double sd = stats.se * 1000.0;
    EXPECT_NEAR(sd, 6.0, 0.06);
}

TEST(WirelessSampler, MeanAndTail) {
    auto rng = hplc::make_substream(23, 0);
    std::uint64_t above = 0;
    const std::uint64_t n = 1'000'000;
    const auto stats = oracle::sample_mean(n, [&] {
        const double x = hplc::sample_wireless_gain(rng);
        EXPECT_GE(x, 0.0);
        if (x > 1.0) ++above;
        return x;
    });
    EXPECT_NEAR(stats.mean, 1.0, 3.0 * stats.se);
    const double p = std::exp(-1.0);
    const double frac = static_cast<double>(above) / static_cast<double>(n);
    EXPECT_NEAR(frac, p, 3.0 * std::sqrt(p * (1 - p) / static_cast<double>(n)));
}

TEST(WirelessSampler, InverseCdfMedian) {
    EXPECT_NEAR(hplc::exponential_from_uniform(0.5), std::log(2.0), 1e-15);
    EXPECT_EQ(hplc::exponential_from_uniform(0.0), 0.0);
}

TEST(Substreams, ReproducibleAndDistinct) {
    auto a = hplc::make_substream(42, 3);
    auto b = hplc::make_substream(42, 3);
    auto c = hplc::make_substream(42, 4);
    auto d = hplc::make_substream(43, 3);
    const auto va = a();
    EXPECT_EQ(va, b());
    EXPECT_NE(va, c());
    EXPECT_NE(va, d());
}

TEST(HybridSnr, ZeroChannelGivesZero) {
    const HybridSystem sys;
    EXPECT_EQ(hplc::hybrid_snr({0.0, 1.3}, sys), 0.0);
    EXPECT_EQ(hplc::hybrid_snr({1.3, 0.0}, sys), 0.0);
    EXPECT_EQ(hplc::hybrid_snr_relay_form({1.3, 0.0}, sys), 0.0);
}

TEST(HybridSnr, RelayNoiseLimitedRegime) {
    HybridSystem sys;
    sys.wireless.noise_var = 1e-300;
    const ChannelSample s{0.7, 2.0};
    const double limit = sys.src_power_w * std::exp(-2.0 * kAlpha * sys.plc.length_m) * s.hp_sq /
                         sys.plc.noise_var;
    EXPECT_NEAR(hplc::hybrid_snr(s, sys), limit, 1e-12 * limit);
}

HybridSystem random_system(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto log_u = [&](double lo, double hi) { return lo * std::pow(hi / lo, u(rng)); };
    HybridSystem s;
    s.src_power_w = log_u(1e-3, 100.0);
    s.relay_power_w = log_u(1e-3, 100.0);
    s.relay_gain = log_u(1e-2, 1e3);
    s.plc.length_m = 200.0 * u(rng);
    s.plc.noise_var = log_u(1e-4, 1.0);
    s.wireless.dist_m = log_u(0.5, 100.0);
    s.wireless.pathloss_exp = 4.0 * u(rng);
    s.wireless.noise_var = log_u(1e-4, 1.0);
    return s;
}

TEST(HybridSnr, TwoFormsAgree) {
    std::mt19937_64 rng(2);
    std::exponential_distribution<double> ex(1.0);
    std::lognormal_distribution<double> ln(0.0, 1.5);
    for (int i = 0; i < 10'000; ++i) {
        const HybridSystem sys = random_system(rng);
        const ChannelSample s{ln(rng), ex(rng)};
        const double a = hplc::hybrid_snr(s, sys);
        const double b = hplc::hybrid_snr_relay_form(s, sys);
        EXPECT_NEAR(a, b, 1e-12 * std::abs(a)) << i;
    }
}

TEST(HybridSnr, Monotonicity) {
    std::mt19937_64 rng(3);
    std::exponential_distribution<double> ex(1.0);
    std::lognormal_distribution<double> ln(0.0, 1.0);
    for (int i = 0; i < 2000; ++i) {
        const HybridSystem sys = random_system(rng);
        const ChannelSample s{ln(rng), ex(rng)};
        const double base = hplc::hybrid_snr(s, sys);
        auto with = [&](auto mutate) {
            HybridSystem t = sys;
            ChannelSample cs = s;
            mutate(t, cs);
            return hplc::hybrid_snr(cs, t);
        };
        EXPECT_GE(with([](HybridSystem& t, ChannelSample&) { t.src_power_w *= 1.5; }), base);
        EXPECT_GE(with([](HybridSystem& t, ChannelSample&) { t.relay_gain *= 1.5; }), base);
        EXPECT_GE(with([](HybridSystem&, ChannelSample& c) { c.hp_sq *= 1.5; }), base);
        EXPECT_GE(with([](HybridSystem&, ChannelSample& c) { c.hw_sq *= 1.5; }), base);
        EXPECT_LE(with([](HybridSystem& t, ChannelSample&) { t.plc.noise_var *= 1.5; }), base);
        EXPECT_LE(with([](HybridSystem& t, ChannelSample&) { t.wireless.noise_var *= 1.5; }), base);
        EXPECT_LE(with([](HybridSystem& t, ChannelSample&) { t.plc.length_m += 5.0; }), base);
        if (sys.wireless.dist_m > 1.0) {
            EXPECT_LE(with([](HybridSystem& t, ChannelSample&) { t.wireless.dist_m *= 1.5; }), base);
            EXPECT_LE(with([](HybridSystem& t, ChannelSample&) { t.wireless.pathloss_exp += 0.5; }),
                      base);
        }
    }
}

TEST(PlcOnlySnr, Values) {
    PlcLink link;
    link.noise_var = 0.1;
    link.length_m = 0.0;
    EXPECT_EQ(hplc::plc_only_snr(0.0, link, 1.0), 0.0);
    EXPECT_NEAR(hplc::plc_only_snr(1.0, link, 1.0), 10.0, 1e-13);
    link.length_m = 100.0;
    EXPECT_NEAR(hplc::plc_only_snr(1.0, link, 1.0), 10.0 * std::exp(-2.0 * kAlpha * 100.0), 1e-13);
    EXPECT_NEAR(hplc::plc_only_snr(1.0, link, 1.0), 3.205, 1e-3);
}

TEST(Validation, RejectsBadParameters) {
    PlcLink link;
    link.noise_var = 0.0;
    EXPECT_THROW(link.validate(), hplc::ParameterError);
    link = PlcLink{};
    link.fading_sigma_db = -1.0;
    EXPECT_THROW(link.validate(), hplc::ParameterError);
    hplc::WirelessLink wl;
    wl.dist_m = 0.0;
    EXPECT_THROW(wl.validate(), hplc::ParameterError);
    HybridSystem sys;
    sys.relay_gain = -1.0;
    EXPECT_THROW(sys.validate(), hplc::ParameterError);
    sys = HybridSystem{};
    EXPECT_NO_THROW(sys.validate());
}

TEST(GainConvention, DbMapping) {
    EXPECT_NEAR(hplc::relay_gain_from_db(20.0, hplc::GainConvention::amplitude), 10.0, 1e-12);
    EXPECT_NEAR(hplc::relay_gain_from_db(20.0, hplc::GainConvention::power), 100.0, 1e-12);
    EXPECT_EQ(hplc::relay_gain_from_db(0.0, hplc::GainConvention::power), 1.0);
}

}  // namespace
