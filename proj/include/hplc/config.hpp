#ifndef HPLC_CONFIG_HPP
#define HPLC_CONFIG_HPP

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hplc/capacity.hpp"
#include "hplc/channel.hpp"
#include "hplc/specfun.hpp"

namespace hplc {

/// Bad key, bad value, or unreadable config source. The message names the field.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Every tunable of a run. Defaults reproduce the indoor setup: 500 kHz,
/// k = 0.7, a₀ = 2.03e-3, a₁ = 3.75e-7, d₁ = 10 m, P_s = P_r = 1 W, G = 1,
/// d₂ = 1 m, m = 2, with both noise variances at 0.1 W (10 dB input SNR).
struct Config {
    HybridSystem system;
    /// When set, the relay gain is given in dB and converted with gain_convention.
    std::optional<double> relay_gain_db;
    GainConvention gain_convention = GainConvention::amplitude;
    /// Length of the direct PLC baseline; d₁ + d₂ when unset.
    std::optional<double> plc_only_length_m;
    /// Apply the ½ factor to the direct PLC baseline.
    bool half_duplex = false;
    McSettings mc;
    int quad_order = kDefaultHermiteOrder;
    double rel_tol = kDefaultRelTol;

    HybridSystem effective_system() const {
        HybridSystem sys = system;
        if (relay_gain_db) sys.relay_gain = relay_gain_from_db(*relay_gain_db, gain_convention);
        return sys;
    }

    /// Direct PLC link between source and destination. Its receiver noise is
    /// the destination noise σ_d² of the hybrid system.
    PlcLink plc_only_link() const {
        PlcLink link = system.plc;
        link.length_m = plc_only_length_m.value_or(system.plc.length_m + system.wireless.dist_m);
        link.noise_var = system.wireless.noise_var;
        return link;
    }

    void validate() const {
        try {
            effective_system().validate();
            plc_only_link().validate();
            mc.validate();
        } catch (const ParameterError& e) {
            throw ConfigError(e.what());
        }
        if (quad_order < 1 || quad_order > kMaxHermiteOrder) {
            throw ConfigError("quad-order: must be in [1, 200]");
        }
        if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw ConfigError("rel-tol: must be in (0, 1)");
    }
};

// ---------------------------------------------------------------------------
// Value parsing and formatting
// ---------------------------------------------------------------------------

namespace detail {

inline std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

inline double parse_real(std::string_view key, std::string_view text) {
    const std::string s = trim(text);
    double value = 0.0;
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, value);
    if (s.empty() || ec != std::errc() || ptr != end || !std::isfinite(value)) {
        throw ConfigError(std::string(key) + ": expected a real number, got '" + s + "'");
    }
    return value;
}

inline std::uint64_t parse_count(std::string_view key, std::string_view text) {
    const double value = parse_real(key, text);
    if (value < 0.0 || value != std::floor(value) || value > 9007199254740992.0) {
        throw ConfigError(std::string(key) + ": expected a non-negative integer, got '" +
                          trim(text) + "'");
    }
    return static_cast<std::uint64_t>(value);
}

inline std::uint64_t parse_u64(std::string_view key, std::string_view text) {
    const std::string s = trim(text);
    std::uint64_t value = 0;
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, value);
    if (s.empty() || ec != std::errc() || ptr != end) {
        throw ConfigError(std::string(key) + ": expected an unsigned 64-bit integer, got '" + s +
                          "'");
    }
    return value;
}

inline bool parse_bool(std::string_view key, std::string_view text) {
    std::string s = trim(text);
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw ConfigError(std::string(key) + ": expected true/false, got '" + s + "'");
}

/// Shortest text that parses back to exactly v.
inline std::string format_real(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ec == std::errc() ? ptr : buf);
}

/// Config keys are case-insensitive and treat '_' and '-' alike.
inline std::string normalize_key(std::string_view key) {
    std::string out = trim(key);
    for (auto& c : out) {
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        if (c == '_') c = '-';
    }
    return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Key table
// ---------------------------------------------------------------------------

struct ConfigKey {
    std::string name;
    std::string help;
    std::function<void(Config&, std::string_view)> set;
    /// Current value, or nullopt when the key is inactive (e.g. relay-gain-db unset).
    std::function<std::optional<std::string>(const Config&)> get;
};

inline const std::vector<ConfigKey>& config_keys() {
    using detail::format_real;
    using detail::parse_real;
    auto real = [](std::string name, std::string help, double HybridSystem::*outer) {
        return ConfigKey{
            name, std::move(help),
            [name, outer](Config& c, std::string_view v) { c.system.*outer = parse_real(name, v); },
            [outer](const Config& c) -> std::optional<std::string> {
                return format_real(c.system.*outer);
            }};
    };
    auto plc = [](std::string name, std::string help, double PlcLink::*field) {
        return ConfigKey{
            name, std::move(help),
            [name, field](Config& c, std::string_view v) {
                c.system.plc.*field = parse_real(name, v);
            },
            [field](const Config& c) -> std::optional<std::string> {
                return format_real(c.system.plc.*field);
            }};
    };
    auto wl = [](std::string name, std::string help, double WirelessLink::*field) {
        return ConfigKey{
            name, std::move(help),
            [name, field](Config& c, std::string_view v) {
                c.system.wireless.*field = parse_real(name, v);
            },
            [field](const Config& c) -> std::optional<std::string> {
                return format_real(c.system.wireless.*field);
            }};
    };

    static const std::vector<ConfigKey> keys = [&] {
        std::vector<ConfigKey> k;
        k.push_back(plc("freq-hz", "PLC operating frequency f [Hz]", &PlcLink::freq_hz));
        k.push_back(plc("atten-k", "attenuation exponent k", &PlcLink::atten_k));
        k.push_back(plc("atten-a0", "attenuation constant a0 [Np/m]", &PlcLink::atten_a0));
        k.push_back(plc("atten-a1", "attenuation constant a1 [Np/m/Hz^k]", &PlcLink::atten_a1));
        k.push_back(plc("plc-length", "source-to-relay cable length d1 [m]", &PlcLink::length_m));
        k.push_back(plc("fading-mu-db", "mean of 10log10|h_P| [dB]", &PlcLink::fading_mu_db));
        k.push_back(plc("fading-sigma-db", "std of 10log10|h_P| [dB]",
                        &PlcLink::fading_sigma_db));
        k.push_back(plc("relay-noise-var", "relay noise variance sigma_r^2 [W]",
                        &PlcLink::noise_var));
        k.push_back(wl("wireless-dist", "relay-to-destination distance d2 [m]",
                       &WirelessLink::dist_m));
        k.push_back(wl("pathloss-exp", "wireless path-loss exponent m", &WirelessLink::pathloss_exp));
        k.push_back(wl("dest-noise-var", "destination noise variance sigma_d^2 [W]",
                       &WirelessLink::noise_var));
        k.push_back(real("src-power", "source transmit power P_s [W]", &HybridSystem::src_power_w));
        k.push_back(real("relay-power", "relay transmit power P_r [W]",
                         &HybridSystem::relay_power_w));
        k.push_back(ConfigKey{
            "relay-gain", "relay gain G, linear amplitude",
            [](Config& c, std::string_view v) {
                c.system.relay_gain = parse_real("relay-gain", v);
                c.relay_gain_db.reset();
            },
            [](const Config& c) -> std::optional<std::string> {
                if (c.relay_gain_db) return std::nullopt;
                return format_real(c.system.relay_gain);
            }});
        k.push_back(ConfigKey{
            "relay-gain-db", "relay gain in dB (see gain-convention)",
            [](Config& c, std::string_view v) { c.relay_gain_db = parse_real("relay-gain-db", v); },
            [](const Config& c) -> std::optional<std::string> {
                if (!c.relay_gain_db) return std::nullopt;
                return format_real(*c.relay_gain_db);
            }});
        k.push_back(ConfigKey{
            "gain-convention", "dB-to-linear relay gain mapping: amplitude | power",
            [](Config& c, std::string_view v) {
                const std::string s = detail::normalize_key(v);
                if (s == "amplitude") {
                    c.gain_convention = GainConvention::amplitude;
                } else if (s == "power") {
                    c.gain_convention = GainConvention::power;
                } else {
                    throw ConfigError("gain-convention: expected amplitude or power, got '" +
                                      std::string(v) + "'");
                }
            },
            [](const Config& c) -> std::optional<std::string> {
                return c.gain_convention == GainConvention::amplitude ? "amplitude" : "power";
            }});
        k.push_back(ConfigKey{
            "plc-only-length", "direct PLC baseline length [m] (default d1 + d2)",
            [](Config& c, std::string_view v) {
                c.plc_only_length_m = parse_real("plc-only-length", v);
            },
            [](const Config& c) -> std::optional<std::string> {
                if (!c.plc_only_length_m) return std::nullopt;
                return format_real(*c.plc_only_length_m);
            }});
        k.push_back(ConfigKey{
            "half-duplex", "apply the 1/2 factor to the direct PLC baseline",
            [](Config& c, std::string_view v) { c.half_duplex = detail::parse_bool("half-duplex", v); },
            [](const Config& c) -> std::optional<std::string> {
                return c.half_duplex ? "true" : "false";
            }});
        k.push_back(ConfigKey{
            "mc-samples", "Monte Carlo sample count",
            [](Config& c, std::string_view v) { c.mc.n_samples = detail::parse_count("mc-samples", v); },
            [](const Config& c) -> std::optional<std::string> {
                return std::to_string(c.mc.n_samples);
            }});
        k.push_back(ConfigKey{
            "seed", "Monte Carlo seed",
            [](Config& c, std::string_view v) { c.mc.seed = detail::parse_u64("seed", v); },
            [](const Config& c) -> std::optional<std::string> { return std::to_string(c.mc.seed); }});
        k.push_back(ConfigKey{
            "workers", "worker threads (0 = all cores); never changes results",
            [](Config& c, std::string_view v) {
                const auto w = detail::parse_count("workers", v);
                if (w > 4096) throw ConfigError("workers: at most 4096");
                c.mc.workers = static_cast<unsigned>(w);
            },
            [](const Config& c) -> std::optional<std::string> {
                return std::to_string(c.mc.workers);
            }});
        k.push_back(ConfigKey{
            "quad-order", "Gauss-Hermite order N_p",
            [](Config& c, std::string_view v) {
                const auto n = detail::parse_count("quad-order", v);
                if (n < 1 || n > static_cast<std::uint64_t>(kMaxHermiteOrder)) {
                    throw ConfigError("quad-order: must be in [1, 200]");
                }
                c.quad_order = static_cast<int>(n);
            },
            [](const Config& c) -> std::optional<std::string> {
                return std::to_string(c.quad_order);
            }});
        k.push_back(ConfigKey{
            "rel-tol", "relative tolerance of the capacity integral",
            [](Config& c, std::string_view v) { c.rel_tol = parse_real("rel-tol", v); },
            [](const Config& c) -> std::optional<std::string> { return format_real(c.rel_tol); }});
        return k;
    }();
    return keys;
}

inline const ConfigKey* find_config_key(std::string_view name) {
    const std::string norm = detail::normalize_key(name);
    for (const auto& k : config_keys()) {
        if (k.name == norm) return &k;
    }
    return nullptr;
}

// ---------------------------------------------------------------------------
// Config sources
// ---------------------------------------------------------------------------

/// One `key = value` assignment and where it came from.
struct ConfigEntry {
    std::string key;
    std::string value;
    std::string origin;
};

/// Parses the flat `key = value` format. `#` starts a comment; blank lines
/// are ignored. Keys are normalized but not checked here.
inline std::vector<ConfigEntry> parse_config_text(std::string_view text,
                                                  std::string_view source = "<text>") {
    std::vector<ConfigEntry> entries;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string body = detail::trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        const std::string where = std::string(source) + ":" + std::to_string(lineno);
        if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
        std::string key = detail::normalize_key(body.substr(0, eq));
        std::string value = detail::trim(body.substr(eq + 1));
        if (key.empty()) throw ConfigError(where + ": empty key");
        entries.push_back({std::move(key), std::move(value), where});
    }
    return entries;
}

inline std::vector<ConfigEntry> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

/// Applies one layer of assignments on top of cfg. Later entries win. Within a
/// layer, giving both relay-gain and relay-gain-db is an error.
inline void apply_config_entries(Config& cfg, const std::vector<ConfigEntry>& entries) {
    bool linear_gain = false;
    bool db_gain = false;
    for (const auto& e : entries) {
        const ConfigKey* key = find_config_key(e.key);
        if (key == nullptr) throw ConfigError(e.origin + ": unknown key '" + e.key + "'");
        if (key->name == "relay-gain") linear_gain = true;
        if (key->name == "relay-gain-db") db_gain = true;
        if (linear_gain && db_gain) {
            throw ConfigError(e.origin + ": relay-gain and relay-gain-db are mutually exclusive");
        }
        try {
            key->set(cfg, e.value);
        } catch (const ConfigError& err) {
            throw ConfigError(e.origin + ": " + err.what());
        }
    }
}

/// Every active key in table order; parse_config_text + apply_config_entries
/// on this text reproduces the same effective configuration.
inline std::string dump_config(const Config& cfg) {
    std::string out;
    for (const auto& k : config_keys()) {
        if (auto v = k.get(cfg)) out += k.name + " = " + *v + "\n";
    }
    return out;
}

}  // namespace hplc

#endif  // HPLC_CONFIG_HPP
