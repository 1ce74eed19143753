#ifndef HPLC_EXPERIMENTS_HPP
#define HPLC_EXPERIMENTS_HPP

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "hplc/capacity.hpp"
#include "hplc/config.hpp"
#include "hplc/specfun.hpp"

namespace hplc {

/// Quantities a sweep can vary, along the x axis or across curves.
enum class SweepParam {
    src_power_w,
    relay_power_w,
    relay_gain_db,
    plc_length,
    dist_d2,
    pathloss_exp,
    total_distance,
    relay_noise_var,
    dest_noise_var,
    fading_sigma_db,
    fading_mu_db,
};

enum class SweepMethod { analytic, monte_carlo, plc_only_analytic };

inline constexpr std::array<std::pair<SweepParam, std::string_view>, 11> kSweepParamNames{{
    {SweepParam::src_power_w, "src_power_w"},
    {SweepParam::relay_power_w, "relay_power_w"},
    {SweepParam::relay_gain_db, "relay_gain_db"},
    {SweepParam::plc_length, "plc_length"},
    {SweepParam::dist_d2, "dist_d2"},
    {SweepParam::pathloss_exp, "pathloss_exp"},
    {SweepParam::total_distance, "total_distance"},
    {SweepParam::relay_noise_var, "relay_noise_var"},
    {SweepParam::dest_noise_var, "dest_noise_var"},
    {SweepParam::fading_sigma_db, "fading_sigma_db"},
    {SweepParam::fading_mu_db, "fading_mu_db"},
}};

inline std::string_view to_string(SweepParam p) {
    for (const auto& [param, name] : kSweepParamNames) {
        if (param == p) return name;
    }
    return "?";
}

inline std::optional<SweepParam> parse_sweep_param(std::string_view text) {
    std::string s(text);
    std::replace(s.begin(), s.end(), '-', '_');
    for (const auto& [param, name] : kSweepParamNames) {
        if (name == s) return param;
    }
    return std::nullopt;
}

inline std::string_view to_string(SweepMethod m) {
    switch (m) {
        case SweepMethod::analytic: return "analytic";
        case SweepMethod::monte_carlo: return "monte_carlo";
        case SweepMethod::plc_only_analytic: return "plc_only_analytic";
    }
    return "?";
}

inline std::optional<SweepMethod> parse_sweep_method(std::string_view text) {
    for (auto m : {SweepMethod::analytic, SweepMethod::monte_carlo, SweepMethod::plc_only_analytic}) {
        if (to_string(m) == text) return m;
    }
    return std::nullopt;
}

/// Axis label with units, for plots.
inline std::string axis_label(SweepParam p) {
    switch (p) {
        case SweepParam::src_power_w: return "source power P_s (W)";
        case SweepParam::relay_power_w: return "relay power P_r (W)";
        case SweepParam::relay_gain_db: return "relay gain (dB)";
        case SweepParam::plc_length: return "source-relay distance d1 (m)";
        case SweepParam::dist_d2: return "relay-destination distance d2 (m)";
        case SweepParam::pathloss_exp: return "path-loss exponent m";
        case SweepParam::total_distance: return "source-destination distance (m)";
        case SweepParam::relay_noise_var: return "relay noise variance (W)";
        case SweepParam::dest_noise_var: return "destination noise variance (W)";
        case SweepParam::fading_sigma_db: return "fading sigma (dB)";
        case SweepParam::fading_mu_db: return "fading mu (dB)";
    }
    return "?";
}

/// Sets one swept parameter. total_distance puts the relay half way
/// (d₁ = d₂ = d/2) and runs the direct PLC baseline over the full d.
inline Config apply_sweep_param(Config cfg, SweepParam p, double value) {
    switch (p) {
        case SweepParam::src_power_w: cfg.system.src_power_w = value; break;
        case SweepParam::relay_power_w: cfg.system.relay_power_w = value; break;
        case SweepParam::relay_gain_db: cfg.relay_gain_db = value; break;
        case SweepParam::plc_length: cfg.system.plc.length_m = value; break;
        case SweepParam::dist_d2: cfg.system.wireless.dist_m = value; break;
        case SweepParam::pathloss_exp: cfg.system.wireless.pathloss_exp = value; break;
        case SweepParam::total_distance:
            cfg.system.plc.length_m = 0.5 * value;
            cfg.system.wireless.dist_m = 0.5 * value;
            cfg.plc_only_length_m = value;
            break;
        case SweepParam::relay_noise_var: cfg.system.plc.noise_var = value; break;
        case SweepParam::dest_noise_var: cfg.system.wireless.noise_var = value; break;
        case SweepParam::fading_sigma_db: cfg.system.plc.fading_sigma_db = value; break;
        case SweepParam::fading_mu_db: cfg.system.plc.fading_mu_db = value; break;
    }
    return cfg;
}

struct SweepSpec {
    std::string name = "custom";
    Config base;
    SweepParam axis = SweepParam::src_power_w;
    std::vector<double> grid;
    std::optional<SweepParam> family;
    std::vector<double> family_values;
    std::vector<SweepMethod> methods{SweepMethod::analytic};

    void validate() const {
        if (grid.empty()) throw ConfigError("sweep: grid is empty");
        for (std::size_t i = 1; i < grid.size(); ++i) {
            if (!(grid[i] > grid[i - 1])) throw ConfigError("sweep: grid must be strictly increasing");
        }
        if (family) {
            if (family_values.empty()) throw ConfigError("sweep: family has no values");
            if (*family == axis) throw ConfigError("sweep: family must differ from the axis");
            for (std::size_t i = 0; i < family_values.size(); ++i) {
                for (std::size_t j = i + 1; j < family_values.size(); ++j) {
                    if (family_values[i] == family_values[j]) {
                        throw ConfigError("sweep: family values must be distinct");
                    }
                }
            }
        } else if (!family_values.empty()) {
            throw ConfigError("sweep: family values given without a family parameter");
        }
        if (methods.empty()) throw ConfigError("sweep: no methods selected");
        base.validate();
    }
};

struct SweepRow {
    double axis_value = 0.0;
    std::optional<double> family_value;
    SweepMethod method = SweepMethod::analytic;
    double capacity = 0.0;
    double std_error = 0.0;
    /// Non-empty when evaluation failed; capacity and std_error are NaN then.
    std::string error;
};

struct SweepResult {
    std::string name;
    SweepParam axis = SweepParam::src_power_w;
    std::optional<SweepParam> family;
    std::vector<SweepRow> rows;

    bool has_errors() const {
        return std::any_of(rows.begin(), rows.end(), [](const SweepRow& r) { return !r.error.empty(); });
    }
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline SweepRow evaluate_point(const Config& cfg, SweepMethod method, const QuadratureRule& rule,
                               std::uint64_t point_seed, unsigned mc_workers) {
    SweepRow row;
    row.method = method;
    try {
        cfg.validate();
        CapacityEstimate est;
        switch (method) {
            case SweepMethod::analytic:
                est = analytic_hybrid_capacity(cfg.effective_system(), rule, cfg.rel_tol);
                break;
            case SweepMethod::monte_carlo: {
                McSettings mc = cfg.mc;
                mc.seed = point_seed;
                mc.workers = mc_workers;
                est = mc_hybrid_capacity(cfg.effective_system(), mc);
                break;
            }
            case SweepMethod::plc_only_analytic:
                est = analytic_plc_capacity(cfg.plc_only_link(), cfg.system.src_power_w, rule,
                                            cfg.half_duplex);
                break;
        }
        row.capacity = est.bits_per_s_per_hz;
        row.std_error = est.std_error;
    } catch (const std::exception& e) {
        row.capacity = std::numeric_limits<double>::quiet_NaN();
        row.std_error = std::numeric_limits<double>::quiet_NaN();
        row.error = e.what();
    }
    return row;
}

}  // namespace detail

/// Evaluates every (grid point, family value, method) combination.
///
/// Rows come out ordered by grid point, then family value, then method, in
/// the order the spec lists them. Grid points run in parallel; Monte Carlo
/// point k uses the seed splitmix64(seed + k), so output never depends on the
/// evaluation order or worker count. Failures annotate their row and the
/// sweep carries on.
inline SweepResult run_sweep(const SweepSpec& spec) {
    spec.validate();
    const QuadratureRule rule = gauss_hermite(spec.base.quad_order);
    const std::vector<std::optional<double>> families = [&] {
        std::vector<std::optional<double>> f;
        if (spec.family) {
            for (double v : spec.family_values) f.emplace_back(v);
        } else {
            f.emplace_back(std::nullopt);
        }
        return f;
    }();

    const std::size_t per_point = families.size() * spec.methods.size();
    SweepResult result;
    result.name = spec.name;
    result.axis = spec.axis;
    result.family = spec.family;
    result.rows.resize(spec.grid.size() * per_point);

    const unsigned workers = detail::resolve_workers(spec.base.mc.workers);
    auto run_task = [&](std::size_t task, unsigned mc_workers) {
        const std::size_t gi = task / per_point;
        const std::size_t fi = (task % per_point) / spec.methods.size();
        const std::size_t mi = task % spec.methods.size();
        Config cfg = apply_sweep_param(spec.base, spec.axis, spec.grid[gi]);
        if (spec.family) cfg = apply_sweep_param(cfg, *spec.family, *families[fi]);
        const std::uint64_t point = gi * families.size() + fi;
        SweepRow row = detail::evaluate_point(cfg, spec.methods[mi], rule,
                                              detail::splitmix64(spec.base.mc.seed + point),
                                              mc_workers);
        row.axis_value = spec.grid[gi];
        row.family_value = families[fi];
        result.rows[task] = std::move(row);
    };

    const std::size_t tasks = result.rows.size();
    if (workers <= 1 || tasks == 1) {
        for (std::size_t t = 0; t < tasks; ++t) run_task(t, workers);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        const unsigned n = static_cast<unsigned>(std::min<std::size_t>(workers, tasks));
        for (unsigned w = 0; w < n; ++w) {
            pool.emplace_back([&] {
                for (std::size_t t = next++; t < tasks; t = next++) run_task(t, 1);
            });
        }
        for (auto& t : pool) t.join();
    }
    return result;
}

// ---------------------------------------------------------------------------
// Presets
// ---------------------------------------------------------------------------

inline constexpr std::array<std::string_view, 4> kPresetNames{"fig2", "fig3", "fig4", "fig5"};

inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> v(n);
    if (n == 1) {
        v[0] = lo;
        return v;
    }
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    v.back() = hi;
    return v;
}

inline std::vector<double> logspace(double lo, double hi, std::size_t n) {
    std::vector<double> v = linspace(std::log10(lo), std::log10(hi), n);
    for (auto& x : v) x = std::pow(10.0, x);
    v.front() = lo;
    v.back() = hi;
    return v;
}

/// Built-in sweeps mirroring the four indoor experiments:
///   fig2  capacity vs P_s ∈ [0.01, 10] W (log), curves d₁ ∈ {1, 10, 50} m
///   fig3  capacity vs d₂ ∈ [1, 30] m, curves m ∈ {2, 2.5, 3, 3.5}
///   fig4  capacity vs G ∈ [1, 20] dB, curves d₂ ∈ {2, 5, 10} m
///   fig5  hybrid vs direct PLC over total distance ∈ [20, 500] m,
///         curves G ∈ {0, 10, 20} dB (power convention), σ_r² = 0.01, σ_d² = 0.1
/// The base config of each preset starts from the library defaults.
inline std::optional<SweepSpec> make_preset(std::string_view name, std::size_t points = 20) {
    SweepSpec spec;
    spec.name = std::string(name);
    if (name == "fig2") {
        spec.axis = SweepParam::src_power_w;
        spec.grid = logspace(0.01, 10.0, points);
        spec.family = SweepParam::plc_length;
        spec.family_values = {1.0, 10.0, 50.0};
    } else if (name == "fig3") {
        spec.axis = SweepParam::dist_d2;
        spec.grid = linspace(1.0, 30.0, points);
        spec.family = SweepParam::pathloss_exp;
        spec.family_values = {2.0, 2.5, 3.0, 3.5};
    } else if (name == "fig4") {
        spec.axis = SweepParam::relay_gain_db;
        spec.grid = linspace(1.0, 20.0, points);
        spec.family = SweepParam::dist_d2;
        spec.family_values = {2.0, 5.0, 10.0};
    } else if (name == "fig5") {
        spec.axis = SweepParam::total_distance;
        spec.grid = linspace(20.0, 500.0, points);
        spec.family = SweepParam::relay_gain_db;
        spec.family_values = {0.0, 10.0, 20.0};
        spec.methods = {SweepMethod::analytic, SweepMethod::plc_only_analytic};
        spec.base.system.plc.noise_var = 0.01;
        spec.base.system.wireless.noise_var = 0.1;
        spec.base.system.wireless.pathloss_exp = 2.0;
        spec.base.gain_convention = GainConvention::power;
    } else {
        return std::nullopt;
    }
    return spec;
}

/// Assigns the sweep-only keys of a custom spec file; returns false for keys
/// that belong to the run config instead.
///   name, axis, family, methods (comma list), grid (comma list),
///   grid-min / grid-max / grid-points / grid-scale (linear | log), family-values
struct SweepFileKeys {
    std::optional<std::string> name;
    std::optional<SweepParam> axis;
    std::optional<SweepParam> family;
    std::vector<double> grid;
    std::optional<double> grid_min;
    std::optional<double> grid_max;
    std::optional<std::size_t> grid_points;
    bool grid_log = false;
    std::vector<double> family_values;
    std::vector<SweepMethod> methods;
};

inline std::vector<std::string> split_list(std::string_view text) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in{std::string(text)};
    while (std::getline(in, item, ',')) {
        const std::string t = detail::trim(item);
        if (!t.empty()) out.push_back(t);
    }
    return out;
}

inline std::vector<double> parse_real_list(std::string_view key, std::string_view text) {
    std::vector<double> out;
    for (const auto& s : split_list(text)) out.push_back(detail::parse_real(key, s));
    return out;
}

inline std::vector<SweepMethod> parse_method_list(std::string_view text) {
    std::vector<SweepMethod> out;
    for (const auto& s : split_list(text)) {
        auto m = parse_sweep_method(s);
        if (!m) {
            throw ConfigError("methods: unknown method '" + s +
                              "' (analytic, monte_carlo, plc_only_analytic)");
        }
        out.push_back(*m);
    }
    return out;
}

/// Builds a custom sweep from a spec file: sweep keys plus any config keys.
/// base is the starting config (defaults, typically).
inline SweepSpec sweep_spec_from_entries(const std::vector<ConfigEntry>& entries, Config base) {
    SweepFileKeys keys;
    std::vector<ConfigEntry> config_entries;
    for (const auto& e : entries) {
        auto fail = [&](const std::string& msg) { throw ConfigError(e.origin + ": " + msg); };
        auto param = [&]() {
            auto p = parse_sweep_param(e.value);
            if (!p) fail(e.key + ": unknown parameter '" + e.value + "'");
            return *p;
        };
        try {
            if (e.key == "name") {
                keys.name = e.value;
            } else if (e.key == "axis") {
                keys.axis = param();
            } else if (e.key == "family") {
                keys.family = param();
            } else if (e.key == "grid") {
                keys.grid = parse_real_list("grid", e.value);
            } else if (e.key == "grid-min") {
                keys.grid_min = detail::parse_real("grid-min", e.value);
            } else if (e.key == "grid-max") {
                keys.grid_max = detail::parse_real("grid-max", e.value);
            } else if (e.key == "grid-points") {
                keys.grid_points = detail::parse_count("grid-points", e.value);
            } else if (e.key == "grid-scale") {
                if (e.value != "linear" && e.value != "log") fail("grid-scale: linear or log");
                keys.grid_log = e.value == "log";
            } else if (e.key == "family-values") {
                keys.family_values = parse_real_list("family-values", e.value);
            } else if (e.key == "methods") {
                keys.methods = parse_method_list(e.value);
            } else {
                config_entries.push_back(e);
            }
        } catch (const ConfigError& err) {
            const std::string msg = err.what();
            if (msg.rfind(e.origin, 0) == 0) throw;
            fail(msg);
        }
    }

    SweepSpec spec;
    apply_config_entries(base, config_entries);
    spec.base = base;
    if (keys.name) spec.name = *keys.name;
    if (!keys.axis) throw ConfigError("sweep spec: 'axis' is required");
    spec.axis = *keys.axis;
    if (!keys.grid.empty()) {
        spec.grid = keys.grid;
    } else if (keys.grid_min && keys.grid_max) {
        const std::size_t n = keys.grid_points.value_or(20);
        if (n == 0) throw ConfigError("sweep spec: grid-points must be >= 1");
        if (keys.grid_log && !(*keys.grid_min > 0.0)) {
            throw ConfigError("sweep spec: log grid needs grid-min > 0");
        }
        spec.grid = keys.grid_log ? logspace(*keys.grid_min, *keys.grid_max, n)
                                  : linspace(*keys.grid_min, *keys.grid_max, n);
    } else {
        throw ConfigError("sweep spec: give 'grid' or 'grid-min' and 'grid-max'");
    }
    spec.family = keys.family;
    spec.family_values = keys.family_values;
    if (!keys.methods.empty()) spec.methods = keys.methods;
    spec.validate();
    return spec;
}

// ---------------------------------------------------------------------------
// Output
// ---------------------------------------------------------------------------

namespace detail {

inline std::string format_sci(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17e", v);
    return buf;
}

inline void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << contents;
    out.flush();
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace detail

inline constexpr std::string_view kCsvHeader = "axis,family,method,capacity_bits_s_hz,std_err";

/// CSV text: fixed header, one line per row, %.17e numbers. The family
/// column is empty for single-curve sweeps.
inline std::string to_csv(const SweepResult& result) {
    std::string out(kCsvHeader);
    out += '\n';
    for (const auto& r : result.rows) {
        out += detail::format_sci(r.axis_value);
        out += ',';
        if (r.family_value) out += detail::format_sci(*r.family_value);
        out += ',';
        out += to_string(r.method);
        out += ',';
        out += r.error.empty() ? detail::format_sci(r.capacity) : "nan";
        out += ',';
        out += r.error.empty() ? detail::format_sci(r.std_error) : "nan";
        out += '\n';
    }
    return out;
}

inline void emit_csv(const SweepResult& result, const std::string& path) {
    detail::write_file(path, to_csv(result));
}

namespace detail {

inline std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

inline std::string fmt(double v, int precision = 2) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", precision, v);
    return buf;
}

inline std::string tick_label(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

}  // namespace detail

/// Static SVG line chart: axis value on x (log scale for source power),
/// capacity on y, one polyline per (family value, method). Monte Carlo
/// points get ±1.96·SE error bars.
inline std::string to_svg(const SweepResult& result) {
    constexpr double kWidth = 820.0;
    constexpr double kHeight = 520.0;
    constexpr double kLeft = 70.0;
    constexpr double kRight = 230.0;
    constexpr double kTop = 40.0;
    constexpr double kBottom = 60.0;
    constexpr std::array<std::string_view, 8> kColors{"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                                     "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};
    const bool log_x = result.axis == SweepParam::src_power_w;

    struct Series {
        std::optional<double> family;
        SweepMethod method;
        std::vector<const SweepRow*> rows;
    };
    std::vector<Series> series;
    double x_min = std::numeric_limits<double>::infinity();
    double x_max = -x_min;
    double y_max = 0.0;
    for (const auto& r : result.rows) {
        if (!r.error.empty()) continue;
        auto it = std::find_if(series.begin(), series.end(), [&](const Series& s) {
            return s.family == r.family_value && s.method == r.method;
        });
        if (it == series.end()) {
            series.push_back({r.family_value, r.method, {}});
            it = series.end() - 1;
        }
        it->rows.push_back(&r);
        x_min = std::min(x_min, r.axis_value);
        x_max = std::max(x_max, r.axis_value);
        double top = r.capacity;
        if (r.method == SweepMethod::monte_carlo) top += 1.96 * r.std_error;
        y_max = std::max(y_max, top);
    }
    if (series.empty()) {
        x_min = 0.0;
        x_max = 1.0;
    }
    if (log_x && x_min <= 0.0) x_min = std::max(x_max * 1e-3, 1e-12);
    if (x_max == x_min) {
        x_min -= log_x ? x_min * 0.5 : 0.5;
        x_max += log_x ? x_max : 0.5;
    }
    if (!(y_max > 0.0)) y_max = 1.0;
    y_max *= 1.05;

    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    auto px = [&](double x) {
        const double t = log_x ? (std::log10(x) - std::log10(x_min)) /
                                     (std::log10(x_max) - std::log10(x_min))
                               : (x - x_min) / (x_max - x_min);
        return kLeft + t * plot_w;
    };
    auto py = [&](double y) { return kTop + plot_h * (1.0 - y / y_max); };

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"16\">" << detail::xml_escape(result.name)
        << "</text>\n";

    // Frame and ticks.
    svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << plot_w << "\" height=\""
        << plot_h << "\" fill=\"none\" stroke=\"black\"/>\n";
    std::vector<double> x_ticks;
    if (log_x) {
        for (double d = std::floor(std::log10(x_min)); d <= std::ceil(std::log10(x_max)); d += 1.0) {
            const double v = std::pow(10.0, d);
            if (v >= x_min * (1 - 1e-9) && v <= x_max * (1 + 1e-9)) x_ticks.push_back(v);
        }
    } else {
        x_ticks = linspace(x_min, x_max, 6);
    }
    for (double v : x_ticks) {
        const double x = px(v);
        svg << "<line x1=\"" << detail::fmt(x) << "\" y1=\"" << kTop + plot_h << "\" x2=\""
            << detail::fmt(x) << "\" y2=\"" << kTop + plot_h + 5 << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << detail::fmt(x) << "\" y=\"" << kTop + plot_h + 20
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
            << detail::tick_label(v) << "</text>\n";
    }
    for (double v : linspace(0.0, y_max, 6)) {
        const double y = py(v);
        svg << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << detail::fmt(y) << "\" x2=\"" << kLeft
            << "\" y2=\"" << detail::fmt(y) << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << kLeft - 8 << "\" y=\"" << detail::fmt(y + 4)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">"
            << detail::fmt(v) << "</text>\n";
    }
    svg << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 15
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
        << detail::xml_escape(axis_label(result.axis)) << "</text>\n"
        << "<text x=\"18\" y=\"" << kTop + plot_h / 2 << "\" transform=\"rotate(-90 18 "
        << kTop + plot_h / 2 << ")\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "font-size=\"13\">capacity (bits/s/Hz)</text>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        const auto& ser = series[s];
        const std::string_view color = kColors[s % kColors.size()];
        const bool mc = ser.method == SweepMethod::monte_carlo;
        if (!mc && ser.rows.size() > 1) {
            svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\"";
            if (ser.method == SweepMethod::plc_only_analytic) svg << " stroke-dasharray=\"6 4\"";
            svg << " points=\"";
            for (std::size_t i = 0; i < ser.rows.size(); ++i) {
                if (i) svg << ' ';
                svg << detail::fmt(px(ser.rows[i]->axis_value)) << ','
                    << detail::fmt(py(ser.rows[i]->capacity));
            }
            svg << "\"/>\n";
        }
        for (const SweepRow* r : ser.rows) {
            const double x = px(r->axis_value);
            if (mc) {
                const double half = 1.96 * r->std_error;
                svg << "<line x1=\"" << detail::fmt(x) << "\" y1=\""
                    << detail::fmt(py(std::max(0.0, r->capacity - half))) << "\" x2=\""
                    << detail::fmt(x) << "\" y2=\"" << detail::fmt(py(r->capacity + half))
                    << "\" stroke=\"" << color << "\"/>\n";
            }
            svg << "<circle cx=\"" << detail::fmt(x) << "\" cy=\"" << detail::fmt(py(r->capacity))
                << "\" r=\"" << (mc ? 3.5 : 2.0) << "\" fill=\"" << (mc ? "none" : color)
                << "\" stroke=\"" << color << "\"/>\n";
        }

        // Legend entry.
        const double ly = kTop + 14.0 + 18.0 * static_cast<double>(s);
        const double lx = kWidth - kRight + 15.0;
        std::string label;
        if (ser.family && result.family) {
            label = std::string(to_string(*result.family)) + "=" + detail::tick_label(*ser.family) + " ";
        }
        label += to_string(ser.method);
        svg << "<line x1=\"" << lx << "\" y1=\"" << ly << "\" x2=\"" << lx + 24 << "\" y2=\"" << ly
            << "\" stroke=\"" << color << "\" stroke-width=\"1.8\"";
        if (ser.method == SweepMethod::plc_only_analytic) svg << " stroke-dasharray=\"6 4\"";
        svg << "/>\n<text x=\"" << lx + 30 << "\" y=\"" << ly + 4
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << detail::xml_escape(label)
            << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

inline void emit_plot(const SweepResult& result, const std::string& path) {
    detail::write_file(path, to_svg(result));
}

}  // namespace hplc

#endif  // HPLC_EXPERIMENTS_HPP
