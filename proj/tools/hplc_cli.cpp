// Command-line front end: eval, sweep, validate, tables.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hplc/hplc.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitValidation = 4;

constexpr const char* kConfigEnv = "HPLC_CONFIG";

std::string sci(double v, int digits = 10) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*e", digits, v);
    return buf;
}

std::string fixed(double v, int digits = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

/// Values of the --<key> flags, keyed by config key name.
struct FlagValues {
    std::map<std::string, std::string> values;
    std::string config_path;

    std::vector<hplc::ConfigEntry> entries() const {
        std::vector<hplc::ConfigEntry> out;
        for (const auto& k : hplc::config_keys()) {
            if (auto it = values.find(k.name); it != values.end()) {
                out.push_back({k.name, it->second, "--" + k.name});
            }
        }
        return out;
    }
};

/// Layers file and flag assignments on top of base:
/// base → $HPLC_CONFIG (when --config is absent) → --config → flags.
hplc::Config layered_config(hplc::Config base, const FlagValues& flags,
                            const std::vector<hplc::ConfigEntry>& extra = {}) {
    std::string path = flags.config_path;
    if (path.empty()) {
        if (const char* env = std::getenv(kConfigEnv); env != nullptr && *env != '\0') path = env;
    }
    if (!path.empty()) hplc::apply_config_entries(base, hplc::read_config_file(path));
    hplc::apply_config_entries(base, extra);
    hplc::apply_config_entries(base, flags.entries());
    base.validate();
    return base;
}

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

struct EvalOptions {
    bool monte_carlo = false;
    bool csv = false;
    bool dump_config = false;
};

int cmd_eval(const FlagValues& flags, const EvalOptions& opts) {
    const hplc::Config cfg = layered_config(hplc::Config{}, flags);
    if (opts.dump_config) {
        std::cout << hplc::dump_config(cfg);
        return kExitOk;
    }
    const hplc::HybridSystem sys = cfg.effective_system();
    const hplc::PlcLink direct = cfg.plc_only_link();
    const hplc::QuadratureRule rule = hplc::gauss_hermite(cfg.quad_order);

    const double alpha = hplc::attenuation_coefficient(sys.plc);
    const double plc_amp = hplc::plc_amplitude_gain(alpha, sys.plc.length_m);
    const double path_gain = sys.wireless.path_gain();
    const double mean_hp = hplc::mean_plc_power_gain(sys.plc);
    const double relay_input_snr = sys.src_power_w * plc_amp * plc_amp * mean_hp / sys.plc.noise_var;
    const double relay_hop_snr =
        sys.relay_gain * sys.relay_gain * sys.relay_power_w * path_gain / sys.wireless.noise_var;

    const auto hybrid = hplc::analytic_hybrid_capacity(sys, rule, cfg.rel_tol);
    const auto baseline =
        hplc::analytic_plc_capacity(direct, sys.src_power_w, rule, cfg.half_duplex);
    std::optional<hplc::CapacityEstimate> mc;
    if (opts.monte_carlo) mc = hplc::mc_hybrid_capacity(sys, cfg.mc);

    if (opts.csv) {
        std::cout << "alpha_np_per_m,relay_gain_linear,capacity_analytic,capacity_mc,mc_std_err,"
                     "mc_samples,plc_only_capacity\n"
                  << sci(alpha, 17) << ',' << sci(sys.relay_gain, 17) << ','
                  << sci(hybrid.bits_per_s_per_hz, 17) << ','
                  << (mc ? sci(mc->bits_per_s_per_hz, 17) : "") << ','
                  << (mc ? sci(mc->std_error, 17) : "") << ','
                  << (mc ? std::to_string(mc->samples) : "") << ','
                  << sci(baseline.bits_per_s_per_hz, 17) << '\n';
        return kExitOk;
    }

    std::cout << "effective parameters\n";
    for (const auto& k : hplc::config_keys()) {
        if (auto v = k.get(cfg)) std::cout << "  " << k.name << " = " << *v << '\n';
    }
    std::cout << "\nlink budget\n"
              << "  attenuation alpha          " << sci(alpha, 6) << " Np/m\n"
              << "  PLC amplitude gain e^-ad1  " << sci(plc_amp, 6) << '\n'
              << "  PLC power gain e^-2ad1     " << sci(plc_amp * plc_amp, 6) << '\n'
              << "  wireless path gain d2^-m   " << sci(path_gain, 6) << '\n'
              << "  relay gain G (amplitude)   " << sci(sys.relay_gain, 6) << '\n'
              << "  mean |h_P|^2               " << sci(mean_hp, 6) << '\n'
              << "  mean SNR at relay input    " << sci(relay_input_snr, 6) << " ("
              << fixed(10.0 * std::log10(relay_input_snr), 2) << " dB)\n"
              << "  relay-hop SNR scale        " << sci(relay_hop_snr, 6) << " ("
              << fixed(10.0 * std::log10(relay_hop_snr), 2) << " dB)\n"
              << "\nergodic capacity (bits/s/Hz)\n"
              << "  hybrid, analytic           " << fixed(hybrid.bits_per_s_per_hz) << '\n';
    if (mc) {
        std::cout << "  hybrid, monte carlo        " << fixed(mc->bits_per_s_per_hz) << " +/- "
                  << fixed(1.96 * mc->std_error) << " (95% CI, n = " << mc->samples
                  << ", seed = " << cfg.mc.seed << ")\n";
    }
    std::cout << "  direct PLC, analytic       " << fixed(baseline.bits_per_s_per_hz)
              << " (d = " << direct.length_m << " m"
              << (cfg.half_duplex ? ", half-duplex" : "") << ")\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

struct SweepOptions {
    std::string target;
    std::string out_dir = ".";
    std::size_t points = 0;
    std::string family_values;
    std::string gain_db;
    std::string methods;
    bool monte_carlo = false;
};

std::string preset_list() {
    std::string s;
    for (auto p : hplc::kPresetNames) {
        if (!s.empty()) s += ", ";
        s += p;
    }
    return s;
}

int cmd_sweep(const FlagValues& flags, const SweepOptions& opts) {
    hplc::SweepSpec spec;
    if (auto preset = hplc::make_preset(opts.target, opts.points == 0 ? 20 : opts.points)) {
        spec = *preset;
        spec.base = layered_config(spec.base, flags);
    } else if (std::filesystem::is_regular_file(opts.target)) {
        const auto entries = hplc::read_config_file(opts.target);
        // Sweep keys are pulled out first; config keys from the file then sit
        // between --config and the flags.
        hplc::SweepSpec file_spec = hplc::sweep_spec_from_entries(entries, hplc::Config{});
        std::vector<hplc::ConfigEntry> config_entries;
        for (const auto& e : entries) {
            if (hplc::find_config_key(e.key) != nullptr) config_entries.push_back(e);
        }
        spec = file_spec;
        spec.base = layered_config(hplc::Config{}, flags, config_entries);
        if (opts.points != 0) {
            std::cerr << "warning: --points ignored for custom sweep specs\n";
        }
    } else {
        std::cerr << "error: unknown preset or missing spec file '" << opts.target
                  << "'; valid presets: " << preset_list() << '\n';
        return kExitConfig;
    }

    if (!opts.gain_db.empty()) {
        if (spec.family != hplc::SweepParam::relay_gain_db) {
            throw hplc::ConfigError("--gain-db: this sweep's curves are not relay gains");
        }
        spec.family_values = hplc::parse_real_list("gain-db", opts.gain_db);
    }
    if (!opts.family_values.empty()) {
        spec.family_values = hplc::parse_real_list("family-values", opts.family_values);
    }
    if (!opts.methods.empty()) spec.methods = hplc::parse_method_list(opts.methods);
    if (opts.monte_carlo &&
        std::find(spec.methods.begin(), spec.methods.end(), hplc::SweepMethod::monte_carlo) ==
            spec.methods.end()) {
        spec.methods.push_back(hplc::SweepMethod::monte_carlo);
    }
    spec.validate();

    const hplc::SweepResult result = hplc::run_sweep(spec);
    std::filesystem::create_directories(opts.out_dir);
    const std::string base = (std::filesystem::path(opts.out_dir) / spec.name).string();
    const std::string csv_path = base + ".csv";
    const std::string svg_path = base + ".svg";

    if (result.has_errors()) {
        for (const auto& r : result.rows) {
            if (!r.error.empty()) {
                std::cerr << "error: " << hplc::to_string(result.axis) << " = " << r.axis_value
                          << (r.family_value ? ", family = " + std::to_string(*r.family_value)
                                             : std::string())
                          << ", " << hplc::to_string(r.method) << ": " << r.error << '\n';
            }
        }
        std::filesystem::remove(csv_path);
        std::filesystem::remove(svg_path);
        return kExitNumerical;
    }
    try {
        hplc::emit_csv(result, csv_path);
        hplc::emit_plot(result, svg_path);
    } catch (const std::exception& e) {
        std::error_code ec;
        std::filesystem::remove(csv_path, ec);
        std::filesystem::remove(svg_path, ec);
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
    std::cout << "wrote " << result.rows.size() << " rows to " << csv_path << " and " << svg_path
              << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------------

struct ValidateOptions {
    std::uint64_t grid_size = 16;
    bool corrupt_mgf_sign = false;
};

struct ValidationPoint {
    hplc::HybridSystem sys;
    double analytic = 0.0;
    double mc = 0.0;
    double se = 0.0;
    double dev_se = 0.0;
    double dev_pct = 0.0;
    bool ok = false;
    std::string error;
};

std::string describe(const hplc::HybridSystem& s) {
    return "src-power=" + sci(s.src_power_w, 4) + " plc-length=" + sci(s.plc.length_m, 4) +
           " relay-gain=" + sci(s.relay_gain, 4) + " wireless-dist=" + sci(s.wireless.dist_m, 4) +
           " pathloss-exp=" + sci(s.wireless.pathloss_exp, 4) +
           " fading-sigma-db=" + sci(s.plc.fading_sigma_db, 4);
}

int cmd_validate(const FlagValues& flags, const ValidateOptions& opts) {
    const hplc::Config cfg = layered_config(hplc::Config{}, flags);
    if (opts.grid_size == 0) {
        std::cout << "warning: grid-size is 0, nothing to validate\n";
        return kExitOk;
    }
    const hplc::QuadratureRule rule = hplc::gauss_hermite(cfg.quad_order);
    hplc::HybridAnalyticOptions aopts;
    aopts.rel_tol = cfg.rel_tol;
    aopts.flip_relay_noise_sign = opts.corrupt_mgf_sign;

    // Parameter draws come from their own stream so they do not depend on the
    // Monte Carlo sample count.
    hplc::RandomStream param_rng = hplc::make_substream(cfg.mc.seed, 0xfeedULL);
    auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * hplc::uniform01(param_rng); };
    auto log_uniform = [&](double lo, double hi) {
        return std::exp(uniform(std::log(lo), std::log(hi)));
    };

    std::vector<ValidationPoint> points(opts.grid_size);
    for (auto& p : points) {
        p.sys = cfg.effective_system();
        p.sys.src_power_w = log_uniform(0.1, 10.0);
        p.sys.plc.length_m = uniform(1.0, 50.0);
        p.sys.relay_gain = log_uniform(1.0, 10.0);
        p.sys.wireless.dist_m = uniform(1.0, 5.0);
        p.sys.wireless.pathloss_exp = uniform(2.0, 3.5);
        p.sys.plc.fading_sigma_db = uniform(0.0, 6.0);
    }

    std::cout << "point,analytic,monte_carlo,std_err,dev_se,dev_pct,ok\n";
    std::size_t worst = 0;
    double worst_score = -1.0;
    bool all_ok = true;
    for (std::size_t i = 0; i < points.size(); ++i) {
        auto& p = points[i];
        hplc::McSettings mc = cfg.mc;
        mc.seed = hplc::detail::splitmix64(cfg.mc.seed + i);
        try {
            const auto a = hplc::analytic_hybrid_capacity(p.sys, rule, aopts);
            const auto m = hplc::mc_hybrid_capacity(p.sys, mc);
            p.analytic = a.bits_per_s_per_hz;
            p.mc = m.bits_per_s_per_hz;
            p.se = m.std_error;
            const double diff = std::abs(p.analytic - p.mc);
            p.dev_se = p.se > 0.0 ? diff / p.se : (diff == 0.0 ? 0.0 : INFINITY);
            p.dev_pct = p.analytic > 0.0 ? 100.0 * diff / p.analytic : (diff == 0.0 ? 0.0 : INFINITY);
            p.ok = hplc::agrees_with_mc(a, m);
        } catch (const std::exception& e) {
            p.error = e.what();
            p.ok = false;
        }
        // Ratio to the allowed band; > 1 fails.
        const double band = std::max(3.0 * p.se, 0.01 * p.analytic);
        const double score = p.error.empty()
                                 ? (band > 0.0 ? std::abs(p.analytic - p.mc) / band
                                               : (p.analytic == p.mc ? 0.0 : INFINITY))
                                 : INFINITY;
        if (score > worst_score) {
            worst_score = score;
            worst = i;
        }
        all_ok = all_ok && p.ok;
        if (p.error.empty()) {
            std::cout << i << ',' << sci(p.analytic) << ',' << sci(p.mc) << ',' << sci(p.se, 4)
                      << ',' << fixed(p.dev_se, 3) << ',' << fixed(p.dev_pct, 4) << ','
                      << (p.ok ? "yes" : "no") << '\n';
        } else {
            std::cout << i << ",,,,,,error\n";
        }
    }

    double max_se = 0.0;
    double max_pct = 0.0;
    for (const auto& p : points) {
        if (!p.error.empty()) continue;
        max_se = std::max(max_se, p.dev_se);
        max_pct = std::max(max_pct, p.dev_pct);
    }
    std::cout << "# points " << points.size() << ", samples " << cfg.mc.n_samples
              << ", max deviation " << fixed(max_se, 3) << " SE, " << fixed(max_pct, 4) << " %\n";
    if (all_ok) {
        std::cout << "# PASS: every point within max(3 SE, 1%)\n";
        return kExitOk;
    }
    const auto& w = points[worst];
    std::cout << "# FAIL: worst point " << worst << ": " << describe(w.sys) << '\n';
    if (!w.error.empty()) std::cout << "#   error: " << w.error << '\n';
    std::cerr << "validation failed at point " << worst << '\n';
    return kExitValidation;
}

// ---------------------------------------------------------------------------
// tables
// ---------------------------------------------------------------------------

int cmd_tables(int order) {
    if (order < 1 || order > hplc::kMaxHermiteOrder) {
        std::cerr << "error: order must be in [1, " << hplc::kMaxHermiteOrder << "]\n";
        return kExitConfig;
    }
    const auto rule = hplc::gauss_hermite(order);
    std::cout << "n,node,weight\n";
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", i + 1, rule.nodes[i], rule.weights[i]);
        std::cout << buf;
        sum += rule.weights[i];
    }
    const double sqrt_pi = std::sqrt(std::numbers::pi);
    char footer[160];
    std::snprintf(footer, sizeof footer, "# sum_weights=%.17g sqrt_pi=%.17g rel_err=%.3e\n", sum,
                  sqrt_pi, std::abs(sum - sqrt_pi) / sqrt_pi);
    std::cout << footer;
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ergodic capacity of hybrid PLC / AF-relay / wireless links"};
    app.require_subcommand(1);
    app.fallthrough();

    FlagValues flags;
    app.add_option("--config", flags.config_path,
                   std::string("config file (key = value); default from $") + kConfigEnv);
    std::map<std::string, std::string> raw;
    for (const auto& k : hplc::config_keys()) {
        app.add_option("--" + k.name, raw[k.name], k.help)
            ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    }

    EvalOptions eval_opts;
    auto* eval = app.add_subcommand("eval", "capacity at one parameter point");
    eval->add_flag("--mc", eval_opts.monte_carlo, "also run the Monte Carlo estimator");
    eval->add_flag("--csv", eval_opts.csv, "print a CSV record instead of the report");
    eval->add_flag("--dump-config", eval_opts.dump_config, "print the effective config and exit");

    SweepOptions sweep_opts;
    auto* sweep = app.add_subcommand("sweep", "preset or custom parameter sweep to CSV + SVG");
    sweep->add_option("target", sweep_opts.target, "preset (fig2..fig5) or sweep spec file")
        ->required();
    sweep->add_option("--out-dir", sweep_opts.out_dir, "output directory");
    sweep->add_option("--points", sweep_opts.points, "grid points for presets (default 20)");
    sweep->add_option("--family-values", sweep_opts.family_values, "comma list of curve values");
    sweep->add_option("--gain-db", sweep_opts.gain_db, "comma list of relay gains for fig5");
    sweep->add_option("--methods", sweep_opts.methods,
                      "comma list: analytic, monte_carlo, plc_only_analytic");
    sweep->add_flag("--mc", sweep_opts.monte_carlo, "add Monte Carlo rows");

    ValidateOptions validate_opts;
    auto* validate = app.add_subcommand("validate", "analytic vs Monte Carlo over a random grid");
    validate->add_option("--grid-size", validate_opts.grid_size, "number of random points");
    validate->add_option("--samples", raw["mc-samples"], "alias of --mc-samples")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    validate->add_flag("--corrupt-mgf-sign", validate_opts.corrupt_mgf_sign,
                       "negative control: use the growing relay-noise exponential");

    int order = hplc::kDefaultHermiteOrder;
    auto* tables = app.add_subcommand("tables", "dump Gauss-Hermite nodes and weights as CSV");
    tables->add_option("order", order, "rule order (1..200)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }
    for (const auto& [key, value] : raw) {
        const bool given = app.count("--" + key) > 0 ||
                           (key == "mc-samples" && validate->count("--samples") > 0);
        if (given) flags.values[key] = value;
    }

    try {
        if (*eval) return cmd_eval(flags, eval_opts);
        if (*sweep) return cmd_sweep(flags, sweep_opts);
        if (*validate) return cmd_validate(flags, validate_opts);
        if (*tables) return cmd_tables(order);
    } catch (const hplc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const hplc::ParameterError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const hplc::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << " (partial " << e.partial()
                  << ", error estimate " << e.error_estimate() << ")\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitOk;
}
