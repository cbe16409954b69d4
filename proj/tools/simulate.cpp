#include <cstdio>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "fran/kernels.hpp"
#include "fran/sweep.hpp"
#include "fran/version.hpp"

using fran::ConfigError;
using fran::IoError;
using fran::SweepSpec;

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo simulator for cache-aided downlink delivery latency"};
    app.set_version_flag("--version", FRAN_VERSION);

    std::string config_path, preset_name;
    auto* config_opt = app.add_option("--config", config_path, "sweep config file (key = value)");
    auto* preset_opt =
        app.add_option("--preset", preset_name, "built-in sweep: fig3, fig4, fig5 or fig6");
    config_opt->excludes(preset_opt);
    preset_opt->excludes(config_opt);

    // Every remaining flag funnels through the same key = value path as the
    // config file, so file values and flags cannot drift apart.
    std::vector<std::pair<std::string, std::string>> overrides;
    auto add = [&](const char* flag, const char* key, const char* desc) {
        app.add_option_function<std::string>(
            flag,
            [key = std::string(key), &overrides](const std::string& v) {
                overrides.emplace_back(key, v);
            },
            desc);
    };
    add("--axis", "axis", "sweep axis: mu, M, L, P_dB or C");
    add("--values", "values", "comma-separated axis values");
    add("--strategies", "strategies", "subset of unicast,multicast,coded");
    add("--trials", "n_trials", "Monte Carlo trials per sweep point");
    add("--seed", "seed", "master seed");
    add("--out", "out", "output CSV path (manifest written alongside)");
    add("--N", "N", "EN-UE pairs");
    add("--F", "F", "library size, files");
    add("--L", "L", "subfiles per file");
    add("--S_bits", "S_bits", "file size in bits");
    add("--mu", "mu", "fractional caching capacity in [0,1]");
    add("--M", "M", "connectivity level");
    add("--C", "C", "fronthaul capacity, bits/symbol");
    add("--P_dB", "P_dB", "per-EN transmit SNR, dB");
    add("--gamma", "gamma", "popularity exponent");
    add("--alpha", "alpha", "channel decay base");
    add("--nT", "nT", "antennas per EN");
    add("--nR", "nR", "antennas per UE");
    add("--nS", "nS", "streams per UE (0: auto)");

    CLI11_PARSE(app, argc, argv);

    try {
        std::vector<SweepSpec> specs;
        if (!preset_name.empty()) {
            specs = fran::preset_sweeps(preset_name);
            for (SweepSpec& s : specs)
                for (const auto& [k, v] : overrides) fran::apply_override(s, k, v);
            for (SweepSpec& s : specs) s.validate();
        } else if (!config_path.empty()) {
            specs = {fran::parse_config(config_path, overrides)};
        } else {
            throw ConfigError("provide --config <path> or --preset <name>");
        }

        std::cout << "simulate " << FRAN_VERSION << " (kernels: " << fran::kernels::backend_name()
                  << ")\n";
        for (size_t i = 0; i < specs.size(); ++i)
            std::cout << "[sweep " << (i + 1) << "]\n" << fran::describe(specs[i]);
        std::cout.flush();

        fran::RunStats stats = fran::run_sweeps(specs);
        std::cout << "wrote " << specs.front().output_path << " and "
                  << specs.front().output_path << ".manifest\n";

        if (stats.stalled_trials * 20 > stats.total_trials) {
            std::cerr << "solver stalled on " << stats.stalled_trials << " of "
                      << stats.total_trials << " trials\n";
            return 4;
        }
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
