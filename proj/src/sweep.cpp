#include "fran/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fran/sim.hpp"
#include "fran/version.hpp"

namespace fran {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    std::stringstream ss(s);
    while (std::getline(ss, cur, ',')) {
        cur = trim(cur);
        if (!cur.empty()) out.push_back(cur);
    }
    return out;
}

double parse_real(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': cannot parse real value '" + v + "'");
    }
}

long parse_int(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        long x = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': cannot parse integer value '" + v + "'");
    }
}

uint64_t parse_u64(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        unsigned long long x = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': cannot parse unsigned value '" + v + "'");
    }
}

std::string fmt9(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

std::string fmt17(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

void SweepSpec::validate() const {
    static const char* axes[] = {"mu", "M", "L", "P_dB", "C"};
    bool ok = false;
    for (const char* a : axes) ok = ok || axis == a;
    if (!ok) throw ConfigError("key 'axis': must be one of mu, M, L, P_dB, C (got '" + axis + "')");
    if (values.empty()) throw ConfigError("key 'values': at least one axis value required");
    if (strategies.empty()) throw ConfigError("key 'strategies': at least one strategy required");
    if (n_trials < 1) throw ConfigError("key 'n_trials': must be >= 1");
    if (output_path.empty()) throw ConfigError("key 'out': output path must not be empty");
    for (double v : values) config_at(base, axis, v);  // domain check per value
    try {
        base.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

SystemConfig config_at(const SystemConfig& base, const std::string& axis, double value) {
    SystemConfig cfg = base;
    auto integral = [&](const char* name) {
        if (value != std::floor(value))
            throw ConfigError(std::string("key 'values': axis ") + name +
                              " requires integer values");
        return static_cast<int>(value);
    };
    if (axis == "mu")
        cfg.mu = value;
    else if (axis == "M")
        cfg.M = integral("M");
    else if (axis == "L")
        cfg.L = integral("L");
    else if (axis == "P_dB")
        cfg.P_dB = value;
    else if (axis == "C")
        cfg.C = value;
    else
        throw ConfigError("key 'axis': must be one of mu, M, L, P_dB, C (got '" + axis + "')");
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

void apply_override(SweepSpec& spec, const std::string& key, const std::string& value) {
    SystemConfig& b = spec.base;
    if (key == "N")
        b.N = static_cast<int>(parse_int(key, value));
    else if (key == "F")
        b.F = static_cast<int>(parse_int(key, value));
    else if (key == "L")
        b.L = static_cast<int>(parse_int(key, value));
    else if (key == "S_bits")
        b.S = parse_real(key, value);
    else if (key == "mu")
        b.mu = parse_real(key, value);
    else if (key == "M")
        b.M = static_cast<int>(parse_int(key, value));
    else if (key == "C")
        b.C = parse_real(key, value);
    else if (key == "P_dB")
        b.P_dB = parse_real(key, value);
    else if (key == "gamma")
        b.gamma = parse_real(key, value);
    else if (key == "alpha")
        b.alpha = parse_real(key, value);
    else if (key == "nT")
        b.nT = static_cast<int>(parse_int(key, value));
    else if (key == "nR")
        b.nR = static_cast<int>(parse_int(key, value));
    else if (key == "nS")
        b.nS = static_cast<int>(parse_int(key, value));
    else if (key == "axis")
        spec.axis = value;
    else if (key == "values") {
        spec.values.clear();
        for (const std::string& v : split_list(value)) spec.values.push_back(parse_real(key, v));
    } else if (key == "strategies") {
        spec.strategies.clear();
        for (const std::string& v : split_list(value)) {
            if (v == "unicast")
                spec.strategies.push_back(Strategy::Unicast);
            else if (v == "multicast")
                spec.strategies.push_back(Strategy::Multicast);
            else if (v == "coded")
                spec.strategies.push_back(Strategy::Coded);
            else
                throw ConfigError("key 'strategies': unknown strategy '" + v + "'");
        }
    } else if (key == "n_trials")
        spec.n_trials = static_cast<int>(parse_int(key, value));
    else if (key == "seed")
        spec.master_seed = parse_u64(key, value);
    else if (key == "out")
        spec.output_path = value;
    else if (key == "note")
        spec.notes.push_back(value);
    else
        throw ConfigError("unknown key '" + key + "'");
}

SweepSpec parse_config(const std::string& path,
                       const std::vector<std::pair<std::string, std::string>>& overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config file '" + path + "' cannot be opened");
    SweepSpec spec;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config file '" + path + "' line " + std::to_string(lineno) +
                              ": expected key = value");
        apply_override(spec, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    for (const auto& [k, v] : overrides) apply_override(spec, k, v);
    spec.validate();
    return spec;
}

std::vector<SweepSpec> preset_sweeps(const std::string& name) {
    SweepSpec s;
    s.base.S = 8e8;
    s.base.gamma = 0.2;
    s.base.alpha = 0.7;
    s.base.N = 4;
    if (name == "fig3") {
        s.base.F = 60;
        s.base.L = 50;
        s.base.nT = s.base.nR = 1;
        s.base.C = 2.0;
        s.base.P_dB = 20.0;
        s.base.M = 2;
        s.axis = "mu";
        s.values = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
        s.output_path = "fig3.csv";
        return {s};
    }
    if (name == "fig4") {
        s.base.F = 50;
        s.base.L = 20;
        s.base.nT = s.base.nR = 1;
        s.base.P_dB = 20.0;
        s.base.mu = 0.3;
        s.axis = "M";
        s.values = {1, 2, 3, 4};
        s.output_path = "fig4.csv";
        s.notes = {"per-curve fronthaul capacities C in {0.5, 1, 2}: one sweep each"};
        std::vector<SweepSpec> out;
        for (double c : {0.5, 1.0, 2.0}) {
            SweepSpec v = s;
            v.base.C = c;
            out.push_back(std::move(v));
        }
        return out;
    }
    if (name == "fig5") {
        s.base.F = 60;
        s.base.L = 10;
        s.base.nT = s.base.nR = 2;
        s.base.P_dB = 20.0;
        s.base.C = 0.5;
        s.base.M = 1;
        s.base.mu = 0.3;
        s.axis = "L";
        s.values = {10, 20, 30, 40, 50, 60};
        s.output_path = "fig5.csv";
        s.notes = {"mu is not pinned for this sweep; 0.3 assumed"};
        return {s};
    }
    if (name == "fig6") {
        s.base.F = 60;
        s.base.L = 60;
        s.base.nT = s.base.nR = 1;
        s.base.mu = 1.0 / 3.0;
        s.base.C = 1.0;
        s.base.M = 2;
        s.axis = "P_dB";
        s.values = {0, 5, 10, 15, 20, 25, 30, 35};
        s.output_path = "fig6.csv";
        return {s};
    }
    throw ConfigError("unknown preset '" + name + "' (expected fig3, fig4, fig5 or fig6)");
}

std::string describe(const SweepSpec& spec) {
    std::ostringstream os;
    os << "axis = " << spec.axis << "\n";
    os << "values = ";
    for (size_t i = 0; i < spec.values.size(); ++i)
        os << (i ? "," : "") << fmt17(spec.values[i]);
    os << "\n";
    os << "strategies = ";
    for (size_t i = 0; i < spec.strategies.size(); ++i)
        os << (i ? "," : "") << strategy_name(spec.strategies[i]);
    os << "\n";
    os << "n_trials = " << spec.n_trials << "\n";
    os << "seed = " << spec.master_seed << "\n";
    os << "out = " << spec.output_path << "\n";
    const SystemConfig& b = spec.base;
    os << "N = " << b.N << "\n";
    os << "F = " << b.F << "\n";
    os << "L = " << b.L << "\n";
    os << "S_bits = " << fmt17(b.S) << "\n";
    os << "mu = " << fmt17(b.mu) << "\n";
    os << "M = " << b.M << "\n";
    os << "C = " << fmt17(b.C) << "\n";
    os << "P_dB = " << fmt17(b.P_dB) << "\n";
    os << "gamma = " << fmt17(b.gamma) << "\n";
    os << "alpha = " << fmt17(b.alpha) << "\n";
    os << "nT = " << b.nT << "\n";
    os << "nR = " << b.nR << "\n";
    os << "nS = " << b.streams() << "\n";
    for (const std::string& n : spec.notes) os << "note = " << n << "\n";
    return os.str();
}

const char* csv_header() {
    return "strategy,axis_name,axis_value,N,F,L,S_bits,mu,M,C,P_dB,gamma,alpha,nT,nR,nS,"
           "n_trials,seed,TF_mean,TF_ci95,TE_mean,TE_ci95,Ttotal_mean,Ttotal_ci95,inf_trials";
}

RunStats run_sweeps(const std::vector<SweepSpec>& specs) {
    if (specs.empty()) throw ConfigError("no sweeps to run");
    const std::string& path = specs.front().output_path;
    for (const SweepSpec& s : specs) {
        s.validate();
        if (s.output_path != path)
            throw ConfigError("key 'out': all sweeps of one run must share the output path");
    }

    std::ofstream csv(path, std::ios::trunc);
    if (!csv) throw IoError("cannot open output file '" + path + "' for writing");
    std::ofstream man(path + ".manifest", std::ios::trunc);
    if (!man) throw IoError("cannot open manifest file '" + path + ".manifest' for writing");

    man << "version = " << FRAN_VERSION << "\n";
    man << "csv = " << path << "\n";
    man << "sweeps = " << specs.size() << "\n";
    for (size_t i = 0; i < specs.size(); ++i)
        man << "\n[sweep " << (i + 1) << "]\n" << describe(specs[i]);
    man.flush();
    if (!man) throw IoError("failed writing manifest for '" + path + "'");

    RunStats stats;
    csv << csv_header() << "\n";
    for (const SweepSpec& spec : specs) {
        EdgeMemo memo;
        for (double value : spec.values) {
            SystemConfig cfg = config_at(spec.base, spec.axis, value);
            AggregateResult agg = run_experiment(cfg, spec.n_trials, spec.master_seed, &memo);
            stats.total_trials += spec.n_trials;
            stats.stalled_trials += agg.stalled_trials;
            for (Strategy st : {Strategy::Unicast, Strategy::Multicast, Strategy::Coded}) {
                bool wanted = false;
                for (Strategy w : spec.strategies) wanted = wanted || w == st;
                if (!wanted) continue;
                const StrategyAggregate& a = agg.per_strategy[int(st)];
                csv << strategy_name(st) << ',' << spec.axis << ',' << fmt9(value) << ','
                    << cfg.N << ',' << cfg.F << ',' << cfg.L << ',' << fmt9(cfg.S) << ','
                    << fmt9(cfg.mu) << ',' << cfg.M << ',' << fmt9(cfg.C) << ','
                    << fmt9(cfg.P_dB) << ',' << fmt9(cfg.gamma) << ',' << fmt9(cfg.alpha) << ','
                    << cfg.nT << ',' << cfg.nR << ',' << cfg.streams() << ',' << spec.n_trials
                    << ',' << spec.master_seed << ',' << fmt9(a.tf_mean) << ',' << fmt9(a.tf_ci)
                    << ',' << fmt9(a.te_mean) << ',' << fmt9(a.te_ci) << ',' << fmt9(a.tt_mean)
                    << ',' << fmt9(a.tt_ci) << ',' << a.inf_trials << "\n";
            }
            csv.flush();
            if (!csv) throw IoError("failed writing CSV rows to '" + path + "'");
        }
    }
    return stats;
}

RunStats run_sweep(const SweepSpec& spec) { return run_sweeps({spec}); }

}  // namespace fran
