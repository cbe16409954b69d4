#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "fran/sweep.hpp"

using namespace fran;
namespace fs = std::filesystem;

namespace {

std::string tmp_path(const std::string& name) {
    return (fs::temp_directory_path() / name).string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(bool(in));
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) out.push_back(line);
    return out;
}

std::vector<std::string> fields_of(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) out.push_back(f);
    return out;
}

bool mentions(const std::exception& e, const std::string& needle) {
    return std::string(e.what()).find(needle) != std::string::npos;
}

SweepSpec tiny_spec(const std::string& out) {
    SweepSpec s;
    s.base.N = 2;
    s.base.F = 3;
    s.base.L = 4;
    s.base.S = 800.0;
    s.base.M = 1;
    s.base.C = 2.0;
    s.base.P_dB = 10.0;
    s.axis = "mu";
    s.values = {0.0, 0.5, 1.0};
    s.n_trials = 2;
    s.master_seed = 4242;
    s.output_path = out;
    return s;
}

void drop(const std::string& path) {
    std::error_code ec;
    fs::remove(path, ec);
    fs::remove(path + ".manifest", ec);
}

}  // namespace

TEST_CASE("spec validation names the offending key") {
    SweepSpec s = tiny_spec("x.csv");

    SweepSpec bad = s;
    bad.axis = "banana";
    CHECK_THROWS_WITH_AS(bad.validate(), doctest::Contains("axis"), ConfigError);

    bad = s;
    bad.values.clear();
    CHECK_THROWS_WITH_AS(bad.validate(), doctest::Contains("values"), ConfigError);

    bad = s;
    bad.strategies.clear();
    CHECK_THROWS_WITH_AS(bad.validate(), doctest::Contains("strategies"), ConfigError);

    bad = s;
    bad.n_trials = 0;
    CHECK_THROWS_WITH_AS(bad.validate(), doctest::Contains("n_trials"), ConfigError);

    bad = s;
    bad.output_path.clear();
    CHECK_THROWS_WITH_AS(bad.validate(), doctest::Contains("out"), ConfigError);

    bad = s;
    bad.values = {0.0, 1.5};  // out of the caching fraction's domain
    CHECK_THROWS_WITH_AS(bad.validate(), doctest::Contains("mu"), ConfigError);

    bad = s;
    bad.base.alpha = 1.5;
    CHECK_THROWS_WITH_AS(bad.validate(), doctest::Contains("alpha"), ConfigError);
}

TEST_CASE("config_at swaps exactly one parameter") {
    SystemConfig base = tiny_spec("x.csv").base;

    SystemConfig at = config_at(base, "mu", 0.25);
    CHECK(at.mu == 0.25);
    CHECK(at.L == base.L);
    CHECK(at.M == base.M);
    CHECK(at.C == base.C);
    CHECK(at.P_dB == base.P_dB);

    CHECK(config_at(base, "M", 2).M == 2);
    CHECK(config_at(base, "L", 8).L == 8);
    CHECK(config_at(base, "P_dB", 7.5).P_dB == 7.5);
    CHECK(config_at(base, "C", 0.25).C == 0.25);

    CHECK_THROWS_WITH_AS(config_at(base, "M", 2.5), doctest::Contains("integer"), ConfigError);
    CHECK_THROWS_WITH_AS(config_at(base, "L", 4.2), doctest::Contains("integer"), ConfigError);
    CHECK_THROWS_WITH_AS(config_at(base, "rho", 1.0), doctest::Contains("axis"), ConfigError);
    CHECK_THROWS_WITH_AS(config_at(base, "mu", 2.0), doctest::Contains("mu"), ConfigError);
}

TEST_CASE("overrides touch only their key") {
    SweepSpec s = tiny_spec("x.csv");

    apply_override(s, "M", "2");
    CHECK(s.base.M == 2);
    CHECK(s.base.N == 2);

    apply_override(s, "values", "0.1, 0.9");
    CHECK(s.values == std::vector<double>{0.1, 0.9});

    apply_override(s, "strategies", "coded, unicast");
    CHECK(s.strategies == std::vector<Strategy>{Strategy::Coded, Strategy::Unicast});

    apply_override(s, "seed", "77");
    CHECK(s.master_seed == 77);

    apply_override(s, "note", "first");
    apply_override(s, "note", "second");
    CHECK(s.notes == std::vector<std::string>{"first", "second"});

    CHECK_THROWS_WITH_AS(apply_override(s, "frobnicate", "1"),
                         doctest::Contains("unknown key 'frobnicate'"), ConfigError);
    CHECK_THROWS_WITH_AS(apply_override(s, "mu", "abc"), doctest::Contains("cannot parse"),
                         ConfigError);
    CHECK_THROWS_WITH_AS(apply_override(s, "strategies", "carrier-pigeon"),
                         doctest::Contains("strategies"), ConfigError);
}

TEST_CASE("config files parse with comments, blanks and overrides") {
    const std::string path = tmp_path("fran_test_parse.cfg");
    {
        std::ofstream out(path, std::ios::trunc);
        out << "# scenario\n"
            << "N = 2\n"
            << "F = 3\n"
            << "L = 4\n"
            << "S_bits = 800\n"
            << "\n"
            << "axis = mu   # the swept parameter\n"
            << "values = 0, 0.5\n"
            << "n_trials = 2\n"
            << "out = run.csv\n";
    }
    SweepSpec s = parse_config(path);
    CHECK(s.base.N == 2);
    CHECK(s.base.F == 3);
    CHECK(s.axis == "mu");
    CHECK(s.values == std::vector<double>{0.0, 0.5});
    CHECK(s.n_trials == 2);
    CHECK(s.output_path == "run.csv");
    CHECK(s.master_seed == 1729);  // default
    CHECK(s.strategies.size() == 3);

    SweepSpec o = parse_config(path, {{"M", "2"}, {"out", "other.csv"}});
    CHECK(o.base.M == 2);
    CHECK(o.output_path == "other.csv");

    std::error_code ec;
    fs::remove(path, ec);
}

TEST_CASE("config file errors are specific") {
    CHECK_THROWS_WITH_AS(parse_config(tmp_path("fran_no_such_file.cfg")),
                         doctest::Contains("cannot be opened"), ConfigError);

    const std::string path = tmp_path("fran_test_bad.cfg");
    {
        std::ofstream out(path, std::ios::trunc);
        out << "axis = mu\nvalues 0, 0.5\n";
    }
    CHECK_THROWS_WITH_AS(parse_config(path), doctest::Contains("line 2"), ConfigError);

    {
        std::ofstream out(path, std::ios::trunc);
        out << "N = 2\nF = 3\nL = 4\nmu = 1.5\naxis = M\nvalues = 1\nn_trials = 1\n";
    }
    CHECK_THROWS_WITH_AS(parse_config(path), doctest::Contains("mu"), ConfigError);

    std::error_code ec;
    fs::remove(path, ec);
}

TEST_CASE("preset files mirror the built-in sweeps") {
    const std::string root = FRAN_SOURCE_DIR;
    const struct {
        const char* name;
        std::vector<const char*> files;
    } presets[] = {
        {"fig3", {"fig3.cfg"}},
        {"fig4", {"fig4_c05.cfg", "fig4_c1.cfg", "fig4_c2.cfg"}},
        {"fig5", {"fig5.cfg"}},
        {"fig6", {"fig6.cfg"}},
    };
    for (const auto& p : presets) {
        std::vector<SweepSpec> built = preset_sweeps(p.name);
        REQUIRE(built.size() == p.files.size());
        for (size_t i = 0; i < built.size(); ++i) {
            SweepSpec from_file = parse_config(root + "/presets/" + p.files[i]);
            CHECK(describe(from_file) == describe(built[i]));
        }
    }
    CHECK_THROWS_WITH_AS(preset_sweeps("fig7"), doctest::Contains("preset"), ConfigError);
}

TEST_CASE("CSV header layout is frozen") {
    CHECK(std::string(csv_header()) ==
          "strategy,axis_name,axis_value,N,F,L,S_bits,mu,M,C,P_dB,gamma,alpha,nT,nR,nS,"
          "n_trials,seed,TF_mean,TF_ci95,TE_mean,TE_ci95,Ttotal_mean,Ttotal_ci95,inf_trials");
}

TEST_CASE("a sweep writes one row per strategy per axis value, reproducibly") {
    const std::string out = tmp_path("fran_test_tiny.csv");
    SweepSpec s = tiny_spec(out);

    RunStats stats = run_sweeps({s});
    CHECK(stats.total_trials == 6);
    CHECK(stats.stalled_trials == 0);
    std::string first = slurp(out);

    std::vector<std::string> rows = lines_of(first);
    REQUIRE(rows.size() == 10);  // header + 3 values x 3 strategies
    CHECK(rows[0] == csv_header());
    const char* expect_strategy[] = {"unicast", "multicast", "coded"};
    const char* expect_value[] = {"0", "0.5", "1"};
    for (int v = 0; v < 3; ++v)
        for (int st = 0; st < 3; ++st) {
            std::vector<std::string> f = fields_of(rows[1 + 3 * v + st]);
            REQUIRE(f.size() == 25);
            CHECK(f[0] == expect_strategy[st]);
            CHECK(f[1] == "mu");
            CHECK(f[2] == expect_value[v]);
            CHECK(f[7] == expect_value[v]);  // the axis writes through to mu
            CHECK(f[16] == "2");
            CHECK(f[17] == "4242");
        }

    run_sweeps({s});
    CHECK(slurp(out) == first);

    std::string manifest = slurp(out + ".manifest");
    CHECK(manifest.find("version = ") == 0);
    CHECK(manifest.find("[sweep 1]") != std::string::npos);
    CHECK(manifest.find("axis = mu") != std::string::npos);

    drop(out);
}

TEST_CASE("strategy filters drop rows without renumbering the rest") {
    const std::string out = tmp_path("fran_test_filter.csv");
    SweepSpec s = tiny_spec(out);
    s.strategies = {Strategy::Coded};
    run_sweeps({s});
    std::vector<std::string> rows = lines_of(slurp(out));
    REQUIRE(rows.size() == 4);
    for (size_t i = 1; i < rows.size(); ++i) CHECK(fields_of(rows[i])[0] == "coded");
    drop(out);
}

TEST_CASE("several sweeps share one file and one header") {
    const std::string out = tmp_path("fran_test_multi.csv");
    SweepSpec a = tiny_spec(out);
    SweepSpec b = tiny_spec(out);
    b.base.C = 0.5;

    RunStats stats = run_sweeps({a, b});
    CHECK(stats.total_trials == 12);
    std::vector<std::string> rows = lines_of(slurp(out));
    REQUIRE(rows.size() == 19);  // header + 2 sweeps x 9 rows
    CHECK(rows[0] == csv_header());
    CHECK(fields_of(rows[1])[9] == "2");    // C of the first sweep
    CHECK(fields_of(rows[10])[9] == "0.5");  // C of the second sweep

    std::string manifest = slurp(out + ".manifest");
    CHECK(manifest.find("sweeps = 2") != std::string::npos);
    CHECK(manifest.find("[sweep 2]") != std::string::npos);

    SweepSpec c = tiny_spec(tmp_path("fran_test_other.csv"));
    CHECK_THROWS_WITH_AS(run_sweeps({a, c}), doctest::Contains("out"), ConfigError);
    CHECK_THROWS_AS(run_sweeps({}), ConfigError);

    drop(out);
}

TEST_CASE("unwritable output paths fail before any simulation") {
    SweepSpec s = tiny_spec("/nonexistent_dir_fran_test/out.csv");
    CHECK_THROWS_AS(run_sweeps({s}), IoError);
}

TEST_CASE("transmit power leaves the fronthaul columns untouched") {
    const std::string out_lo = tmp_path("fran_test_plo.csv");
    const std::string out_hi = tmp_path("fran_test_phi.csv");
    SweepSpec lo = tiny_spec(out_lo);
    lo.values = {0.0, 0.5};
    SweepSpec hi = lo;
    hi.base.P_dB = 30.0;
    hi.output_path = out_hi;

    run_sweeps({lo});
    run_sweeps({hi});
    std::vector<std::string> rlo = lines_of(slurp(out_lo));
    std::vector<std::string> rhi = lines_of(slurp(out_hi));
    REQUIRE(rlo.size() == rhi.size());
    for (size_t i = 1; i < rlo.size(); ++i) {
        std::vector<std::string> a = fields_of(rlo[i]);
        std::vector<std::string> b = fields_of(rhi[i]);
        CHECK(a[18] == b[18]);  // TF_mean
        CHECK(a[19] == b[19]);  // TF_ci95
        CHECK(a[24] == b[24]);  // inf_trials
        CHECK(a[10] != b[10]);  // P_dB itself differs
    }
    drop(out_lo);
    drop(out_hi);
}
