// Copyright 2026 The Biphoton Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <algorithm>
#include <filesystem>
#include <functional>
#include <fstream>
#include <numbers>
#include <sstream>

#include "biphoton/serialization.h"
#include "gtest/gtest.h"

using namespace biphoton;
using namespace biphoton::cli;

namespace {

constexpr double kPi = std::numbers::pi;

RunConfig parse(std::vector<std::string> args, const char *env_seed = nullptr) {
    auto cfg = parse_args(args, env_seed);
    if (!cfg) {
        throw std::logic_error("help requested");
    }
    return *cfg;
}

std::filesystem::path temp_file(const std::string &name, const std::string &content = "") {
    auto dir = std::filesystem::temp_directory_path() / "biphoton_cli_test";
    std::filesystem::create_directories(dir);
    auto path = dir / name;
    if (!content.empty()) {
        std::ofstream(path, std::ios::binary) << content;
    }
    return path;
}

std::string read_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string golden(const std::string &name) {
    return read_file(std::filesystem::path(BIPHOTON_GOLDEN_DIR) / name);
}

std::string error_of(const std::function<void()> &f) {
    try {
        f();
    } catch (const CliError &e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST(cli, scan_flags) {
    auto cfg = parse({"scan", "--points", "360", "--seed", "42"});
    EXPECT_EQ(cfg.command, Command::kScan);
    EXPECT_EQ(cfg.points, 360u);
    EXPECT_EQ(cfg.seed, 42u);
    EXPECT_EQ(cfg.trials, RunConfig{}.trials);
    EXPECT_EQ(cfg.trials, 100000u);
}

TEST(cli, chsh_defaults_to_optimal_quadruple) {
    auto cfg = parse({"chsh"});
    EXPECT_EQ(cfg.chsh.a, 0);
    EXPECT_EQ(cfg.chsh.a_prime, kPi / 2);
    EXPECT_EQ(cfg.chsh.b, kPi / 4);
    EXPECT_EQ(cfg.chsh.b_prime, 3 * kPi / 4);
}

TEST(cli, amplitude_norm_check) {
    auto msg = error_of([] { parse({"cat", "--c1", "0.5477", "--c2", "0.8367"}); });
    EXPECT_NE(msg.find("amplitudes"), std::string::npos);
    auto cfg = parse({"cat", "--c1", "0.6", "--c2", "0.8000001", "--trials", "10"});
    auto out = run_command(cfg);
    auto c1 = out.json["config"]["c1"][0].get<double>();
    auto c2 = out.json["config"]["c2"][0].get<double>();
    EXPECT_NEAR(c1 * c1 + c2 * c2, 1, 1e-15);
    EXPECT_NO_THROW(parse({"cat", "--c1", "sqrt(0.3)", "--c2", "sqrt(0.7)"}));
}

TEST(cli, usage_errors) {
    EXPECT_NE(error_of([] { parse({"--points", "4"}); }).find("missing subcommand"), std::string::npos);
    EXPECT_NE(error_of([] { parse({"scan", "--bogus", "1"}); }), "");
    EXPECT_NE(error_of([] { parse({"scan", "--points", "4x"}); }).find("--points"), std::string::npos);
    EXPECT_NE(error_of([] { parse({"teleport"}); }).find("teleport"), std::string::npos);
    EXPECT_NE(error_of([] { parse({"decohere", "--theta", "2"}); }), "");
    EXPECT_NE(error_of([] { parse({"zwm", "--gamma", "0.9+0.9i"}); }), "");
    EXPECT_NE(error_of([] { parse({"trials", "--trials", "0"}); }), "");
    for (const auto &msg : {error_of([] { parse({"scan", "--bogus"}); }), error_of([] { parse({}); })}) {
        EXPECT_EQ(msg.find('\n'), std::string::npos);
    }
}

TEST(cli, help_returns_no_config) {
    ::testing::internal::CaptureStdout();
    auto cfg = parse_args({"--help"});
    auto text = ::testing::internal::GetCapturedStdout();
    EXPECT_FALSE(cfg.has_value());
    for (const auto &[key, doc] : setting_docs()) {
        if (key == "command") {
            continue;
        }
        std::string flag = "--" + key;
        std::replace(flag.begin(), flag.end(), '_', '-');
        EXPECT_NE(text.find(flag), std::string::npos) << flag;
        if (!doc.first.empty() && key != "quiet" && key != "timing") {
            EXPECT_NE(text.find("[" + doc.first + "]"), std::string::npos) << flag;
        }
    }
}

TEST(cli, angle_literals) {
    EXPECT_EQ(parse_angle("pi/3"), kPi / 3);
    EXPECT_EQ(parse_angle("pi"), kPi);
    EXPECT_EQ(parse_angle("-pi/4"), -kPi / 4);
    EXPECT_EQ(parse_angle("3pi/4"), 3 * kPi / 4);
    EXPECT_EQ(parse_angle("2*pi/3"), 2 * kPi / 3);
    EXPECT_EQ(parse_angle("1.0471975512"), 1.0471975512);
    EXPECT_THROW(parse_angle("pi/0"), CliError);
    EXPECT_THROW(parse_angle("90deg"), CliError);
    EXPECT_THROW(parse_angle("pi/3x"), CliError);
}

TEST(cli, number_literals) {
    EXPECT_EQ(parse_real(" 1e-3 "), 1e-3);
    EXPECT_EQ(parse_real("+2"), 2);
    EXPECT_THROW(parse_real("nan"), CliError);
    EXPECT_THROW(parse_real("1.0.0"), CliError);
    EXPECT_THROW(parse_real(""), CliError);
    EXPECT_EQ(parse_unsigned("18446744073709551615"), 18446744073709551615ULL);
    EXPECT_THROW(parse_unsigned("-1"), CliError);
    EXPECT_THROW(parse_unsigned("18446744073709551616"), CliError);
}

TEST(cli, complex_literals) {
    EXPECT_EQ(parse_complex("0.6"), Complex(0.6, 0));
    EXPECT_EQ(parse_complex("sqrt(0.5)"), Complex(std::sqrt(0.5), 0));
    EXPECT_EQ(parse_complex("-sqrt(0.5)"), Complex(-std::sqrt(0.5), 0));
    EXPECT_EQ(parse_complex("0.3+0.4i"), Complex(0.3, 0.4));
    EXPECT_EQ(parse_complex("0.3-0.4i"), Complex(0.3, -0.4));
    EXPECT_EQ(parse_complex("1e-3-2e-3i"), Complex(1e-3, -2e-3));
    EXPECT_EQ(parse_complex("0.5i"), Complex(0, 0.5));
    EXPECT_EQ(parse_complex("-i"), Complex(0, -1));
    EXPECT_THROW(parse_complex("0.3+0.4j"), CliError);
    EXPECT_THROW(parse_complex("sqrt(-1)"), CliError);
}

TEST(cli, scenario_file) {
    auto path = temp_file("scan.txt", "# comment line\ncommand = scan\npoints = 8   # inline comment\n\n");
    auto cfg = load_scenario(path);
    EXPECT_EQ(cfg.command, Command::kScan);
    EXPECT_EQ(cfg.points, 8u);
}

TEST(cli, scenario_angle_value) {
    RunConfig cfg;
    apply_scenario_text(cfg, "phi_s = 1.0471975512\n");
    EXPECT_NEAR(cfg.settings.phi_s, kPi / 3, 1e-10);
    apply_scenario_text(cfg, "phi_s = pi/3\n");
    EXPECT_EQ(cfg.settings.phi_s, kPi / 3);
}

TEST(cli, scenario_errors_name_key_and_line) {
    RunConfig cfg;
    auto msg = error_of([&] { apply_scenario_text(cfg, "foo = 1\n", "s.txt"); });
    EXPECT_NE(msg.find("'foo'"), std::string::npos);
    EXPECT_NE(msg.find("s.txt:1:"), std::string::npos);
    msg = error_of([&] { apply_scenario_text(cfg, "seed = 1\npoints 4\n", "s.txt"); });
    EXPECT_NE(msg.find("s.txt:2:"), std::string::npos);
    msg = error_of([&] { apply_scenario_text(cfg, "\n\npoints = -3\n", "s.txt"); });
    EXPECT_NE(msg.find("s.txt:3:"), std::string::npos);
    EXPECT_THROW(load_scenario(temp_file("does_not_exist.txt")), CliError);
}

TEST(cli, precedence_flags_over_scenario_over_env) {
    auto path = temp_file("seeded.txt", "command = trials\nseed = 7\ntrials = 50\n");
    EXPECT_EQ(parse({"scan"}, "99").seed, 99u);
    EXPECT_EQ(parse({"--scenario", path.string()}, "99").seed, 7u);
    auto cfg = parse({"--scenario", path.string(), "--seed", "3", "scan"}, "99");
    EXPECT_EQ(cfg.seed, 3u);
    EXPECT_EQ(cfg.command, Command::kScan);
    EXPECT_EQ(cfg.trials, 50u);
    EXPECT_NE(error_of([] { parse({"scan"}, "abc"); }).find("BIPHOTON_SEED"), std::string::npos);
}

TEST(cli, scenario_round_trip_of_defaults) {
    RunConfig defaults;
    RunConfig back;
    apply_scenario_text(back, to_scenario_text(defaults));
    EXPECT_EQ(back, defaults);
}

TEST(cli, scenario_round_trip_of_custom_config) {
    RunConfig cfg;
    cfg.command = Command::kZwm;
    cfg.seed = 123456789012345ULL;
    cfg.settings = {kPi / 3, -0.1};
    cfg.c1 = Complex(0.6, -0.0);
    cfg.c2 = Complex(0, 0.8);
    cfg.gamma = std::polar(0.3, 1.0);
    cfg.decoherence = {0.1, 7};
    cfg.out_csv = "x.csv";
    cfg.quiet = true;
    RunConfig back;
    apply_scenario_text(back, to_scenario_text(cfg));
    EXPECT_EQ(back, cfg);
    EXPECT_TRUE(std::signbit(back.c1.imag()));
}

TEST(cli, scan_csv_rows) {
    auto out = run_command(parse({"scan", "--points", "4", "--trials", "100"}));
    EXPECT_EQ(std::count(out.csv.begin(), out.csv.end(), '\n'), 5);
    EXPECT_TRUE(out.csv.starts_with("delta,c_analytic,c_empirical,n11,n12,n21,n22\n"));
    EXPECT_TRUE(out.all_passed);
}

TEST(cli, emit_is_byte_identical) {
    auto cfg = parse({"chsh", "--trials", "2000"});
    cfg.out_csv = temp_file("a.csv").string();
    cfg.out_json = temp_file("a.json").string();
    emit(run_command(cfg), cfg);
    auto csv1 = read_file(cfg.out_csv);
    auto json1 = read_file(cfg.out_json);
    cfg.threads = 4;
    emit(run_command(cfg), cfg);
    EXPECT_EQ(read_file(cfg.out_csv), csv1);
    EXPECT_EQ(read_file(cfg.out_json), json1);
    EXPECT_EQ(json1.find('\r'), std::string::npos);
    EXPECT_TRUE(json1.ends_with("}\n"));
}

TEST(cli, emit_reports_io_failure) {
    auto cfg = parse({"zwm"});
    cfg.out_csv = "/nonexistent_dir_for_biphoton/out.csv";
    EXPECT_THROW(emit(run_command(cfg), cfg), CliError);
}

TEST(cli, nosignal_json_reports_marginal_deviation) {
    auto out = run_command(parse({"nosignal", "--trials", "0"}));
    ASSERT_TRUE(out.json["results"].contains("max_marginal_deviation"));
    EXPECT_LT(out.json["results"]["max_marginal_deviation"].get<double>(), 1e-12);
    EXPECT_EQ(out.json["format_version"], "1");
    EXPECT_EQ(out.json["seed"], 42);
}

TEST(cli, every_command_passes_its_gates) {
    for (auto name : command_names()) {
        auto out = run_command(parse({std::string(name), "--trials", "5000", "--points", "12"}));
        EXPECT_TRUE(out.all_passed) << name;
        EXPECT_FALSE(out.gates.empty()) << name;
        EXPECT_EQ(out.json["invariants"].size(), out.gates.size()) << name;
    }
}

TEST(cli, timing_is_opt_in) {
    EXPECT_FALSE(run_command(parse({"zwm"})).json.contains("timing"));
    EXPECT_TRUE(run_command(parse({"zwm", "--timing"})).json.contains("timing"));
}

TEST(cli, exit_codes) {
    ::testing::internal::CaptureStdout();
    EXPECT_EQ(main_entry({"--help"}, nullptr), 0);
    ::testing::internal::GetCapturedStdout();
    ::testing::internal::CaptureStderr();
    EXPECT_EQ(main_entry({"ambiguity"}, nullptr), 0);
    EXPECT_EQ(main_entry({"scan", "--points", "1"}, nullptr), 2);
    EXPECT_EQ(main_entry({"cat", "--c1", "1", "--c2", "1"}, nullptr), 2);
    auto err = ::testing::internal::GetCapturedStderr();
    EXPECT_NE(err.find("biphoton: error: --points"), std::string::npos);
}

TEST(cli, golden_scan) {
    auto out = run_command(parse({"scan", "--points", "4", "--trials", "1000", "--seed", "42"}));
    EXPECT_EQ(out.csv, golden("scan_4.csv"));
    EXPECT_EQ(dump_json(out.json), golden("scan_4.json"));
}

TEST(cli, golden_ambiguity) {
    auto out = run_command(parse({"ambiguity", "--c1", "sqrt(0.3)", "--c2", "sqrt(0.7)"}));
    EXPECT_EQ(out.csv, golden("ambiguity_03.csv"));
    EXPECT_EQ(dump_json(out.json), golden("ambiguity_03.json"));
}
