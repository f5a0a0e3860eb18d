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

#ifndef BIPHOTON_TOOLS_CLI_H
#define BIPHOTON_TOOLS_CLI_H

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "biphoton/experiments.h"
#include "biphoton/numerics.h"
#include "biphoton/optics.h"

namespace biphoton::cli {

inline constexpr std::string_view kFormatVersion = "1";

/// Bad flag, scenario line, value or I/O. The message is one line.
class CliError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

enum class Command { kScan, kTrials, kChsh, kNoSignal, kZwm, kDecohere, kCat, kAmbiguity };

std::string_view command_name(Command c);
Command parse_command(std::string_view name);
const std::vector<std::string_view> &command_names();

struct RunConfig {
    std::optional<Command> command;
    std::uint64_t seed = 42;
    std::uint64_t trials = 100000;
    std::size_t points = 360;
    /// nosignal lattice side.
    std::size_t grid = 32;
    /// nosignal random settings sampled when trials > 0.
    std::size_t settings_count = 10;
    PhaseSettings settings{};
    ChshSettings chsh = ChshSettings::optimal();
    /// Raw amplitudes as given; checked and renormalized at run time.
    Complex c1 = std::sqrt(0.5);
    Complex c2 = std::sqrt(0.5);
    /// zwm: a single overlap, or an 11-point sweep over [0, 1] when unset.
    std::optional<Complex> gamma;
    DecoherenceConfig decoherence{std::numbers::pi / 4, 10};
    unsigned threads = 1;
    std::string out_csv;
    std::string out_json;
    bool quiet = false;
    bool timing = false;

    bool operator==(const RunConfig &other) const = default;
};

// Value grammars. All reject trailing characters.
double parse_real(std::string_view text);
/// Plain real, or k*pi/d shorthand: "pi", "-pi/4", "3pi/4", "2*pi/3".
double parse_angle(std::string_view text);
/// "x", "sqrt(x)", "-sqrt(x)", "a+bi", "a-bi", "bi", "i".
Complex parse_complex(std::string_view text);
std::uint64_t parse_unsigned(std::string_view text);

/// Applies one key = value setting. Keys are the long flag names with
/// dashes replaced by underscores.
void apply_setting(RunConfig &cfg, std::string_view key, std::string_view value);
/// key -> (default value, help text) for every settable key.
const std::map<std::string, std::pair<std::string, std::string>> &setting_docs();

/// Flat "key = value" file, '#' comments. Errors carry the line number.
void apply_scenario_text(RunConfig &cfg, std::string_view text, std::string_view origin = "scenario");
void load_scenario(RunConfig &cfg, const std::filesystem::path &path);
RunConfig load_scenario(const std::filesystem::path &path);
/// Inverse of apply_scenario_text: every key, exact numbers.
std::string to_scenario_text(const RunConfig &cfg);

/// Precedence: flags > --scenario file > BIPHOTON_SEED > defaults.
/// `env_seed` is the BIPHOTON_SEED value if set. Throws CliError on bad
/// input; returns nullopt after printing help.
std::optional<RunConfig> parse_args(const std::vector<std::string> &argv, const char *env_seed = nullptr);

/// Cross-field checks that need the whole config, e.g. amplitude norm.
void validate(const RunConfig &cfg);

struct Gate {
    std::string name;
    bool passed = false;
    double value = 0;
    double tolerance = 0;
};

struct RunOutput {
    std::string csv;
    nlohmann::ordered_json json;
    std::vector<Gate> gates;
    bool all_passed = true;
};

RunOutput run_command(const RunConfig &cfg);

/// Writes CSV/JSON to the configured paths. Throws CliError on I/O failure.
void emit(const RunOutput &out, const RunConfig &cfg);

/// Whole tool: returns the process exit code. 0 iff every gate passed,
/// 1 if a gate failed, 2 on usage or I/O errors.
int main_entry(const std::vector<std::string> &argv, const char *env_seed);

}  // namespace biphoton::cli

#endif
