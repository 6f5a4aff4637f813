#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "keanelab/dimension.hpp"

namespace keanelab {

/// Parsed and validated run configuration. Unknown keys are rejected and all
/// integer fields accept decimal strings (several exceed 64-bit range).
struct RunConfig {
    std::string command;

    std::optional<SequenceKind> kind;
    int depth = 0;
    std::optional<Rational> sequence_r;
    std::vector<std::pair<std::string, std::string>> explicit_pairs;

    int K = 0;
    bool has_K = false;

    std::vector<std::string> claims;
    std::vector<int> levels;
    std::optional<Rational> s;
    int L = 1;
    std::optional<Rational> r;
    std::optional<Rational> tolerance;
    Rational beta;
    std::optional<Rational> x;
    std::uint64_t horizon = 0;
    bool has_horizon = false;
    std::uint64_t step_budget = 50'000'000;
    int max_subintervals = 16;
    std::uint64_t bit_budget = 1'000'000;
    int proof_kmax = 8;

    nlohmann::json echo;  // canonical form of the parsed document
};

/// Throws ConfigError listing every violation found.
RunConfig parse_config(const std::string& text);

/// Generates or adopts the configured parameter sequence.
ParamSeq materialize_sequence(const RunConfig& cfg);

/// Runs the configured command, writes report files into out_dir and prints
/// one line per check to `log`. format is "json", "csv" or "both".
/// Returns 0 when every asserted check holds, 2 when any fails.
/// Configuration and budget problems throw (the CLI maps them to exit 1).
int run_command(const RunConfig& cfg, const std::string& out_dir, const std::string& format, int threads,
                std::ostream& log);

std::string tool_version();

}  // namespace keanelab
