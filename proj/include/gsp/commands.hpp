#pragma once

#include "gsp/error.hpp"
#include "gsp/harness.hpp"
#include "gsp/io.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>

namespace gsp::cli {

inline constexpr const char* version = "0.1.0";

/// Command-line values that take precedence over the config file.
struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<int> runs;
    std::optional<int> iterations;
    std::optional<int> threads;
};

struct BuildGraphOptions {
    std::filesystem::path csv;
    int k = 8;
    std::optional<std::filesystem::path> out_dir;    // nodes.csv + edges.csv for plotting
    std::optional<std::filesystem::path> cache_dir;
};

struct RunOptions {
    std::filesystem::path config;
    Overrides overrides;
    std::filesystem::path output;
    std::optional<std::filesystem::path> manifest;  // default: <output>.manifest.json
    std::optional<std::filesystem::path> cache_dir;
};

struct CompareOptions {
    std::filesystem::path results;
    double burn_in = 0.5;
    std::optional<std::filesystem::path> json_out;
};

/// Config file plus overrides, validated again after the overrides are applied.
io::RunSpec load_spec(const std::filesystem::path& config, const Overrides& overrides);

/// Station table named in the config, or the synthetic substitute.
StationTable load_stations(const io::RunSpec& spec, const std::filesystem::path& config_dir);

void cmd_build_graph(const BuildGraphOptions& opts, std::ostream& out);
RunResult cmd_run(const RunOptions& opts, std::ostream& out);
void cmd_theory(const RunOptions& opts, std::ostream& out);
DeviationStats cmd_compare(const CompareOptions& opts, std::ostream& out);

/// 2 config, 3 invalid input, 4 numerical failure, 5 file I/O.
int exit_code(ErrorKind kind);

}  // namespace gsp::cli
