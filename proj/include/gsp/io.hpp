#pragma once

#include "gsp/harness.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace gsp::io {

/// Parses `id,lat,lon,value` CSV. All malformed rows are reported together with line numbers.
StationTable parse_station_csv(std::istream& in, const std::string& source = "<stream>");
StationTable read_station_csv(const std::filesystem::path& path);

/// What a config file describes: the experiment plus where its data comes from.
struct RunSpec {
    ExperimentConfig experiment;
    std::optional<std::string> stations;  // CSV path; synthetic stations when absent
    int synthetic_nodes = 299;
    double burn_in = 0.5;
};

/// Flat JSON object; unknown keys and every invalid value are reported in one error.
RunSpec parse_config(const nlohmann::json& j);
RunSpec read_config(const std::filesystem::path& path);
nlohmann::json to_json(const RunSpec& spec);

/// Shortest round-trip decimal ("%.17g"); non-finite values print as inf, -inf, nan.
std::string format_number(double v);

/// FNV-1a over raw bytes, as 16 hex digits.
std::string digest_hex(const void* data, std::size_t bytes);
std::string digest(const Vector& v);
std::string digest(const StationTable& stations);

inline const std::vector<std::string> results_columns{"t", "msd_emp_db", "msd_theory_paper_db",
                                                      "msd_theory_exact_db"};
inline const std::vector<std::string> theory_columns{"t", "msd_theory_paper_db", "msd_theory_exact_db"};

void write_results_csv(std::ostream& out, const RunResult& result);
void write_theory_csv(std::ostream& out, const TheoryCurve& paper, const TheoryCurve& exact);

/// Header name -> column values. Rejects ragged rows.
std::map<std::string, std::vector<double>> read_numeric_csv(const std::filesystem::path& path);

/// Eigendecomposition cache keyed by (station digest, k).
struct CachedGraph {
    Graph graph;
    GftBasis basis;
};

std::filesystem::path cache_path(const std::filesystem::path& dir, const StationTable& stations, int k);
std::optional<CachedGraph> load_cached_graph(const std::filesystem::path& file, Eigen::Index n);
void store_cached_graph(const std::filesystem::path& file, const CachedGraph& cached);

/// Graph and basis from the cache when present, computed (and stored, if a directory is given) otherwise.
CachedGraph graph_with_cache(const StationTable& stations, int k, const std::optional<std::filesystem::path>& dir);

}  // namespace gsp::io
