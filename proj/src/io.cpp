#include "gsp/io.hpp"

#include "gsp/error.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace gsp::io {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& line, char sep = ',') {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, sep)) out.push_back(trim(field));
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

std::optional<double> parse_double(const std::string& s) {
    double v = 0.0;
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || ptr != end) {
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
        return std::nullopt;
    }
    return v;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
    return out;
}

}  // namespace

StationTable parse_station_csv(std::istream& in, const std::string& source) {
    std::string line;
    if (!std::getline(in, line)) fail(ErrorKind::io, source + ": empty file, expected header id,lat,lon,value");
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    if (split(trim(line)) != std::vector<std::string>{"id", "lat", "lon", "value"})
        fail(ErrorKind::io, source + ":1: expected header 'id,lat,lon,value', got '" + trim(line) + "'");

    StationTable table;
    std::vector<std::string> problems;
    std::set<std::string> ids;
    for (int lineno = 2; std::getline(in, line); ++lineno) {
        if (trim(line).empty()) continue;
        const auto fields = split(trim(line));
        const auto where = source + ":" + std::to_string(lineno) + ": ";
        if (fields.size() != 4) {
            problems.push_back(where + "expected 4 fields, got " + std::to_string(fields.size()));
            continue;
        }
        const auto lat = parse_double(fields[1]);
        const auto lon = parse_double(fields[2]);
        const auto value = parse_double(fields[3]);
        if (fields[0].empty()) problems.push_back(where + "empty id");
        else if (!ids.insert(fields[0]).second) problems.push_back(where + "duplicate id '" + fields[0] + "'");
        if (!lat || !std::isfinite(*lat) || std::abs(*lat) > 90.0) problems.push_back(where + "bad latitude '" + fields[1] + "'");
        if (!lon || !std::isfinite(*lon) || std::abs(*lon) > 180.0) problems.push_back(where + "bad longitude '" + fields[2] + "'");
        if (!value || !std::isfinite(*value)) problems.push_back(where + "bad value '" + fields[3] + "'");
        if (lat && lon && value) {
            table.ids.push_back(fields[0]);
            table.lat.push_back(*lat);
            table.lon.push_back(*lon);
            table.signal.push_back(*value);
        }
    }
    if (!problems.empty()) fail(ErrorKind::io, join(problems, "\n"));
    if (table.size() < 2) fail(ErrorKind::io, source + ": need at least 2 stations");
    table.validate();
    return table;
}

StationTable read_station_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::io, "cannot open station file " + path.string());
    return parse_station_csv(in, path.string());
}

RunSpec parse_config(const nlohmann::json& j) {
    if (!j.is_object()) fail(ErrorKind::config, "config: top level must be a JSON object");

    static const std::set<std::string> known{"k",          "f",       "sample_size",   "scenario",
                                             "n_a",        "n_b",     "algorithm",     "param",
                                             "iterations", "runs",    "master_seed",   "sampling_strategy",
                                             "threads",    "stations", "synthetic_nodes", "burn_in"};
    std::vector<std::string> errors;
    for (const auto& [key, _] : j.items())
        if (!known.contains(key)) errors.push_back("unknown key '" + key + "'");

    RunSpec spec;
    auto& e = spec.experiment;

    auto get_int = [&](const char* key, auto& dst) {
        if (!j.contains(key)) return;
        if (!j[key].is_number_integer()) errors.push_back(std::string(key) + " must be an integer");
        else dst = j[key].get<std::remove_reference_t<decltype(dst)>>();
    };
    auto get_num = [&](const char* key, double& dst) {
        if (!j.contains(key)) return;
        if (!j[key].is_number()) errors.push_back(std::string(key) + " must be a number");
        else dst = j[key].get<double>();
    };
    auto get_str = [&](const char* key) -> std::optional<std::string> {
        if (!j.contains(key)) return std::nullopt;
        if (!j[key].is_string()) {
            errors.push_back(std::string(key) + " must be a string");
            return std::nullopt;
        }
        return j[key].get<std::string>();
    };

    get_int("k", e.k);
    get_int("f", e.f);
    get_int("sample_size", e.sample_size);
    get_int("iterations", e.iterations);
    get_int("runs", e.runs);
    get_int("threads", e.threads);
    get_int("synthetic_nodes", spec.synthetic_nodes);
    if (j.contains("master_seed")) {
        const auto& seed = j["master_seed"];
        if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<std::int64_t>() >= 0)) errors.push_back("master_seed must be a non-negative integer");
        else e.master_seed = j["master_seed"].get<std::uint64_t>();
    }
    get_num("param", e.param);
    get_num("burn_in", spec.burn_in);

    if (!j.contains("algorithm")) errors.push_back("missing required key 'algorithm'");
    if (auto a = get_str("algorithm")) {
        if (*a == "lms") e.algorithm = Algorithm::lms;
        else if (*a == "rls") e.algorithm = Algorithm::rls;
        else errors.push_back("algorithm must be 'lms' or 'rls', got '" + *a + "'");
    }
    if (!j.contains("param")) errors.push_back("missing required key 'param'");

    if (auto s = get_str("sampling_strategy")) {
        if (*s == "greedy") e.sampling_strategy = SamplingStrategy::greedy;
        else if (*s == "random") e.sampling_strategy = SamplingStrategy::random;
        else errors.push_back("sampling_strategy must be 'greedy' or 'random', got '" + *s + "'");
    }

    const bool custom_noise = j.contains("n_a") || j.contains("n_b");
    if (auto sc = get_str("scenario")) {
        if (custom_noise) errors.push_back("give either scenario or n_a/n_b, not both");
        try {
            const auto pair = scenario_by_name(*sc);
            e.scenario = *sc;
            e.n_a = pair.n_a;
            e.n_b = pair.n_b;
        } catch (const Error& err) {
            errors.push_back(err.what());
        }
    } else if (custom_noise) {
        e.n_a = 0.0;
        e.n_b = 0.0;
        get_num("n_a", e.n_a);
        get_num("n_b", e.n_b);
    }
    spec.stations = get_str("stations");

    for (auto& msg : e.validate()) errors.push_back(std::move(msg));
    if (spec.synthetic_nodes < 2) errors.push_back("synthetic_nodes must be at least 2");
    if (!(spec.burn_in >= 0.0 && spec.burn_in < 1.0)) errors.push_back("burn_in must be in [0, 1)");

    if (!errors.empty()) fail(ErrorKind::config, "invalid config:\n  " + join(errors, "\n  "));
    return spec;
}

RunSpec read_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::io, "cannot open config file " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& err) {
        fail(ErrorKind::config, path.string() + ": " + err.what());
    }
    return parse_config(j);
}

nlohmann::json to_json(const RunSpec& spec) {
    const auto& e = spec.experiment;
    nlohmann::json j{{"k", e.k},
                     {"f", e.f},
                     {"sample_size", e.sample_size},
                     {"algorithm", to_string(e.algorithm)},
                     {"param", e.param},
                     {"iterations", e.iterations},
                     {"runs", e.runs},
                     {"master_seed", e.master_seed},
                     {"sampling_strategy", to_string(e.sampling_strategy)},
                     {"threads", e.threads},
                     {"synthetic_nodes", spec.synthetic_nodes},
                     {"burn_in", spec.burn_in}};
    if (e.scenario.empty()) {
        j["n_a"] = e.n_a;
        j["n_b"] = e.n_b;
    } else {
        j["scenario"] = e.scenario;
    }
    if (spec.stations) j["stations"] = *spec.stations;
    return j;
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string digest_hex(const void* data, std::size_t bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < bytes; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string digest(const Vector& v) { return digest_hex(v.data(), static_cast<std::size_t>(v.size()) * sizeof(double)); }

std::string digest(const StationTable& stations) {
    std::string blob;
    for (std::size_t i = 0; i < stations.size(); ++i) {
        blob += stations.ids[i];
        blob.push_back('\0');
        for (double x : {stations.lat[i], stations.lon[i], stations.signal[i]})
            blob.append(reinterpret_cast<const char*>(&x), sizeof x);
    }
    return digest_hex(blob.data(), blob.size());
}

namespace {

double db_or_nan(double v) {
    if (v > 0.0) return 10.0 * std::log10(v);
    if (v == 0.0) return -std::numeric_limits<double>::infinity();
    return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

void write_results_csv(std::ostream& out, const RunResult& result) {
    out << join(results_columns, ",") << '\n';
    for (std::size_t i = 0; i < result.msd_mean.size(); ++i)
        out << (i + 1) << ',' << format_number(result.msd_mean_db[i]) << ','
            << format_number(db_or_nan(result.theory_paper.values[i])) << ','
            << format_number(db_or_nan(result.theory_exact.values[i])) << '\n';
}

void write_theory_csv(std::ostream& out, const TheoryCurve& paper, const TheoryCurve& exact) {
    require(paper.values.size() == exact.values.size(), "write_theory_csv: curve lengths differ");
    out << join(theory_columns, ",") << '\n';
    for (std::size_t i = 0; i < paper.values.size(); ++i)
        out << (i + 1) << ',' << format_number(db_or_nan(paper.values[i])) << ','
            << format_number(db_or_nan(exact.values[i])) << '\n';
}

std::map<std::string, std::vector<double>> read_numeric_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::io, "cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) fail(ErrorKind::io, path.string() + ": empty file");
    const auto header = split(trim(line));
    std::map<std::string, std::vector<double>> cols;
    for (const auto& h : header)
        if (!cols.emplace(h, std::vector<double>{}).second) fail(ErrorKind::io, path.string() + ": duplicate column " + h);
    for (int lineno = 2; std::getline(in, line); ++lineno) {
        if (trim(line).empty()) continue;
        const auto fields = split(trim(line));
        if (fields.size() != header.size())
            fail(ErrorKind::io, path.string() + ":" + std::to_string(lineno) + ": expected " +
                                    std::to_string(header.size()) + " fields");
        for (std::size_t c = 0; c < fields.size(); ++c) {
            const auto v = parse_double(fields[c]);
            if (!v) fail(ErrorKind::io, path.string() + ":" + std::to_string(lineno) + ": bad number '" + fields[c] + "'");
            cols[header[c]].push_back(*v);
        }
    }
    return cols;
}

std::filesystem::path cache_path(const std::filesystem::path& dir, const StationTable& stations, int k) {
    return dir / ("basis-" + digest(stations) + "-k" + std::to_string(k) + ".bin");
}

namespace {

constexpr char cache_magic[8] = {'G', 'S', 'P', 'B', 'A', 'S', '1', '\0'};

}  // namespace

std::optional<CachedGraph> load_cached_graph(const std::filesystem::path& file, Eigen::Index n) {
    std::ifstream in(file, std::ios::binary);
    if (!in) return std::nullopt;
    char magic[8];
    std::int64_t stored_n = 0;
    in.read(magic, sizeof magic);
    in.read(reinterpret_cast<char*>(&stored_n), sizeof stored_n);
    if (!in || std::string_view(magic, 8) != std::string_view(cache_magic, 8) || stored_n != n) return std::nullopt;

    CachedGraph c{Graph{Matrix(n, n)}, GftBasis{Vector(n), Matrix(n, n)}};
    const auto bytes = [](Eigen::Index count) { return static_cast<std::streamsize>(count * static_cast<Eigen::Index>(sizeof(double))); };
    in.read(reinterpret_cast<char*>(c.graph.adjacency.data()), bytes(n * n));
    in.read(reinterpret_cast<char*>(c.basis.eigenvalues.data()), bytes(n));
    in.read(reinterpret_cast<char*>(c.basis.vectors.data()), bytes(n * n));
    if (!in) return std::nullopt;
    return c;
}

void store_cached_graph(const std::filesystem::path& file, const CachedGraph& cached) {
    std::filesystem::create_directories(file.parent_path());
    const auto tmp = file.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) fail(ErrorKind::io, "cannot write cache file " + tmp);
        const std::int64_t n = cached.graph.n();
        out.write(cache_magic, sizeof cache_magic);
        out.write(reinterpret_cast<const char*>(&n), sizeof n);
        const auto bytes = [](Eigen::Index count) { return static_cast<std::streamsize>(count * static_cast<Eigen::Index>(sizeof(double))); };
        out.write(reinterpret_cast<const char*>(cached.graph.adjacency.data()), bytes(n * n));
        out.write(reinterpret_cast<const char*>(cached.basis.eigenvalues.data()), bytes(n));
        out.write(reinterpret_cast<const char*>(cached.basis.vectors.data()), bytes(n * n));
        if (!out) fail(ErrorKind::io, "failed writing cache file " + tmp);
    }
    std::filesystem::rename(tmp, file);
}

CachedGraph graph_with_cache(const StationTable& stations, int k, const std::optional<std::filesystem::path>& dir) {
    const auto n = static_cast<Eigen::Index>(stations.size());
    if (dir) {
        if (auto hit = load_cached_graph(cache_path(*dir, stations, k), n)) return std::move(*hit);
    }
    Graph graph = build_knn_graph(stations, k);
    GftBasis basis = gft_basis(laplacian(graph));
    CachedGraph fresh{std::move(graph), std::move(basis)};
    if (dir) store_cached_graph(cache_path(*dir, stations, k), fresh);
    return fresh;
}

}  // namespace gsp::io
