#include "gsp/commands.hpp"

#include <chrono>
#include <fstream>
#include <iomanip>
#include <ostream>

namespace gsp::cli {

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::io, "cannot write " + path.string());
    return out;
}

nlohmann::json deviation_json(const DeviationStats& d) {
    auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
    return {{"tail_begin_t", d.tail_begin + 1},
            {"paper_literal", {{"max_abs_db", num(d.paper.max_abs_db)}, {"mean_abs_db", num(d.paper.mean_abs_db)}}},
            {"exact_expectation", {{"max_abs_db", num(d.exact.max_abs_db)}, {"mean_abs_db", num(d.exact.mean_abs_db)}}},
            {"tail_mean_empirical", num(d.tail_mean_empirical)},
            {"tail_mean_paper", num(d.tail_mean_paper)},
            {"tail_mean_exact", num(d.tail_mean_exact)},
            {"tail_standard_error", num(d.tail_standard_error)}};
}

CaseSetup setup_for(const io::RunSpec& spec, const StationTable& stations,
                    const std::optional<std::filesystem::path>& cache_dir) {
    const auto& e = spec.experiment;
    auto cached = io::graph_with_cache(stations, e.k, cache_dir);
    return prepare_case(stations, std::move(cached.graph), std::move(cached.basis), e.f, e.sample_size,
                        e.sampling_strategy, derive_seed(e.master_seed, SeedPurpose::sampling));
}

}  // namespace

int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::config: return 2;
        case ErrorKind::invalid_argument: return 3;
        case ErrorKind::numerical: return 4;
        case ErrorKind::io: return 5;
    }
    return 1;
}

io::RunSpec load_spec(const std::filesystem::path& config, const Overrides& overrides) {
    auto spec = io::read_config(config);
    auto& e = spec.experiment;
    if (overrides.seed) e.master_seed = *overrides.seed;
    if (overrides.runs) e.runs = *overrides.runs;
    if (overrides.iterations) e.iterations = *overrides.iterations;
    if (overrides.threads) e.threads = *overrides.threads;
    return io::parse_config(io::to_json(spec));
}

StationTable load_stations(const io::RunSpec& spec, const std::filesystem::path& config_dir) {
    if (!spec.stations) return synthetic_stations(spec.synthetic_nodes, derive_seed(spec.experiment.master_seed, SeedPurpose::stations));
    std::filesystem::path p(*spec.stations);
    if (p.is_relative()) p = config_dir / p;
    return io::read_station_csv(p);
}

void cmd_build_graph(const BuildGraphOptions& opts, std::ostream& out) {
    const auto stations = io::read_station_csv(opts.csv);
    const auto cached = io::graph_with_cache(stations, opts.k, opts.cache_dir);
    const auto& g = cached.graph;
    const Vector deg = g.degrees();

    out << "nodes " << g.n() << '\n'
        << "edges " << g.edge_count() << '\n'
        << "k " << opts.k << '\n'
        << "degree_min " << deg.minCoeff() << '\n'
        << "degree_mean " << io::format_number(deg.mean()) << '\n'
        << "degree_max " << deg.maxCoeff() << '\n'
        << "lambda_2 " << io::format_number(cached.basis.eigenvalues.size() > 1 ? cached.basis.eigenvalues(1) : 0.0) << '\n'
        << "digest " << io::digest(stations) << '\n';

    if (opts.out_dir) {
        auto nodes = open_output(*opts.out_dir / "nodes.csv");
        nodes << "index,id,lat,lon,value,degree\n";
        for (std::size_t i = 0; i < stations.size(); ++i)
            nodes << i << ',' << stations.ids[i] << ',' << io::format_number(stations.lat[i]) << ','
                  << io::format_number(stations.lon[i]) << ',' << io::format_number(stations.signal[i]) << ','
                  << deg(static_cast<Eigen::Index>(i)) << '\n';
        auto edges = open_output(*opts.out_dir / "edges.csv");
        edges << "source,target\n";
        for (Eigen::Index i = 0; i < g.n(); ++i)
            for (Eigen::Index j = i + 1; j < g.n(); ++j)
                if (g.adjacency(i, j) != 0.0) edges << i << ',' << j << '\n';
    }
}

RunResult cmd_run(const RunOptions& opts, std::ostream& out) {
    const auto started = std::chrono::steady_clock::now();
    const auto spec = load_spec(opts.config, opts.overrides);
    const auto stations = load_stations(spec, opts.config.parent_path());
    const auto setup = setup_for(spec, stations, opts.cache_dir);
    const RunResult result = run_on_case(spec.experiment, setup);
    const DeviationStats deviation = compare(result, spec.burn_in);

    {
        auto csv = open_output(opts.output);
        io::write_results_csv(csv, result);
    }

    const auto& e = spec.experiment;
    std::vector<Eigen::Index> indices = result.sampling.indices();
    nlohmann::json manifest{
        {"software_version", version},
        {"config", io::to_json(spec)},
        {"seeds",
         {{"master_seed", e.master_seed},
          {"covariance_seed", result.noise.seed},
          {"sampling_seed", derive_seed(e.master_seed, SeedPurpose::sampling)},
          {"stations_seed", spec.stations ? nlohmann::json(nullptr)
                                          : nlohmann::json(derive_seed(e.master_seed, SeedPurpose::stations))}}},
        {"stations", {{"source", spec.stations ? *spec.stations : "synthetic"}, {"count", stations.size()}, {"digest", io::digest(stations)}}},
        {"graph", {{"edges", setup.graph.edge_count()}, {"edge_weights", "binary"}, {"symmetrization", "union"}, {"shift_operator", "combinatorial_laplacian"}}},
        {"sampling_indices", indices},
        {"c_w_digest", io::digest(result.noise.c_w)},
        {"s_f_energy", result.s_f_energy},
        {"averaging", "linear"},
        {"unstable", result.unstable},
        {"deviation", deviation_json(deviation)},
        {"wall_clock_seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count()}};
    const auto manifest_path = opts.manifest ? *opts.manifest : std::filesystem::path(opts.output.string() + ".manifest.json");
    auto mf = open_output(manifest_path);
    mf << manifest.dump(2) << '\n';

    out << "wrote " << result.msd_mean.size() << " rows to " << opts.output.string() << '\n'
        << "tail mean |dB| paper-literal " << io::format_number(deviation.paper.mean_abs_db) << ", exact "
        << io::format_number(deviation.exact.mean_abs_db) << '\n';
    return result;
}

void cmd_theory(const RunOptions& opts, std::ostream& out) {
    const auto spec = load_spec(opts.config, opts.overrides);
    const auto stations = load_stations(spec, opts.config.parent_path());
    const auto setup = setup_for(spec, stations, opts.cache_dir);
    const auto noise = noise_for(spec.experiment, setup.band.n());
    const auto [paper, exact] = theory_curves(spec.experiment, setup, noise);
    auto csv = open_output(opts.output);
    io::write_theory_csv(csv, paper, exact);
    out << "wrote " << paper.values.size() << " rows to " << opts.output.string() << '\n';
}

DeviationStats cmd_compare(const CompareOptions& opts, std::ostream& out) {
    const auto cols = io::read_numeric_csv(opts.results);
    for (const auto* name : {"msd_emp_db", "msd_theory_paper_db", "msd_theory_exact_db"})
        if (!cols.contains(name)) fail(ErrorKind::io, opts.results.string() + ": missing column " + name);
    const auto d = compare_db(cols.at("msd_emp_db"), cols.at("msd_theory_paper_db"), cols.at("msd_theory_exact_db"),
                              opts.burn_in);

    const auto n = cols.at("msd_emp_db").size();
    out << "tail: t >= " << d.tail_begin + 1 << " (" << n - d.tail_begin << " of " << n << " iterations)\n"
        << std::left << std::setw(20) << "paper-literal" << "max |dB| " << io::format_number(d.paper.max_abs_db)
        << "  mean |dB| " << io::format_number(d.paper.mean_abs_db) << '\n'
        << std::setw(20) << "exact-expectation" << "max |dB| " << io::format_number(d.exact.max_abs_db)
        << "  mean |dB| " << io::format_number(d.exact.mean_abs_db) << '\n';
    const auto j = deviation_json(d);
    out << j.dump() << '\n';
    if (opts.json_out) {
        auto f = open_output(*opts.json_out);
        f << j.dump(2) << '\n';
    }
    return d;
}

}  // namespace gsp::cli
