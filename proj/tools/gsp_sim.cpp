// gsp_sim: graph construction, Monte Carlo runs and transient MSD theory for GSP LMS/RLS.

#include "gsp/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

void add_overrides(CLI::App* cmd, gsp::cli::Overrides& o) {
    cmd->add_option("--seed", o.seed, "Override master_seed");
    cmd->add_option("--runs", o.runs, "Override the number of Monte Carlo runs");
    cmd->add_option("--iterations", o.iterations, "Override the number of iterations");
    cmd->add_option("--threads", o.threads, "Worker threads (results do not depend on this)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adaptive estimation of bandlimited graph signals: LMS/RLS simulation and transient MSD theory"};
    app.set_version_flag("--version", gsp::cli::version);
    app.require_subcommand(1);

    gsp::cli::BuildGraphOptions graph_opts;
    std::string graph_out, graph_cache;
    auto* build = app.add_subcommand("build-graph", "Build the k-NN station graph and print a summary");
    build->add_option("csv", graph_opts.csv, "Station CSV (id,lat,lon,value)")->required();
    build->add_option("-k,--neighbors", graph_opts.k, "Neighbors per station")->required();
    build->add_option("--out", graph_out, "Directory for nodes.csv and edges.csv");
    build->add_option("--cache-dir", graph_cache, "Cache directory for the graph eigendecomposition");

    gsp::cli::RunOptions run_opts;
    std::string run_manifest, run_cache;
    auto* run = app.add_subcommand("run", "Monte Carlo experiment with both theory curves");
    run->add_option("config", run_opts.config, "Experiment config (JSON)")->required();
    run->add_option("-o,--output", run_opts.output, "Results CSV")->required();
    run->add_option("--manifest", run_manifest, "Manifest path (default <output>.manifest.json)");
    run->add_option("--cache-dir", run_cache, "Cache directory for the graph eigendecomposition");
    add_overrides(run, run_opts.overrides);

    gsp::cli::RunOptions theory_opts;
    std::string theory_cache;
    auto* theory = app.add_subcommand("theory", "Theory curves only, no simulation");
    theory->add_option("config", theory_opts.config, "Experiment config (JSON)")->required();
    theory->add_option("-o,--output", theory_opts.output, "Theory CSV")->required();
    theory->add_option("--cache-dir", theory_cache, "Cache directory for the graph eigendecomposition");
    add_overrides(theory, theory_opts.overrides);

    gsp::cli::CompareOptions compare_opts;
    std::string compare_json;
    auto* cmp = app.add_subcommand("compare", "Tail deviation between empirical and theory columns");
    cmp->add_option("results", compare_opts.results, "Results CSV written by 'run'")->required();
    cmp->add_option("--burn-in", compare_opts.burn_in, "Fraction of iterations skipped")->check(CLI::Range(0.0, 0.999999));
    cmp->add_option("--json", compare_json, "Also write the machine-readable report here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    auto opt_path = [](const std::string& s) {
        return s.empty() ? std::nullopt : std::optional<std::filesystem::path>(s);
    };

    try {
        if (*build) {
            graph_opts.out_dir = opt_path(graph_out);
            graph_opts.cache_dir = opt_path(graph_cache);
            gsp::cli::cmd_build_graph(graph_opts, std::cout);
        } else if (*run) {
            run_opts.manifest = opt_path(run_manifest);
            run_opts.cache_dir = opt_path(run_cache);
            gsp::cli::cmd_run(run_opts, std::cout);
        } else if (*theory) {
            theory_opts.cache_dir = opt_path(theory_cache);
            gsp::cli::cmd_theory(theory_opts, std::cout);
        } else if (*cmp) {
            compare_opts.json_out = opt_path(compare_json);
            gsp::cli::cmd_compare(compare_opts, std::cout);
        }
    } catch (const gsp::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return gsp::cli::exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
