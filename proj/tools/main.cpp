#include "gfilt/denoise.hpp"
#include "gfilt/errors.hpp"
#include "gfilt/experiments.hpp"
#include "gfilt/graph.hpp"
#include "gfilt/rng.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

using gfilt::experiments::Config;

struct CommonOpts {
    std::string config_path;
    std::string out_dir = "out";
    std::int64_t seed = -1;
    std::int64_t trials = -1;
    std::int64_t degree = -1;
    std::int64_t iters = -1;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "configuration file");
    cmd->add_option("--out", opts.out_dir, "output directory");
    cmd->add_option("--seed", opts.seed, "PRNG seed override");
    cmd->add_option("--trials", opts.trials, "trial count override");
    cmd->add_option("--degree", opts.degree, "polynomial degree M override");
    cmd->add_option("--iters", opts.iters, "iteration count override");
}

int run(const std::string& experiment, const CommonOpts& opts) {
    Config config;
    if (!opts.config_path.empty()) config = Config::load(opts.config_path);
    if (opts.seed >= 0) config.set(experiment, "seed", std::to_string(opts.seed));
    if (opts.trials >= 0) config.set(experiment, "trials", std::to_string(opts.trials));
    if (opts.degree >= 0) config.set(experiment, "degree", std::to_string(opts.degree));
    if (opts.iters >= 0) config.set(experiment, "iters", std::to_string(opts.iters));

    const auto result = gfilt::experiments::run_experiment(experiment, config, opts.out_dir);
    for (const auto& file : result.files) std::cout << "wrote " << file.string() << "\n";
    return 0;
}

int run_graph_gen(const std::string& type, std::size_t n, const std::vector<std::size_t>& gens,
                  const std::string& points_path, std::size_t k, const std::string& out_path) {
    std::optional<gfilt::Graph> graph;
    if (type == "circulant") {
        graph = gfilt::build_circulant(n, gens);
    } else if (type == "path") {
        graph = gfilt::build_path(n);
    } else if (type == "knn") {
        std::ifstream in(points_path);
        if (!in) throw gfilt::Error(gfilt::errc::io_error, "cannot open " + points_path);
        graph = gfilt::build_knn(gfilt::read_points(in), k);
    } else {
        throw gfilt::Error(gfilt::errc::invalid_argument, "unknown graph type '" + type + "'");
    }
    std::ofstream out(out_path);
    if (!out) throw gfilt::Error(gfilt::errc::io_error, "cannot open " + out_path);
    gfilt::write_edge_list(out, *graph);
    std::cout << "wrote " << out_path << " (" << graph->num_vertices() << " vertices, "
              << graph->num_edges() << " edges)\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Polynomial graph filters of commuting shifts: Chebyshev inverse filtering, "
                 "a vertex-level distributed simulator, and a Tikhonov denoising pipeline"};
    app.require_subcommand(1);

    std::map<std::string, CommonOpts> opts;
    for (const char* name : {"table1", "table2", "convergence", "distributed-check",
                             "denoise-sweep"}) {
        auto* cmd = app.add_subcommand(name, std::string("run the ") + name + " experiment");
        add_common(cmd, opts[name]);
    }

    auto* graph_cmd = app.add_subcommand("graph", "graph utilities");
    auto* gen_cmd = graph_cmd->add_subcommand("gen", "generate a graph edge list");
    std::string gen_type = "circulant", gen_points, gen_out = "graph.edges";
    std::size_t gen_n = 8, gen_k = 5;
    std::vector<std::size_t> gen_gens = {1};
    gen_cmd->add_option("--type", gen_type, "circulant | path | knn");
    gen_cmd->add_option("--n", gen_n, "vertex count (circulant, path)");
    gen_cmd->add_option("--generators", gen_gens, "circulant generators")->delimiter(',');
    gen_cmd->add_option("--points", gen_points, "point-cloud file (knn)");
    gen_cmd->add_option("--k", gen_k, "neighbor count (knn)");
    gen_cmd->add_option("--out", gen_out, "output edge-list path");

    CLI11_PARSE(app, argc, argv);

    try {
        for (auto& [name, o] : opts)
            if (app.get_subcommand(name)->parsed()) return run(name, o);
        if (gen_cmd->parsed())
            return run_graph_gen(gen_type, gen_n, gen_gens, gen_points, gen_k, gen_out);
        std::cerr << "error: no subcommand\n";
        return 64;
    } catch (const gfilt::Error& err) {
        std::cerr << "error: " << err.what() << "\n";
        return static_cast<int>(err.code());
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 70;
    }
}
