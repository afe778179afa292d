#include "gfilt/experiments.hpp"
#include "gfilt/denoise.hpp"
#include "gfilt/distributed.hpp"
#include "gfilt/errors.hpp"
#include "gfilt/graph.hpp"
#include "gfilt/rng.hpp"
#include "gfilt/shift.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace gfilt::experiments {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error(errc::io_error, "cannot open " + path.string() + " for writing");
    return out;
}

} // namespace

Config Config::parse(std::istream& in) {
    Config cfg;
    std::string line, section;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']') {
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error(errc::io_error, "config line without '=': " + line);
        cfg.set(section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

Config Config::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(errc::io_error, "cannot open config " + path.string());
    return parse(in);
}

void Config::set(const std::string& section, const std::string& key, const std::string& value) {
    sections_[section][key] = value;
}

bool Config::has(const std::string& section, const std::string& key) const {
    auto sec = sections_.find(section);
    if (sec != sections_.end() && sec->second.count(key)) return true;
    sec = sections_.find("");
    return sec != sections_.end() && sec->second.count(key) > 0;
}

std::string Config::get_string(const std::string& section, const std::string& key,
                               const std::string& fallback) const {
    auto sec = sections_.find(section);
    if (sec != sections_.end()) {
        auto it = sec->second.find(key);
        if (it != sec->second.end()) return it->second;
    }
    sec = sections_.find("");
    if (sec != sections_.end()) {
        auto it = sec->second.find(key);
        if (it != sec->second.end()) return it->second;
    }
    return fallback;
}

std::uint64_t Config::get_u64(const std::string& section, const std::string& key,
                              std::uint64_t fallback) const {
    const std::string v = get_string(section, key, "");
    if (v.empty()) return fallback;
    try {
        return std::stoull(v);
    } catch (const std::exception&) {
        throw Error(errc::io_error, "config key '" + key + "' is not an integer: " + v);
    }
}

double Config::get_double(const std::string& section, const std::string& key,
                          double fallback) const {
    const std::string v = get_string(section, key, "");
    if (v.empty()) return fallback;
    try {
        return std::stod(v);
    } catch (const std::exception&) {
        throw Error(errc::io_error, "config key '" + key + "' is not a number: " + v);
    }
}

std::vector<double> Config::get_list(const std::string& section, const std::string& key,
                                     const std::vector<double>& fallback) const {
    if (!has(section, key)) return fallback;
    const std::string v = get_string(section, key, "");
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw Error(errc::io_error, "config key '" + key + "' has a bad list item: " + item);
        }
    }
    return out; // an explicitly empty value yields an empty list
}

std::string Config::canonical() const {
    std::ostringstream out;
    for (const auto& [section, entries] : sections_) {
        if (!section.empty()) out << "[" << section << "]\n";
        for (const auto& [key, value] : entries) out << key << " = " << value << "\n";
    }
    return out.str();
}

std::string content_hash(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << h;
    return out.str();
}

ScalarField h1_field() {
    return [](std::span<const double> t) { return (2.25 - t[0]) * (3.0 + t[0]); };
}

MultiPoly h1_poly() {
    return interpolate(h1_field(), Cube({Interval{0.0, 2.0}}), 2);
}

namespace {

std::filesystem::path write_manifest(const std::string& experiment, const Config& config,
                                     const std::filesystem::path& out_dir) {
    const std::string canonical = "experiment = " + experiment + "\n" + config.canonical();
    const auto path = out_dir / ("manifest_" + experiment + ".txt");
    auto out = open_out(path);
    out << canonical;
    out << "content_hash = " << content_hash(canonical) << "\n";
    return path;
}

std::vector<std::size_t> generator_list(const Config& config, const std::string& section) {
    std::vector<std::size_t> gens;
    for (double g : config.get_list(section, "generators", {1, 2, 5}))
        gens.push_back(static_cast<std::size_t>(g));
    return gens;
}

// Dense matrix of a filter, assembled column-by-column; exact up to the
// filter's own arithmetic, used for small-n spectral radius reports.
Eigen::MatrixXd dense_filter_matrix(const FilterSpec& f) {
    const auto n = static_cast<Eigen::Index>(f.dim());
    Eigen::MatrixXd m(n, n);
    std::vector<double> unit(f.dim(), 0.0);
    for (Eigen::Index j = 0; j < n; ++j) {
        unit[static_cast<std::size_t>(j)] = 1.0;
        const auto col = apply_filter(f, unit);
        for (Eigen::Index i = 0; i < n; ++i) m(i, j) = col[static_cast<std::size_t>(i)];
        unit[static_cast<std::size_t>(j)] = 0.0;
    }
    return m;
}

double least_squares_slope(std::span<const double> ys) {
    const auto n = static_cast<double>(ys.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < ys.size(); ++i) {
        const auto x = static_cast<double>(i);
        sx += x;
        sy += ys[i];
        sxx += x * x;
        sxy += x * ys[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace

RunResult run_table1(const Config& config, const std::filesystem::path& out_dir) {
    const std::string sec = "table1";
    const std::size_t max_degree = config.get_u64(sec, "max-degree", 4);
    const std::size_t grid = config.get_u64(sec, "grid", default_grid_per_dim(1));
    const Cube cube({Interval{0.0, 2.0}});
    const auto h1 = h1_field();

    std::vector<double> row_series, row_interp;
    for (std::size_t m = 0; m <= max_degree; ++m) {
        row_series.push_back(sup_error(h1, chebyshev_series_reciprocal(h1, cube, m), cube, grid));
        row_interp.push_back(sup_error(h1, interpolate_reciprocal(h1, cube, m), cube, grid));
    }

    const auto csv_path = out_dir / "table1.csv";
    auto out = open_out(csv_path);
    out << "# experiment=table1,grid=" << grid << "\n";
    out << "method";
    for (std::size_t m = 0; m <= max_degree; ++m) out << ",M=" << m;
    out << "\n" << std::setprecision(17);
    out << "ChebyPoly";
    for (double v : row_series) out << "," << v;
    out << "\nChebyInt";
    for (double v : row_interp) out << "," << v;
    out << "\n";

    return {{csv_path, write_manifest("table1", config, out_dir)}};
}

RunResult run_table2(const Config& config, const std::filesystem::path& out_dir) {
    const std::string sec = "table2";
    const std::size_t n = config.get_u64(sec, "n", 1000);
    const auto gens = generator_list(config, sec);
    const std::size_t degree = config.get_u64(sec, "degree", 1);
    const std::size_t iters = config.get_u64(sec, "iters", 5);
    const std::size_t trials = config.get_u64(sec, "trials", 1000);
    const std::uint64_t seed = config.get_u64(sec, "seed", 42);

    const Graph g = build_circulant(n, gens);
    // dense certification tightens the spectral cube, which is what the
    // Richardson step size keys on
    const Shift laplacian = with_dense_interval(sym_normalized_laplacian(g));
    const Cube cube({Interval{0.0, 2.0}});
    const auto h1 = h1_field();

    const FilterSpec filter_h({laplacian}, h1_poly());
    const FilterSpec c_interp({laplacian}, interpolate_reciprocal(h1, cube, degree));
    const FilterSpec c_series({laplacian}, chebyshev_series_reciprocal(h1, cube, degree));
    const FilterSpec arma_term = shift_poly_by_constant(filter_h, -1.0);

    enum { kCpa = 0, kCipa, kOgda, kArma, kAlgs };
    const char* names[kAlgs] = {"CPA", "CIPA", "OGDA", "ARMA"};
    std::vector<std::vector<double>> sums(kAlgs, std::vector<double>(iters, 0.0));
    std::vector<std::vector<std::size_t>> counts(kAlgs, std::vector<std::size_t>(iters, 0));

    std::vector<double> x(n), y;
    for (std::size_t trial = 0; trial < trials; ++trial) {
        Rng rng(seed, trial);
        for (auto& v : x) v = rng.uniform(-1.0, 1.0);
        y = apply_filter(filter_h, x);

        const auto accumulate = [&](int alg, const IterTrace& trace) {
            for (std::size_t m = 1; m <= iters && m < trace.rel_errors.size(); ++m) {
                sums[alg][m - 1] += trace.rel_errors[m];
                counts[alg][m - 1] += 1;
            }
        };
        accumulate(kCpa, cpa_solve(filter_h, c_series, y, iters, {}, x));
        accumulate(kCipa, cipa_solve(filter_h, c_interp, y, iters, {}, x));
        accumulate(kOgda, ogda_solve(filter_h, y, iters, {}, x));
        accumulate(kArma, arma_solve(arma_term, y, iters, {}, x));
    }

    const auto csv_path = out_dir / "table2.csv";
    auto out = open_out(csv_path);
    out << "# experiment=table2,n=" << n << ",M=" << degree << ",trials=" << trials
        << ",seed=" << seed << "\n";
    out << "algorithm";
    for (std::size_t m = 1; m <= iters; ++m) out << ",m=" << m;
    out << "\n" << std::setprecision(17);
    for (int alg = 0; alg < kAlgs; ++alg) {
        out << names[alg];
        for (std::size_t m = 0; m < iters; ++m) {
            out << ",";
            if (counts[alg][m] > 0) out << sums[alg][m] / static_cast<double>(counts[alg][m]);
        }
        out << "\n";
    }

    return {{csv_path, write_manifest("table2", config, out_dir)}};
}

RunResult run_convergence(const Config& config, const std::filesystem::path& out_dir) {
    const std::string sec = "convergence";
    const std::size_t n = config.get_u64(sec, "n", 60);
    const auto gens = generator_list(config, sec);
    const std::size_t degree = config.get_u64(sec, "degree", 2);
    const std::size_t iters = config.get_u64(sec, "iters", 25);
    const std::uint64_t seed = config.get_u64(sec, "seed", 42);

    const Graph g = build_circulant(n, gens);
    const Shift laplacian = with_dense_interval(sym_normalized_laplacian(g));
    const Cube cube({Interval{0.0, 2.0}});
    const FilterSpec filter_h({laplacian}, h1_poly());
    const FilterSpec filter_c({laplacian}, interpolate_reciprocal(h1_field(), cube, degree));

    std::vector<double> x(n);
    Rng rng(seed, 0);
    for (auto& v : x) v = rng.uniform(-1.0, 1.0);
    const auto y = apply_filter(filter_h, x);
    const auto trace = cipa_solve(filter_h, filter_c, y, iters, {}, x);

    const double bound = contraction_bound(filter_h, filter_c);
    const Eigen::MatrixXd dense_h = dense_filter_matrix(filter_h);
    const Eigen::MatrixXd dense_c = dense_filter_matrix(filter_c);
    const Eigen::MatrixXd residual_op =
        Eigen::MatrixXd::Identity(dense_h.rows(), dense_h.cols()) - dense_c * dense_h;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(residual_op, Eigen::EigenvaluesOnly);
    const double rho = std::max(std::abs(es.eigenvalues()(0)),
                                std::abs(es.eigenvalues()(es.eigenvalues().size() - 1)));

    // slope of ln(residual) over iterates still above the numerical floor
    std::vector<double> logs;
    const double floor = 1e-13 * trace.residual_norms.front();
    for (double r : trace.residual_norms) {
        if (r <= floor) break;
        logs.push_back(std::log(r));
    }
    const double slope = logs.size() >= 2 ? least_squares_slope(logs) : 0.0;

    const auto trace_path = out_dir / "convergence_trace.csv";
    {
        auto out = open_out(trace_path);
        write_trace_csv(out, trace, "cipa", degree, seed);
    }
    const auto summary_path = out_dir / "convergence_summary.csv";
    {
        auto out = open_out(summary_path);
        out << "n,M,contraction_bound,rho_dense,ln_residual_slope,ln_rho\n";
        out << std::setprecision(17) << n << "," << degree << "," << bound << "," << rho << ","
            << slope << "," << std::log(rho) << "\n";
    }
    const auto plot_path = out_dir / "plot_convergence.py";
    {
        auto out = open_out(plot_path);
        out << "#!/usr/bin/env python3\n"
               "\"\"\"Semilog residual decay of the recorded iteration trace.\"\"\"\n"
               "import csv\n"
               "import matplotlib.pyplot as plt\n"
               "\n"
               "rows = [r for r in csv.reader(open('convergence_trace.csv'))\n"
               "        if r and not r[0].startswith('#')][1:]\n"
               "m = [int(r[0]) for r in rows]\n"
               "res = [float(r[1]) for r in rows]\n"
               "plt.semilogy(m, res, marker='o')\n"
               "plt.xlabel('iteration m')\n"
               "plt.ylabel('residual norm')\n"
               "plt.tight_layout()\n"
               "plt.savefig('convergence.png', dpi=150)\n";
    }
    return {{trace_path, summary_path, plot_path, write_manifest("convergence", config, out_dir)}};
}

RunResult run_distributed_check(const Config& config, const std::filesystem::path& out_dir) {
    const std::string sec = "distributed-check";
    std::vector<std::size_t> sizes;
    for (double v : config.get_list(sec, "sizes", {100, 500, 1000}))
        sizes.push_back(static_cast<std::size_t>(v));
    const auto gens = generator_list(config, sec);
    const std::size_t degree = config.get_u64(sec, "degree", 2);
    const std::size_t iters = config.get_u64(sec, "iters", 5);
    const std::uint64_t seed = config.get_u64(sec, "seed", 42);

    if (sizes.empty()) {
        std::cerr << "warning: distributed-check got an empty graph list; nothing to do\n";
        return {{write_manifest("distributed-check", config, out_dir)}};
    }

    const auto csv_path = out_dir / "distributed_check.csv";
    auto out = open_out(csv_path);
    out << "# experiment=distributed-check,M=" << degree << ",iters=" << iters << ",seed=" << seed
        << "\n";
    out << "n,max_abs_deviation,rounds,messages,per_agent_max_messages,scratch_registers\n";
    out << std::setprecision(17);

    const Cube cube({Interval{0.0, 2.0}});
    for (std::size_t n : sizes) {
        const Graph g = build_circulant(n, gens);
        const Shift laplacian = sym_normalized_laplacian(g);
        const FilterSpec filter_h({laplacian}, h1_poly());
        const FilterSpec filter_c({laplacian}, interpolate_reciprocal(h1_field(), cube, degree));

        std::vector<double> x(n);
        Rng rng(seed, n);
        for (auto& v : x) v = rng.uniform(-1.0, 1.0);
        const auto y = apply_filter(filter_h, x);

        const auto central = cipa_solve(filter_h, filter_c, y, iters);
        Network net(filter_h, filter_c, y);
        RoundLedger ledger;
        const auto sim = net.sim_cipa(iters, ledger);

        double deviation = 0.0;
        for (std::size_t m = 0; m < central.iterates.size(); ++m)
            for (std::size_t i = 0; i < n; ++i)
                deviation = std::max(deviation,
                                     std::abs(central.iterates[m][i] - sim.iterates[m][i]));

        out << n << "," << deviation << "," << ledger.rounds << "," << ledger.messages << ","
            << ledger.per_agent_max_messages << "," << net.scratch_registers_per_agent() << "\n";
    }
    return {{csv_path, write_manifest("distributed-check", config, out_dir)}};
}

RunResult run_denoise_sweep(const Config& config, const std::filesystem::path& out_dir) {
    const std::string sec = "denoise-sweep";
    const std::size_t time_len = config.get_u64(sec, "T", 30);
    const std::size_t n_points = config.get_u64(sec, "n-points", 300);
    const std::size_t k = config.get_u64(sec, "k", 5);
    const double smoothness = config.get_double(sec, "smoothness", 150.0);
    const auto fractions = config.get_list(sec, "fractions", {0.2});
    const auto gamma_grid = config.get_list(sec, "gamma-grid", {0.0, 0.5, 1.0, 1.5, 2.0});
    const std::size_t degree = config.get_u64(sec, "degree", 3);
    const std::size_t iters = config.get_u64(sec, "iters", 3);
    const std::size_t trials = config.get_u64(sec, "trials", 20);
    const std::uint64_t seed = config.get_u64(sec, "seed", 42);
    const std::string solver_arg = config.get_string(sec, "solver", "all");

    std::vector<SweepSolver> solvers;
    if (solver_arg == "all")
        solvers = {SweepSolver::cipa, SweepSolver::ogda, SweepSolver::arma};
    else if (solver_arg == "cipa")
        solvers = {SweepSolver::cipa};
    else if (solver_arg == "ogda")
        solvers = {SweepSolver::ogda};
    else if (solver_arg == "arma")
        solvers = {SweepSolver::arma};
    else
        throw Error(errc::invalid_argument, "unknown solver '" + solver_arg + "'");

    const auto data = synth_dataset(time_len, n_points, k, smoothness, seed);
    const auto [s1, s2] =
        kron_pair(sym_normalized_laplacian(data.temporal), sym_normalized_laplacian(data.spatial));

    RunResult result;
    for (SweepSolver solver : solvers) {
        const auto sweep =
            denoise_sweep(data.signal, s1, s2, fractions, gamma_grid, solver, degree, iters,
                          trials, seed);
        for (double fraction : fractions) {
            SweepResult slice = sweep;
            slice.rows.clear();
            for (const auto& row : sweep.rows)
                if (row.fraction == fraction) slice.rows.push_back(row);
            std::ostringstream name;
            name << "denoise_sweep_" << solver_name(solver) << "_f" << fraction << ".csv";
            const auto path = out_dir / name.str();
            auto out = open_out(path);
            write_sweep_csv(out, slice);
            result.files.push_back(path);
        }
    }
    const auto plot_path = out_dir / "plot_denoise_sweep.py";
    {
        auto out = open_out(plot_path);
        out << "#!/usr/bin/env python3\n"
               "\"\"\"Heatmaps of mean output SNR over the penalty grid, one panel per "
               "sweep CSV in this directory.\"\"\"\n"
               "import csv\n"
               "import glob\n"
               "import matplotlib.pyplot as plt\n"
               "\n"
               "files = sorted(glob.glob('denoise_sweep_*.csv'))\n"
               "fig, axes = plt.subplots(1, len(files), figsize=(4 * len(files), 3.4), "
               "squeeze=False)\n"
               "for ax, path in zip(axes[0], files):\n"
               "    rows = [r for r in csv.reader(open(path))\n"
               "            if r and not r[0].startswith('#')][1:]\n"
               "    g1 = sorted({float(r[0]) for r in rows})\n"
               "    g2 = sorted({float(r[1]) for r in rows})\n"
               "    grid = [[0.0] * len(g2) for _ in g1]\n"
               "    for r in rows:\n"
               "        grid[g1.index(float(r[0]))][g2.index(float(r[1]))] = float(r[5])\n"
               "    im = ax.imshow(grid, origin='lower', aspect='auto',\n"
               "                   extent=[g2[0], g2[-1], g1[0], g1[-1]])\n"
               "    ax.set_title(path.replace('denoise_sweep_', '').replace('.csv', ''))\n"
               "    ax.set_xlabel('gamma2')\n"
               "    ax.set_ylabel('gamma1')\n"
               "    fig.colorbar(im, ax=ax, label='mean SNR (dB)')\n"
               "plt.tight_layout()\n"
               "plt.savefig('denoise_sweep.png', dpi=150)\n";
    }
    result.files.push_back(plot_path);
    result.files.push_back(write_manifest("denoise-sweep", config, out_dir));
    return result;
}

RunResult run_experiment(const std::string& name, const Config& config,
                         const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    if (name == "table1") return run_table1(config, out_dir);
    if (name == "table2") return run_table2(config, out_dir);
    if (name == "convergence") return run_convergence(config, out_dir);
    if (name == "distributed-check") return run_distributed_check(config, out_dir);
    if (name == "denoise-sweep") return run_denoise_sweep(config, out_dir);
    throw Error(errc::invalid_argument, "unknown experiment '" + name + "'");
}

} // namespace gfilt::experiments
