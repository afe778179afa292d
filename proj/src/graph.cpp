#include "gfilt/graph.hpp"
#include "gfilt/errors.hpp"

#include <algorithm>
#include <iomanip>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

namespace gfilt {

const char* errc_name(errc code) {
    switch (code) {
        case errc::invalid_argument: return "invalid-argument";
        case errc::invalid_generator: return "invalid-generator";
        case errc::degree_zero_vertex: return "degree-zero";
        case errc::dimension_mismatch: return "dimension-mismatch";
        case errc::size_cap: return "size-cap";
        case errc::reciprocal_singularity: return "reciprocal-singularity";
        case errc::indefinite_filter: return "indefinite-filter";
        case errc::divergence: return "divergence";
        case errc::undefined_value: return "undefined-value";
        case errc::invalid_penalty: return "invalid-penalty";
        case errc::io_error: return "io-error";
    }
    return "unknown";
}

Graph::Graph(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) : n_(n) {
    if (n == 0) throw Error(errc::invalid_argument, "graph needs at least one vertex");
    adj_.resize(n);
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (auto [i, j] : edges) {
        if (i == j) throw Error(errc::invalid_argument, "self-loop at vertex " + std::to_string(i));
        if (i >= n || j >= n)
            throw Error(errc::invalid_argument, "edge endpoint out of range: (" + std::to_string(i) +
                                                    "," + std::to_string(j) + ")");
        auto key = std::minmax(i, j);
        if (!seen.insert(key).second)
            throw Error(errc::invalid_argument, "duplicate edge (" + std::to_string(key.first) + "," +
                                                    std::to_string(key.second) + ")");
        adj_[i].push_back(j);
        adj_[j].push_back(i);
    }
    num_edges_ = seen.size();
    for (auto& nbrs : adj_) std::sort(nbrs.begin(), nbrs.end());
}

bool Graph::has_edge(std::size_t i, std::size_t j) const {
    if (i >= n_ || j >= n_) return false;
    const auto& nbrs = adj_[i];
    return std::binary_search(nbrs.begin(), nbrs.end(), j);
}

std::vector<std::pair<std::size_t, std::size_t>> Graph::edge_list() const {
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    edges.reserve(num_edges_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j : adj_[i])
            if (i < j) edges.emplace_back(i, j);
    return edges;
}

Graph build_circulant(std::size_t n, const std::vector<std::size_t>& generators) {
    if (n < 3) throw Error(errc::invalid_argument, "circulant graph needs N >= 3");
    if (generators.empty()) throw Error(errc::invalid_generator, "empty generator set");
    std::set<std::size_t> qs;
    for (std::size_t q : generators) {
        if (q < 1 || 2 * q >= n)
            throw Error(errc::invalid_generator,
                        "generator " + std::to_string(q) + " outside [1, " + std::to_string(n) + "/2)");
        if (!qs.insert(q).second)
            throw Error(errc::invalid_generator, "duplicate generator " + std::to_string(q));
    }
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    edges.reserve(n * qs.size());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t q : qs) edges.emplace_back(i, (i + q) % n);
    return Graph(n, edges);
}

Graph build_path(std::size_t n) {
    if (n < 2) throw Error(errc::invalid_argument, "path graph needs n >= 2");
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    edges.reserve(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
    return Graph(n, edges);
}

Graph build_knn(const std::vector<std::vector<double>>& points, std::size_t k) {
    const std::size_t n = points.size();
    if (n < 2) throw Error(errc::invalid_argument, "kNN graph needs at least 2 points");
    if (k < 1 || k >= n)
        throw Error(errc::invalid_argument, "k must satisfy 1 <= k < number of points");
    const std::size_t dim = points[0].size();
    for (const auto& p : points)
        if (p.size() != dim) throw Error(errc::dimension_mismatch, "points of unequal dimension");

    std::vector<std::pair<std::size_t, std::size_t>> edges;
    std::set<std::pair<std::size_t, std::size_t>> seen;
    std::vector<std::pair<double, std::size_t>> dist(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        dist.clear();
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            double d2 = 0.0;
            for (std::size_t c = 0; c < dim; ++c) {
                const double diff = points[i][c] - points[j][c];
                d2 += diff * diff;
            }
            dist.emplace_back(d2, j);
        }
        // ties break toward the lower index via the pair's second component
        std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
        for (std::size_t r = 0; r < k; ++r) {
            auto key = std::minmax(i, dist[r].second);
            if (seen.insert(key).second) edges.emplace_back(key.first, key.second);
        }
    }
    return Graph(n, edges);
}

Graph read_edge_list(std::istream& in, std::size_t n) {
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        long long i, j;
        if (!(ss >> i)) continue; // blank line
        if (!(ss >> j) || i < 0 || j < 0)
            throw Error(errc::io_error, "malformed edge at line " + std::to_string(lineno));
        edges.emplace_back(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    }
    return Graph(n, edges); // Graph ctor rejects loops/duplicates
}

void write_edge_list(std::ostream& out, const Graph& g) {
    out << "# " << g.num_vertices() << " vertices, " << g.num_edges() << " edges\n";
    for (auto [i, j] : g.edge_list()) out << i << " " << j << "\n";
}

std::vector<std::vector<double>> read_points(std::istream& in) {
    std::size_t n = 0, d = 0;
    if (!(in >> n >> d) || n == 0 || d == 0)
        throw Error(errc::io_error, "point-cloud file: bad header");
    std::vector<std::vector<double>> points(n, std::vector<double>(d));
    for (auto& p : points)
        for (auto& x : p)
            if (!(in >> x)) throw Error(errc::io_error, "point-cloud file: truncated data");
    return points;
}

void write_points(std::ostream& out, const std::vector<std::vector<double>>& points) {
    if (points.empty()) throw Error(errc::invalid_argument, "empty point cloud");
    out << points.size() << " " << points[0].size() << "\n";
    out << std::setprecision(17);
    for (const auto& p : points) {
        for (std::size_t c = 0; c < p.size(); ++c) out << (c ? " " : "") << p[c];
        out << "\n";
    }
}

} // namespace gfilt
