#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace gfilt {

/// Simple undirected graph: no self-loops, no multi-edges, 0-indexed vertices.
/// Adjacency is stored per vertex with sorted neighbor lists.
class Graph {
public:
    Graph(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges);

    std::size_t num_vertices() const { return n_; }
    std::size_t num_edges() const { return num_edges_; }
    std::size_t degree(std::size_t v) const { return adj_[v].size(); }
    const std::vector<std::size_t>& neighbors(std::size_t v) const { return adj_[v]; }
    bool has_edge(std::size_t i, std::size_t j) const;

    /// Edges as sorted (i, j) pairs with i < j.
    std::vector<std::pair<std::size_t, std::size_t>> edge_list() const;

private:
    std::size_t n_ = 0;
    std::size_t num_edges_ = 0;
    std::vector<std::vector<std::size_t>> adj_;
};

/// Circulant graph C(N, Q): vertices {0..N-1}, edges (i, i +/- q mod N) for q in Q.
/// Each generator must satisfy 1 <= q < N/2; the result is 2|Q|-regular.
Graph build_circulant(std::size_t n, const std::vector<std::size_t>& generators);

/// Path graph on n >= 2 vertices: edges (i, i+1).
Graph build_path(std::size_t n);

/// k-nearest-neighbor graph of a point cloud (Euclidean metric, union
/// symmetrization: (i,j) is an edge iff j is among the k nearest of i or
/// vice versa). Distance ties break toward the lower index.
Graph build_knn(const std::vector<std::vector<double>>& points, std::size_t k);

/// Edge-list text format: one "i j" pair per line, '#' comments.
/// Rejects self-loops and duplicate edges (in either orientation).
Graph read_edge_list(std::istream& in, std::size_t n);
void write_edge_list(std::ostream& out, const Graph& g);

/// Point-cloud file: header "n d" followed by one point per line.
std::vector<std::vector<double>> read_points(std::istream& in);
void write_points(std::ostream& out, const std::vector<std::vector<double>>& points);

} // namespace gfilt
