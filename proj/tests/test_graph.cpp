#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gfilt/errors.hpp"
#include "gfilt/graph.hpp"
#include "gfilt/rng.hpp"
#include "gfilt/shift.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <sstream>

using namespace gfilt;

TEST_CASE("circulant: 8-cycle") {
    const Graph g = build_circulant(8, {1});
    CHECK(g.num_vertices() == 8);
    CHECK(g.num_edges() == 8);
    for (std::size_t v = 0; v < 8; ++v) CHECK(g.degree(v) == 2);
}

TEST_CASE("circulant: C(1000,{1,2,5}) is 6-regular with 3000 edges") {
    const Graph g = build_circulant(1000, {1, 2, 5});
    CHECK(g.num_edges() == 3000);
    for (std::size_t v = 0; v < 1000; ++v) CHECK(g.degree(v) == 6);
    // edge set enumerated from the definition
    for (std::size_t i = 0; i < 1000; ++i)
        for (std::size_t q : {1, 2, 5}) {
            CHECK(g.has_edge(i, (i + q) % 1000));
            CHECK(g.has_edge(i, (i + 1000 - q) % 1000));
        }
}

TEST_CASE("circulant: generator bounds") {
    CHECK_THROWS_AS(build_circulant(6, {3}), Error);        // 3 not < 6/2
    CHECK_THROWS_AS(build_circulant(8, {0}), Error);
    CHECK_THROWS_AS(build_circulant(8, {1, 1}), Error);     // duplicate
    CHECK_THROWS_AS(build_circulant(8, {}), Error);
    CHECK_NOTHROW(build_circulant(7, {3}));                 // 3 < 3.5
}

TEST_CASE("circulant is vertex-transitive: row i = row 0 shifted by i") {
    const std::size_t n = 30;
    const Graph g = build_circulant(n, {1, 4});
    const auto& base = g.neighbors(0);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::size_t> shifted;
        for (std::size_t j : base) shifted.push_back((j + i) % n);
        std::sort(shifted.begin(), shifted.end());
        CHECK(shifted == g.neighbors(i));
    }
}

TEST_CASE("path graph") {
    CHECK(build_path(2).num_edges() == 1);
    const Graph p59 = build_path(59);
    CHECK(p59.num_edges() == 58);
    CHECK(p59.degree(0) == 1);
    CHECK(p59.degree(58) == 1);
    const Graph p5 = build_path(5);
    const std::vector<std::size_t> want = {1, 2, 2, 2, 1};
    for (std::size_t v = 0; v < 5; ++v) CHECK(p5.degree(v) == want[v]);
    CHECK_THROWS_AS(build_path(1), Error);
}

TEST_CASE("knn: collinear points, union symmetrization") {
    // points at 0, 1, 10 with k=1: 1 is nearest to both 0 and 2
    const Graph g = build_knn({{0.0}, {1.0}, {10.0}}, 1);
    CHECK(g.num_edges() == 2);
    CHECK(g.has_edge(0, 1));
    CHECK(g.has_edge(1, 2));
    CHECK(!g.has_edge(0, 2));
}

TEST_CASE("knn: k = n-1 gives the complete graph") {
    Rng rng(7);
    std::vector<std::vector<double>> pts(6, std::vector<double>(3));
    for (auto& p : pts)
        for (auto& x : p) x = rng.next_double();
    const Graph g = build_knn(pts, 5);
    CHECK(g.num_edges() == 15);
}

TEST_CASE("knn: unit square corners with k=2 form the 4-cycle of sides") {
    const Graph g = build_knn({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, 2);
    CHECK(g.num_edges() == 4);
    CHECK(g.has_edge(0, 1));
    CHECK(g.has_edge(1, 2));
    CHECK(g.has_edge(2, 3));
    CHECK(g.has_edge(3, 0));
    CHECK(!g.has_edge(0, 2)); // diagonals excluded
    CHECK(!g.has_edge(1, 3));
}

TEST_CASE("knn: validation") {
    CHECK_THROWS_AS(build_knn({{0.0}}, 1), Error);
    CHECK_THROWS_AS(build_knn({{0.0}, {1.0}}, 2), Error);
    CHECK_THROWS_AS(build_knn({{0.0}, {1.0, 2.0}}, 1), Error);
    CHECK_NOTHROW(build_knn({{0.0}, {0.0}, {1.0}}, 1)); // duplicate points allowed
}

TEST_CASE("L^sym of the triangle: eigenvalues {0, 3/2, 3/2}") {
    const Shift l = sym_normalized_laplacian(build_circulant(3, {1}));
    const auto dense = oracles::to_dense(l);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense);
    CHECK(es.eigenvalues()(0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(es.eigenvalues()(1) == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(es.eigenvalues()(2) == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("L^sym of the 8-cycle matches the DFT eigenvalue oracle") {
    const Shift l = sym_normalized_laplacian(build_circulant(8, {1}));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(oracles::to_dense(l));
    auto expected = oracles::circulant_laplacian_eigenvalues(8, {1});
    std::sort(expected.begin(), expected.end());
    for (std::size_t i = 0; i < 8; ++i) {
        CHECK(es.eigenvalues()(static_cast<Eigen::Index>(i)) ==
              doctest::Approx(expected[i]).epsilon(1e-12));
        CHECK(expected[i] >= 0.0);
        CHECK(expected[i] <= 2.0);
    }
}

TEST_CASE("L^sym null vector of a connected graph is D^(1/2) 1") {
    const Graph g = build_knn({{0., 0.}, {1., 0.}, {2., 0.5}, {0.5, 2.}, {1.5, 1.5}}, 2);
    const Shift l = sym_normalized_laplacian(g);
    std::vector<double> v(g.num_vertices());
    for (std::size_t i = 0; i < g.num_vertices(); ++i)
        v[i] = std::sqrt(static_cast<double>(g.degree(i)));
    const auto lv = l.apply(v);
    for (double x : lv) CHECK(std::abs(x) < 1e-12);
}

TEST_CASE("L^sym rejects isolated vertices; rows sit on the graph") {
    CHECK_THROWS_AS(sym_normalized_laplacian(Graph(3, {{0, 1}})), Error);
    const Graph g = build_circulant(10, {1, 3});
    const Shift l = sym_normalized_laplacian(g);
    CHECK(shift_respects_graph(l, g));
    // exact symmetry
    for (std::size_t i = 0; i < l.dim(); ++i)
        for (const auto& e : l.row(i)) {
            bool found = false;
            for (const auto& back : l.row(e.col))
                if (back.col == i) {
                    CHECK(back.value == e.value);
                    found = true;
                }
            CHECK(found);
        }
}

TEST_CASE("kron_pair: 1x1 factors reduce to scalars") {
    const Shift a = Shift::from_triplets(1, {{0, 0, 3.0}}, {3.0, 3.0});
    const Shift b = Shift::from_triplets(1, {{0, 0, 5.0}}, {5.0, 5.0});
    const auto [s1, s2] = kron_pair(a, b);
    CHECK(s1.diagonal(0) == 5.0); // I (x) L_right
    CHECK(s2.diagonal(0) == 3.0); // L_left (x) I
}

TEST_CASE("kron_pair: mixed-product identity on random 3x3 symmetric factors") {
    Rng rng(3);
    auto random_sym = [&](std::size_t n) {
        std::vector<std::tuple<std::size_t, std::size_t, double>> trip;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) {
                const double v = rng.uniform(-1.0, 1.0);
                trip.emplace_back(i, j, v);
                if (i != j) trip.emplace_back(j, i, v);
            }
        Shift s = Shift::from_triplets(n, trip, {0.0, 0.0});
        return with_dense_interval(s);
    };
    const Shift a = random_sym(3), b = random_sym(3);
    const auto [s1, s2] = kron_pair(a, b);
    // (I (x) B)(A (x) I) == A (x) B == (A (x) I)(I (x) B), checked entrywise
    const auto d1 = oracles::to_dense(s1), d2 = oracles::to_dense(s2);
    const Eigen::MatrixXd lhs = d1 * d2, rhs = d2 * d1;
    CHECK((lhs - rhs).norm() == 0.0);
    const auto da = oracles::to_dense(a), db = oracles::to_dense(b);
    for (int i = 0; i < 9; ++i)
        for (int j = 0; j < 9; ++j)
            CHECK(lhs(i, j) == doctest::Approx(da(i / 3, j / 3) * db(i % 3, j % 3)).epsilon(1e-14));
}

TEST_CASE("kron_pair of path(3) x triangle commutes to 1e-12") {
    const Shift lt = sym_normalized_laplacian(build_path(3));
    const Shift lw = sym_normalized_laplacian(build_circulant(3, {1}));
    const auto [s1, s2] = kron_pair(lt, lw);
    CHECK(s1.dim() == 9);
    CHECK(commutator_fro_norm(s1, s2) < 1e-12);
    CHECK(check_commute(s1, s2, 1e-10));
    // dense multiplication oracle agrees
    const Eigen::MatrixXd c =
        oracles::to_dense(s1) * oracles::to_dense(s2) - oracles::to_dense(s2) * oracles::to_dense(s1);
    CHECK(c.norm() < 1e-12);
}

TEST_CASE("check_commute: self, and a generically failing pair") {
    const Shift l = sym_normalized_laplacian(build_path(4));
    CHECK(check_commute(l, l, 0.0));
    const Shift other = sym_normalized_laplacian(build_circulant(4, {1}));
    const double c = commutator_fro_norm(l, other);
    const Eigen::MatrixXd dense_comm = oracles::to_dense(l) * oracles::to_dense(other) -
                                       oracles::to_dense(other) * oracles::to_dense(l);
    CHECK(c == doctest::Approx(dense_comm.norm()).epsilon(1e-12));
    CHECK(!check_commute(l, other, 1e-10));
    CHECK_THROWS_AS(check_commute(l, sym_normalized_laplacian(build_path(5)), 1e-10), Error);
}

TEST_CASE("spectral_interval methods") {
    const Shift l = sym_normalized_laplacian(build_circulant(8, {1}));
    const auto analytic = spectral_interval(l, IntervalMethod::analytic_laplacian);
    CHECK(analytic.lo == 0.0);
    CHECK(analytic.hi == 2.0);

    const Shift id = Shift::identity(5);
    const auto gersh = spectral_interval(id, IntervalMethod::gershgorin);
    CHECK(gersh.lo == 1.0);
    CHECK(gersh.hi == 1.0);
    CHECK_THROWS_AS(spectral_interval(id, IntervalMethod::analytic_laplacian), Error);

    // 8-cycle: eigenvalue 2 attained at k = 4 (DFT oracle)
    const auto dense = spectral_interval(l, IntervalMethod::dense_eig);
    CHECK(dense.lo == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(dense.hi == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("dense_eig size cap") {
    const Shift big = Shift::identity(2001);
    CHECK_THROWS_AS(spectral_interval(big, IntervalMethod::dense_eig), Error);
}

TEST_CASE("constructed shifts keep their eigenvalues inside the certificate") {
    Rng rng(11);
    for (int trial = 0; trial < 4; ++trial) {
        std::vector<std::vector<double>> pts(20, std::vector<double>(2));
        for (auto& p : pts)
            for (auto& x : p) x = rng.uniform(0.0, 1.0);
        const Shift l = sym_normalized_laplacian(build_knn(pts, 3));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(oracles::to_dense(l));
        const auto iv = l.spectral_interval();
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
            CHECK(es.eigenvalues()(i) >= iv.lo - 1e-10);
            CHECK(es.eigenvalues()(i) <= iv.hi + 1e-10);
        }
        // gershgorin is also an enclosure
        const auto g = l.gershgorin();
        CHECK(es.eigenvalues()(0) >= g.lo - 1e-10);
        CHECK(es.eigenvalues()(es.eigenvalues().size() - 1) <= g.hi + 1e-10);
    }
}

TEST_CASE("graph invariants: no loops, duplicates, out-of-range") {
    CHECK_THROWS_AS(Graph(3, {{0, 0}}), Error);
    CHECK_THROWS_AS(Graph(3, {{0, 1}, {1, 0}}), Error);
    CHECK_THROWS_AS(Graph(3, {{0, 3}}), Error);
}

TEST_CASE("edge-list round trip and rejection") {
    const Graph g = build_circulant(6, {1, 2});
    std::stringstream ss;
    write_edge_list(ss, g);
    const Graph back = read_edge_list(ss, 6);
    CHECK(back.num_edges() == g.num_edges());
    for (auto [i, j] : g.edge_list()) CHECK(back.has_edge(i, j));

    std::stringstream loop("0 0\n");
    CHECK_THROWS_AS(read_edge_list(loop, 3), Error);
    std::stringstream dup("0 1\n1 0\n");
    CHECK_THROWS_AS(read_edge_list(dup, 3), Error);
    std::stringstream commented("# header\n0 1 # tail\n\n1 2\n");
    CHECK(read_edge_list(commented, 3).num_edges() == 2);
}

TEST_CASE("shift coordinate-format round trip") {
    const Shift l = with_dense_interval(sym_normalized_laplacian(build_circulant(7, {1, 2})));
    std::stringstream ss;
    write_shift(ss, l);
    const Shift back = read_shift(ss);
    CHECK(back.dim() == l.dim());
    CHECK(back.spectral_interval().lo == l.spectral_interval().lo);
    CHECK(back.spectral_interval().hi == l.spectral_interval().hi);
    for (std::size_t i = 0; i < l.dim(); ++i) {
        REQUIRE(back.row(i).size() == l.row(i).size());
        for (std::size_t e = 0; e < l.row(i).size(); ++e) {
            CHECK(back.row(i)[e].col == l.row(i)[e].col);
            CHECK(back.row(i)[e].value == l.row(i)[e].value);
        }
    }
}

TEST_CASE("points file round trip") {
    const std::vector<std::vector<double>> pts = {{0.25, 1.5}, {2.0, -3.125}};
    std::stringstream ss;
    write_points(ss, pts);
    const auto back = read_points(ss);
    REQUIRE(back.size() == 2);
    CHECK(back[0][0] == 0.25);
    CHECK(back[1][1] == -3.125);
}
