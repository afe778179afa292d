#include "gfilt/shift.hpp"
#include "gfilt/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace gfilt {

Shift Shift::from_triplets(std::size_t n,
                           const std::vector<std::tuple<std::size_t, std::size_t, double>>& entries,
                           SpectralInterval interval, bool laplacian_like) {
    if (n == 0) throw Error(errc::invalid_argument, "shift dimension must be positive");
    if (interval.lo > interval.hi)
        throw Error(errc::invalid_argument, "spectral interval must satisfy mu <= nu");
    std::map<std::pair<std::size_t, std::size_t>, double> merged;
    for (auto [i, j, v] : entries) {
        if (i >= n || j >= n) throw Error(errc::invalid_argument, "triplet index out of range");
        if (v == 0.0) continue;
        merged[{i, j}] += v;
    }
    for (const auto& [key, v] : merged) {
        auto it = merged.find({key.second, key.first});
        if (it == merged.end() || it->second != v)
            throw Error(errc::invalid_argument, "shift entries are not exactly symmetric");
    }
    Shift s;
    s.n_ = n;
    s.interval_ = interval;
    s.laplacian_like_ = laplacian_like;
    s.rows_.resize(n);
    for (const auto& [key, v] : merged) s.rows_[key.first].push_back({key.second, v});
    // std::map iterates in key order, so rows are already sorted by column
    return s;
}

Shift Shift::identity(std::size_t n) {
    std::vector<std::tuple<std::size_t, std::size_t, double>> trip;
    trip.reserve(n);
    for (std::size_t i = 0; i < n; ++i) trip.emplace_back(i, i, 1.0);
    return from_triplets(n, trip, {1.0, 1.0});
}

double Shift::diagonal(std::size_t i) const {
    for (const auto& e : rows_[i])
        if (e.col == i) return e.value;
    return 0.0;
}

std::size_t Shift::num_nonzeros() const {
    std::size_t nnz = 0;
    for (const auto& r : rows_) nnz += r.size();
    return nnz;
}

void Shift::apply(std::span<const double> x, std::span<double> y) const {
    if (x.size() != n_ || y.size() != n_)
        throw Error(errc::dimension_mismatch, "shift/vector dimension mismatch");
    for (std::size_t i = 0; i < n_; ++i) {
        double acc = 0.0;
        for (const auto& e : rows_[i]) acc += e.value * x[e.col];
        y[i] = acc;
    }
}

std::vector<double> Shift::apply(const std::vector<double>& x) const {
    std::vector<double> y(n_);
    apply(x, y);
    return y;
}

SpectralInterval Shift::gershgorin() const {
    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (std::size_t i = 0; i < n_; ++i) {
        double center = 0.0, radius = 0.0;
        for (const auto& e : rows_[i]) {
            if (e.col == i)
                center = e.value;
            else
                radius += std::abs(e.value);
        }
        if (first) {
            lo = center - radius;
            hi = center + radius;
            first = false;
        } else {
            lo = std::min(lo, center - radius);
            hi = std::max(hi, center + radius);
        }
    }
    return {lo, hi};
}

Shift sym_normalized_laplacian(const Graph& g) {
    const std::size_t n = g.num_vertices();
    std::vector<double> inv_sqrt_deg(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t deg = g.degree(i);
        if (deg == 0)
            throw Error(errc::degree_zero_vertex, "vertex " + std::to_string(i) + " is isolated");
        inv_sqrt_deg[i] = 1.0 / std::sqrt(static_cast<double>(deg));
    }
    Shift s;
    s.n_ = n;
    s.interval_ = {0.0, 2.0};
    s.laplacian_like_ = true;
    s.rows_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto& row = s.rows_[i];
        row.reserve(g.degree(i) + 1);
        bool diag_placed = false;
        for (std::size_t j : g.neighbors(i)) {
            if (!diag_placed && j > i) {
                row.push_back({i, 1.0});
                diag_placed = true;
            }
            row.push_back({j, -inv_sqrt_deg[i] * inv_sqrt_deg[j]});
        }
        if (!diag_placed) row.push_back({i, 1.0});
    }
    return s;
}

std::pair<Shift, Shift> kron_pair(const Shift& l_left, const Shift& l_right) {
    const std::size_t p = l_left.dim();
    const std::size_t q = l_right.dim();
    const std::size_t n = p * q;

    Shift s1; // I_p (x) L_right: block diagonal, block b couples (b*q + i, b*q + j)
    s1.n_ = n;
    s1.interval_ = l_right.spectral_interval();
    s1.rows_.resize(n);
    for (std::size_t b = 0; b < p; ++b)
        for (std::size_t i = 0; i < q; ++i) {
            auto& row = s1.rows_[b * q + i];
            for (const auto& e : l_right.row(i)) row.push_back({b * q + e.col, e.value});
        }

    Shift s2; // L_left (x) I_q: couples (t*q + i, u*q + i)
    s2.n_ = n;
    s2.interval_ = l_left.spectral_interval();
    s2.rows_.resize(n);
    for (std::size_t t = 0; t < p; ++t)
        for (std::size_t i = 0; i < q; ++i) {
            auto& row = s2.rows_[t * q + i];
            for (const auto& e : l_left.row(t)) row.push_back({e.col * q + i, e.value});
        }
    return {std::move(s1), std::move(s2)};
}

namespace {

// Row i of A*B as a sorted sparse vector.
void product_row(const Shift& a, const Shift& b, std::size_t i,
                 std::map<std::size_t, double>& out) {
    out.clear();
    for (const auto& ea : a.row(i))
        for (const auto& eb : b.row(ea.col)) out[eb.col] += ea.value * eb.value;
}

} // namespace

double commutator_fro_norm(const Shift& s1, const Shift& s2) {
    if (s1.dim() != s2.dim())
        throw Error(errc::dimension_mismatch, "commutator of shifts of unequal dimension");
    double sq = 0.0;
    std::map<std::size_t, double> ab, ba;
    for (std::size_t i = 0; i < s1.dim(); ++i) {
        product_row(s1, s2, i, ab);
        product_row(s2, s1, i, ba);
        for (const auto& [col, v] : ba) ab[col] -= v;
        for (const auto& [col, v] : ab) sq += v * v;
    }
    return std::sqrt(sq);
}

bool check_commute(const Shift& s1, const Shift& s2, double tol) {
    if (tol < 0.0) throw Error(errc::invalid_argument, "commutator tolerance must be nonnegative");
    return commutator_fro_norm(s1, s2) <= tol;
}

SpectralInterval spectral_interval(const Shift& s, IntervalMethod method) {
    switch (method) {
        case IntervalMethod::analytic_laplacian:
            if (!s.laplacian_like())
                throw Error(errc::invalid_argument,
                            "analytic [0,2] interval is only valid for normalized Laplacians");
            return {0.0, 2.0};
        case IntervalMethod::gershgorin:
            return s.gershgorin();
        case IntervalMethod::dense_eig: {
            constexpr std::size_t kDenseCap = 2000;
            if (s.dim() > kDenseCap)
                throw Error(errc::size_cap, "dense eigensolve capped at n = 2000, got n = " +
                                                std::to_string(s.dim()));
            Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(s.dim()),
                                                          static_cast<Eigen::Index>(s.dim()));
            for (std::size_t i = 0; i < s.dim(); ++i)
                for (const auto& e : s.row(i))
                    dense(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(e.col)) = e.value;
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense, Eigen::EigenvaluesOnly);
            const auto& ev = es.eigenvalues();
            return {ev(0), ev(ev.size() - 1)};
        }
    }
    throw Error(errc::invalid_argument, "unknown interval method");
}

Shift with_dense_interval(const Shift& s) {
    const auto iv = spectral_interval(s, IntervalMethod::dense_eig);
    // keep the certificate an enclosure under rounding of the eigensolve
    const double pad = 1e-12 * std::max({1.0, std::abs(iv.lo), std::abs(iv.hi)});
    std::vector<std::tuple<std::size_t, std::size_t, double>> trip;
    for (std::size_t i = 0; i < s.dim(); ++i)
        for (const auto& e : s.row(i)) trip.emplace_back(i, e.col, e.value);
    return Shift::from_triplets(s.dim(), trip, {iv.lo - pad, iv.hi + pad}, s.laplacian_like());
}

bool shift_respects_graph(const Shift& s, const Graph& g) {
    if (s.dim() != g.num_vertices()) return false;
    for (std::size_t i = 0; i < s.dim(); ++i)
        for (const auto& e : s.row(i))
            if (e.col != i && !g.has_edge(i, e.col)) return false;
    return true;
}

void write_shift(std::ostream& out, const Shift& s) {
    out << s.dim() << " " << std::setprecision(17) << s.spectral_interval().lo << " "
        << s.spectral_interval().hi << "\n";
    for (std::size_t i = 0; i < s.dim(); ++i)
        for (const auto& e : s.row(i))
            if (e.col >= i) out << i << " " << e.col << " " << e.value << "\n";
}

Shift read_shift(std::istream& in) {
    std::string header;
    if (!std::getline(in, header)) throw Error(errc::io_error, "shift file: missing header");
    std::istringstream hs(header);
    std::size_t n;
    double mu, nu;
    if (!(hs >> n >> mu >> nu)) throw Error(errc::io_error, "shift file: bad header");
    std::vector<std::tuple<std::size_t, std::size_t, double>> trip;
    std::size_t i, j;
    double v;
    while (in >> i >> j >> v) {
        trip.emplace_back(i, j, v);
        if (i != j) trip.emplace_back(j, i, v);
    }
    return Shift::from_triplets(n, trip, {mu, nu});
}

} // namespace gfilt
