#pragma once

#include "gfilt/graph.hpp"
#include "gfilt/interval.hpp"

#include <cstddef>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

namespace gfilt {

/// Interval certified to contain all eigenvalues of a shift.
using SpectralInterval = Interval;

enum class IntervalMethod { analytic_laplacian, gershgorin, dense_eig };

/// A graph shift: sparse symmetric real matrix supported on the diagonal and
/// the edges of its graph, stored row-oriented (each vertex owns its row, the
/// layout the distributed simulator hands to agents). Immutable once built.
class Shift {
public:
    struct Entry {
        std::size_t col;
        double value;
    };

    /// Builds from symmetric triplets; entries are merged and rows sorted by
    /// column index. Symmetry is required exactly: for every (i,j,v) given,
    /// the transposed value must match bit-for-bit.
    static Shift from_triplets(std::size_t n,
                               const std::vector<std::tuple<std::size_t, std::size_t, double>>& entries,
                               SpectralInterval interval, bool laplacian_like = false);

    static Shift identity(std::size_t n);

    std::size_t dim() const { return n_; }
    std::span<const Entry> row(std::size_t i) const { return {rows_[i].data(), rows_[i].size()}; }
    double diagonal(std::size_t i) const;
    std::size_t num_nonzeros() const;

    SpectralInterval spectral_interval() const { return interval_; }
    bool laplacian_like() const { return laplacian_like_; }

    /// y = S x.  Per-row accumulation runs in sorted column order, which
    /// pins the floating-point result for determinism tests.
    void apply(std::span<const double> x, std::span<double> y) const;
    std::vector<double> apply(const std::vector<double>& x) const;

    /// Gershgorin enclosure of the spectrum computed from the stored rows.
    SpectralInterval gershgorin() const;

private:
    Shift() = default;

    std::size_t n_ = 0;
    std::vector<std::vector<Entry>> rows_;
    SpectralInterval interval_;
    bool laplacian_like_ = false;

    friend Shift sym_normalized_laplacian(const Graph&);
    friend std::pair<Shift, Shift> kron_pair(const Shift&, const Shift&);
};

/// L^sym = I - D^(-1/2) A D^(-1/2); spectral interval [0, 2].
/// Rejects graphs with isolated vertices.
Shift sym_normalized_laplacian(const Graph& g);

/// Kronecker lifts of two commuting-by-construction factors:
///   S1 = I_p (x) L_right,  S2 = L_left (x) I_q
/// where p = dim(L_left), q = dim(L_right). Both inherit the factor's
/// spectral interval and commute exactly in exact arithmetic.
std::pair<Shift, Shift> kron_pair(const Shift& l_left, const Shift& l_right);

/// True iff ||S1 S2 - S2 S1||_F <= tol (sparse product, no densification).
bool check_commute(const Shift& s1, const Shift& s2, double tol);

/// Frobenius norm of the commutator S1 S2 - S2 S1.
double commutator_fro_norm(const Shift& s1, const Shift& s2);

/// Certified spectral enclosure by the requested method.
///  - analytic_laplacian: [0,2], valid only for shifts flagged as L^sym
///  - gershgorin: union-bounding interval of the Gershgorin discs
///  - dense_eig: [lambda_min, lambda_max] from a dense symmetric eigensolve,
///    size-capped at n = 2000
SpectralInterval spectral_interval(const Shift& s, IntervalMethod method);

/// Returns a copy of s with the interval replaced by a dense-eig certificate.
Shift with_dense_interval(const Shift& s);

/// True iff every off-diagonal nonzero of s sits on an edge of g.
bool shift_respects_graph(const Shift& s, const Graph& g);

/// Coordinate-format text: one-line header "n mu nu", then "i j value" rows
/// for the upper triangle (including the diagonal).
void write_shift(std::ostream& out, const Shift& s);
Shift read_shift(std::istream& in);

} // namespace gfilt
