#pragma once

#include "gfilt/chebyshev.hpp"
#include "gfilt/shift.hpp"

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gfilt {

/// A polynomial filter H = h(S_1, ..., S_d): d pairwise-commuting shifts of
/// equal dimension plus a MultiPoly whose cube contains every shift's
/// certified spectral interval. Commutativity is verified at construction
/// (Frobenius tolerance 1e-10).
class FilterSpec {
public:
    FilterSpec(std::vector<Shift> shifts, MultiPoly poly);

    std::size_t dim() const { return shifts_[0].dim(); }
    std::size_t num_shifts() const { return shifts_.size(); }
    const std::vector<Shift>& shifts() const { return shifts_; }
    const MultiPoly& poly() const { return poly_; }

    /// Product of the shifts' certified spectral intervals (the joint
    /// spectral cube), degenerate axes widened by 1e-12.
    Cube joint_spectral_cube() const;

    /// Same shift lists entry-for-entry (the compatibility check between a
    /// filter and its approximant).
    bool shares_shifts_with(const FilterSpec& other) const;

private:
    std::vector<Shift> shifts_;
    MultiPoly poly_;
};

/// y = h(S_1,...,S_d) x via the compiled register schedule (one
/// shift-vector product per recurrence step).
std::vector<double> apply_filter(const FilterSpec& f, std::span<const double> x);

/// Per-iteration record of a solver run.
struct IterTrace {
    /// x^(0), x^(1), ..., x^(m_end); index = iteration number.
    std::vector<std::vector<double>> iterates;
    /// residual_norms[i] = ||H x^(i) - y||_2.
    std::vector<double> residual_norms;
    /// rel_errors[i] = ||x^(i) - x||_2 / ||x||_2 (empty if no ground truth).
    std::vector<double> rel_errors;
    bool diverged = false;
    std::optional<std::size_t> rounds;   // distributed accounting
    std::optional<std::size_t> messages;

    const std::vector<double>& final_iterate() const { return iterates.back(); }
};

using ApplyFn = std::function<std::vector<double>(const std::vector<double>&)>;

/// The quasi-Newton iteration
///   e^(m) = H x^(m-1) - y,   x^(m) = x^(m-1) - G e^(m)
/// for an arbitrary approximate inverse G. Residuals that grow by more than
/// 1e6 from their running minimum abort with a divergence error unless
/// `divergence_is_error` is false, in which case the trace is truncated and
/// flagged. `residual_tol > 0` enables an early exit once the residual
/// drops to that level (solvers otherwise run the fixed m_max). CIPA and
/// CPA are this scheme with G a polynomial filter.
IterTrace quasi_newton_solve(const ApplyFn& apply_h, const ApplyFn& apply_g,
                             std::span<const double> y, std::size_t m_max,
                             std::span<const double> x0 = {},
                             std::span<const double> ground_truth = {},
                             bool divergence_is_error = true, double residual_tol = 0.0);

/// CIPA / CPA: the iteration above with C a Chebyshev approximant of 1/h
/// over the same shifts. Zero initial iterate when x0 is empty.
IterTrace cipa_solve(const FilterSpec& h, const FilterSpec& c, std::span<const double> y,
                     std::size_t m_max, std::span<const double> x0 = {},
                     std::span<const double> ground_truth = {}, double residual_tol = 0.0);

/// Identical contract; the caller builds c via chebyshev_series_reciprocal.
IterTrace cpa_solve(const FilterSpec& h, const FilterSpec& c, std::span<const double> y,
                    std::size_t m_max, std::span<const double> x0 = {},
                    std::span<const double> ground_truth = {}, double residual_tol = 0.0);

/// Richardson iteration x^(m) = x^(m-1) - gamma (H x^(m-1) - y) with the
/// fixed step gamma = 2/(h_max + h_min), extrema taken on the certification
/// grid over the joint spectral cube of the shifts. Rejects filters with
/// h <= 0 on the grid.
IterTrace ogda_solve(const FilterSpec& h, std::span<const double> y, std::size_t m_max,
                     std::span<const double> x0 = {}, std::span<const double> ground_truth = {},
                     std::size_t grid_per_dim = 0, double residual_tol = 0.0);

/// First-order ARMA recursion x^(m) = y - T x^(m-1) for the implicit filter
/// H = I + T; converges iff rho(T) < 1. Divergence is a reportable outcome:
/// the trace is truncated and flagged, never thrown.
IterTrace arma_solve(const FilterSpec& t, std::span<const double> y, std::size_t m_max,
                     std::span<const double> x0 = {}, std::span<const double> ground_truth = {},
                     double residual_tol = 0.0);

/// b~_M over the shifts' joint spectral cube: certified upper bound on the
/// spectral radius of I - C H. grid_per_dim = 0 selects the default density.
double contraction_bound(const FilterSpec& h, const FilterSpec& c, std::size_t grid_per_dim = 0);

/// E(m) = ||x_m - x||_2 / ||x||_2.
double relative_error(std::span<const double> x_m, std::span<const double> x);

double norm2(std::span<const double> v);

/// Returns a copy of f with `delta` added to its polynomial (constant
/// Chebyshev coefficient); used to split H = I + T for the ARMA recursion.
FilterSpec shift_poly_by_constant(const FilterSpec& f, double delta);

/// CSV export: meta line "# algorithm=...,M=...,seed=...", header
/// "m,residual_norm,rel_error", one row per recorded iterate.
void write_trace_csv(std::ostream& out, const IterTrace& trace, const std::string& algorithm,
                     std::size_t degree, std::uint64_t seed);

} // namespace gfilt
