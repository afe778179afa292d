#pragma once

#include "gfilt/interval.hpp"

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

namespace gfilt {

/// Axis-aligned cube in R^d, the rescaling frame of a MultiPoly.
class Cube {
public:
    explicit Cube(std::vector<Interval> intervals);

    std::size_t dims() const { return intervals_.size(); }
    const Interval& interval(std::size_t k) const { return intervals_[k]; }
    const std::vector<Interval>& intervals() const { return intervals_; }
    bool contains(std::span<const double> t) const;
    bool operator==(const Cube&) const = default;

private:
    std::vector<Interval> intervals_;
};

/// Real-valued function of a point in R^d.
using ScalarField = std::function<double(std::span<const double>)>;

/// Multivariate polynomial stored in the tensor-product Chebyshev basis
///   sum_{n} c_n T_{n_1}(u_1) ... T_{n_d}(u_d),
/// where u_k = (2 t_k - nu_k - mu_k)/(nu_k - mu_k) rescales the cube to
/// [-1,1]^d. Coefficients are row-major with the last variable fastest.
class MultiPoly {
public:
    MultiPoly(Cube cube, std::vector<std::size_t> degrees, std::vector<double> coeffs);

    static MultiPoly constant(Cube cube, double value);

    std::size_t dims() const { return cube_.dims(); }
    const Cube& cube() const { return cube_; }
    const std::vector<std::size_t>& degrees() const { return degrees_; }
    std::span<const double> coeffs() const { return coeffs_; }
    double coeff(std::span<const std::size_t> index) const;

    /// Clenshaw evaluation, innermost variable first. Points outside the
    /// cube are extrapolations; when `extrapolated` is non-null it reports
    /// whether the point left the cube.
    double operator()(std::span<const double> t, bool* extrapolated = nullptr) const;
    double operator()(double t, bool* extrapolated = nullptr) const; // d == 1 convenience

    ScalarField as_field() const;

private:
    Cube cube_;
    std::vector<std::size_t> degrees_;
    std::vector<double> coeffs_;
};

/// The M+1 rescaled Chebyshev points of [mu, nu]:
///   t_j = (nu+mu)/2 + (nu-mu)/2 * cos((j+1/2) pi / (M+1)),  j = 0..M.
std::vector<double> chebyshev_nodes(std::size_t degree, const Interval& interval);

/// Chebyshev interpolant of f at the tensor nodes (exact for polynomials of
/// per-variable degree <= M).
MultiPoly interpolate(const ScalarField& f, const Cube& cube, std::size_t degree);

/// Chebyshev interpolant C_M of 1/h on the cube: the unique polynomial of
/// per-variable degree M matching 1/h at every tensor node. Throws
/// reciprocal-singularity if |h| < 1e-14 at a node.
MultiPoly interpolate_reciprocal(const ScalarField& h, const Cube& cube, std::size_t degree);
MultiPoly interpolate_reciprocal(const MultiPoly& h, std::size_t degree);

/// Degree-M truncation of the tensor Chebyshev expansion of 1/h, with
/// coefficients from Gauss-Chebyshev quadrature on quad_points per
/// dimension. quad_points = 0 selects max(64, 4(M+1)); explicit values
/// below 4(M+1) are rejected.
MultiPoly chebyshev_series_reciprocal(const ScalarField& h, const Cube& cube, std::size_t degree,
                                      std::size_t quad_points = 0);
MultiPoly chebyshev_series_reciprocal(const MultiPoly& h, std::size_t degree,
                                      std::size_t quad_points = 0);

double evaluate(const MultiPoly& p, std::span<const double> t, bool* extrapolated = nullptr);

/// Certification grid density used by sup_error and the solvers when the
/// caller does not pick one: 10001 points for d = 1, 401 for d = 2, 51 above.
std::size_t default_grid_per_dim(std::size_t dims);

struct SupErrorResult {
    double value = 0.0;
    std::vector<double> argmax;
};

/// b~_M = max over a uniform tensor grid (endpoints included) of
/// |1 - h(t) C(t)|: a grid-refined lower bound on the true sup. Also
/// certifies nonvanishing of h on the grid (|h| > 1e-12).
double sup_error(const ScalarField& h, const MultiPoly& c, const Cube& cube,
                 std::size_t grid_per_dim);
SupErrorResult sup_error_detail(const ScalarField& h, const MultiPoly& c, const Cube& cube,
                                std::size_t grid_per_dim);

/// Grid extrema of a scalar field over a cube (same uniform grid as
/// sup_error). Used for the Richardson step size.
Interval grid_range(const ScalarField& h, const Cube& cube, std::size_t grid_per_dim);

/// Text format: header "d M mu_1 nu_1 ... mu_d nu_d", then the coefficient
/// tensor row-major, 17 significant digits. Requires uniform degree.
void write_multipoly(std::ostream& out, const MultiPoly& p);
MultiPoly read_multipoly(std::istream& in);

} // namespace gfilt
