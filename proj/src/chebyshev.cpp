#include "gfilt/chebyshev.hpp"
#include "gfilt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>

namespace gfilt {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kNodeSingularityTol = 1e-14;
constexpr double kGridSingularityTol = 1e-12;

double clenshaw(const double* c, std::size_t count, double u) {
    double b1 = 0.0, b2 = 0.0;
    for (std::size_t k = count; k-- > 1;) {
        const double b = c[k] + 2.0 * u * b1 - b2;
        b2 = b1;
        b1 = b;
    }
    return c[0] + u * b1 - b2;
}

std::size_t tensor_size(const std::vector<std::size_t>& degrees) {
    std::size_t total = 1;
    for (std::size_t m : degrees) total *= m + 1;
    return total;
}

// Coefficients from first-kind samples along the last (contiguous) axis:
//   c_k = (2 - delta_{k0})/K * sum_j f_j cos(k (j+1/2) pi / K),  k < out_len.
// Returns the tensor with the last axis shrunk to out_len.
std::vector<double> analyze_last_axis(const std::vector<double>& data, std::size_t axis_len,
                                      std::size_t out_len) {
    const std::size_t blocks = data.size() / axis_len;
    std::vector<double> cos_table(out_len * axis_len);
    for (std::size_t k = 0; k < out_len; ++k)
        for (std::size_t j = 0; j < axis_len; ++j)
            cos_table[k * axis_len + j] =
                std::cos(static_cast<double>(k) * (static_cast<double>(j) + 0.5) * kPi /
                         static_cast<double>(axis_len));
    std::vector<double> out(blocks * out_len);
    for (std::size_t b = 0; b < blocks; ++b) {
        const double* f = data.data() + b * axis_len;
        for (std::size_t k = 0; k < out_len; ++k) {
            double acc = 0.0;
            const double* row = cos_table.data() + k * axis_len;
            for (std::size_t j = 0; j < axis_len; ++j) acc += f[j] * row[j];
            out[b * out_len + k] = (k == 0 ? 1.0 : 2.0) * acc / static_cast<double>(axis_len);
        }
    }
    return out;
}

// Transposes the last axis to the front: (..., K) -> (K, ...).
std::vector<double> rotate_last_axis_front(const std::vector<double>& data, std::size_t axis_len) {
    const std::size_t blocks = data.size() / axis_len;
    std::vector<double> out(data.size());
    for (std::size_t b = 0; b < blocks; ++b)
        for (std::size_t k = 0; k < axis_len; ++k) out[k * blocks + b] = data[b * axis_len + k];
    return out;
}

// Samples f on the tensor grid with per_dim[k] first-kind points in
// dimension k; row-major, last dimension fastest.
std::vector<double> sample_grid(const ScalarField& f, const Cube& cube,
                                const std::vector<std::size_t>& per_dim, bool reciprocal) {
    const std::size_t d = cube.dims();
    std::vector<std::vector<double>> nodes(d);
    for (std::size_t k = 0; k < d; ++k) nodes[k] = chebyshev_nodes(per_dim[k] - 1, cube.interval(k));

    std::size_t total = 1;
    for (std::size_t s : per_dim) total *= s;
    std::vector<double> values(total);
    std::vector<std::size_t> idx(d, 0);
    std::vector<double> point(d);
    for (std::size_t lin = 0; lin < total; ++lin) {
        for (std::size_t k = 0; k < d; ++k) point[k] = nodes[k][idx[k]];
        const double fv = f(point);
        if (!std::isfinite(fv))
            throw Error(errc::invalid_argument, "sampled function is not finite at a node");
        if (reciprocal) {
            if (std::abs(fv) < kNodeSingularityTol)
                throw Error(errc::reciprocal_singularity, "h vanishes at a Chebyshev node");
            values[lin] = 1.0 / fv;
        } else {
            values[lin] = fv;
        }
        for (std::size_t k = d; k-- > 0;) {
            if (++idx[k] < per_dim[k]) break;
            idx[k] = 0;
        }
    }
    return values;
}

// Tensor cosine analysis: each axis in turn is moved to the contiguous
// position, analyzed, and rotated to the front, so after d rounds the
// original axis order is restored with per-axis sizes out_len[k].
std::vector<double> tensor_analyze(std::vector<double> values, const std::vector<std::size_t>& in_len,
                                   const std::vector<std::size_t>& out_len) {
    const std::size_t d = in_len.size();
    for (std::size_t round = 0; round < d; ++round) {
        const std::size_t axis = d - 1 - round; // original axis currently last
        values = analyze_last_axis(values, in_len[axis], out_len[axis]);
        values = rotate_last_axis_front(values, out_len[axis]);
    }
    return values;
}

} // namespace

Cube::Cube(std::vector<Interval> intervals) : intervals_(std::move(intervals)) {
    if (intervals_.empty()) throw Error(errc::invalid_argument, "cube needs at least one dimension");
    for (const auto& iv : intervals_)
        if (!(iv.lo < iv.hi))
            throw Error(errc::invalid_argument, "degenerate cube interval [" +
                                                    std::to_string(iv.lo) + ", " +
                                                    std::to_string(iv.hi) + "]");
}

bool Cube::contains(std::span<const double> t) const {
    if (t.size() != intervals_.size()) return false;
    for (std::size_t k = 0; k < t.size(); ++k)
        if (!intervals_[k].contains(t[k])) return false;
    return true;
}

MultiPoly::MultiPoly(Cube cube, std::vector<std::size_t> degrees, std::vector<double> coeffs)
    : cube_(std::move(cube)), degrees_(std::move(degrees)), coeffs_(std::move(coeffs)) {
    if (degrees_.size() != cube_.dims())
        throw Error(errc::dimension_mismatch, "degree list does not match cube dimension");
    if (coeffs_.size() != tensor_size(degrees_))
        throw Error(errc::invalid_argument, "coefficient tensor has wrong shape");
    for (double c : coeffs_)
        if (!std::isfinite(c)) throw Error(errc::invalid_argument, "non-finite coefficient");
}

MultiPoly MultiPoly::constant(Cube cube, double value) {
    const std::size_t d = cube.dims();
    return MultiPoly(std::move(cube), std::vector<std::size_t>(d, 0), {value});
}

double MultiPoly::coeff(std::span<const std::size_t> index) const {
    if (index.size() != degrees_.size())
        throw Error(errc::dimension_mismatch, "coefficient index has wrong arity");
    std::size_t lin = 0;
    for (std::size_t k = 0; k < index.size(); ++k) {
        if (index[k] > degrees_[k]) throw Error(errc::invalid_argument, "coefficient index out of range");
        lin = lin * (degrees_[k] + 1) + index[k];
    }
    return coeffs_[lin];
}

double MultiPoly::operator()(std::span<const double> t, bool* extrapolated) const {
    if (t.size() != dims()) throw Error(errc::dimension_mismatch, "evaluation point has wrong arity");
    if (extrapolated) *extrapolated = !cube_.contains(t);
    std::vector<double> u(dims());
    for (std::size_t k = 0; k < dims(); ++k) {
        const Interval& iv = cube_.interval(k);
        u[k] = (2.0 * t[k] - iv.hi - iv.lo) / iv.width();
    }
    // collapse the (contiguous) last axis repeatedly
    std::vector<double> work(coeffs_.begin(), coeffs_.end());
    for (std::size_t k = dims(); k-- > 0;) {
        const std::size_t len = degrees_[k] + 1;
        const std::size_t blocks = work.size() / len;
        for (std::size_t b = 0; b < blocks; ++b) work[b] = clenshaw(work.data() + b * len, len, u[k]);
        work.resize(blocks);
    }
    return work[0];
}

double MultiPoly::operator()(double t, bool* extrapolated) const {
    return (*this)(std::span<const double>(&t, 1), extrapolated);
}

ScalarField MultiPoly::as_field() const {
    return [p = *this](std::span<const double> t) { return p(t); };
}

std::vector<double> chebyshev_nodes(std::size_t degree, const Interval& interval) {
    if (!(interval.lo < interval.hi))
        throw Error(errc::invalid_argument, "degenerate node interval");
    const double mid = interval.midpoint();
    const double half = 0.5 * interval.width();
    std::vector<double> nodes(degree + 1);
    for (std::size_t j = 0; j <= degree; ++j)
        nodes[j] = mid + half * std::cos((static_cast<double>(j) + 0.5) * kPi /
                                         static_cast<double>(degree + 1));
    return nodes;
}

MultiPoly interpolate(const ScalarField& f, const Cube& cube, std::size_t degree) {
    const std::size_t d = cube.dims();
    const std::vector<std::size_t> grid(d, degree + 1);
    auto values = sample_grid(f, cube, grid, /*reciprocal=*/false);
    auto coeffs = tensor_analyze(std::move(values), grid, std::vector<std::size_t>(d, degree + 1));
    return MultiPoly(cube, std::vector<std::size_t>(d, degree), std::move(coeffs));
}

MultiPoly interpolate_reciprocal(const ScalarField& h, const Cube& cube, std::size_t degree) {
    const std::size_t d = cube.dims();
    const std::vector<std::size_t> grid(d, degree + 1);
    auto values = sample_grid(h, cube, grid, /*reciprocal=*/true);
    auto coeffs = tensor_analyze(std::move(values), grid, std::vector<std::size_t>(d, degree + 1));
    return MultiPoly(cube, std::vector<std::size_t>(d, degree), std::move(coeffs));
}

MultiPoly interpolate_reciprocal(const MultiPoly& h, std::size_t degree) {
    return interpolate_reciprocal(h.as_field(), h.cube(), degree);
}

MultiPoly chebyshev_series_reciprocal(const ScalarField& h, const Cube& cube, std::size_t degree,
                                      std::size_t quad_points) {
    const std::size_t d = cube.dims();
    const std::size_t min_points = 4 * (degree + 1);
    if (quad_points == 0) quad_points = std::max<std::size_t>(64, min_points);
    if (quad_points < min_points)
        throw Error(errc::invalid_argument,
                    "quadrature needs at least 4(M+1) points per dimension");
    const std::vector<std::size_t> grid(d, quad_points);
    auto values = sample_grid(h, cube, grid, /*reciprocal=*/true);
    auto coeffs = tensor_analyze(std::move(values), grid, std::vector<std::size_t>(d, degree + 1));
    return MultiPoly(cube, std::vector<std::size_t>(d, degree), std::move(coeffs));
}

MultiPoly chebyshev_series_reciprocal(const MultiPoly& h, std::size_t degree,
                                      std::size_t quad_points) {
    return chebyshev_series_reciprocal(h.as_field(), h.cube(), degree, quad_points);
}

double evaluate(const MultiPoly& p, std::span<const double> t, bool* extrapolated) {
    return p(t, extrapolated);
}

std::size_t default_grid_per_dim(std::size_t dims) {
    if (dims <= 1) return 10001;
    if (dims == 2) return 401;
    return 51;
}

SupErrorResult sup_error_detail(const ScalarField& h, const MultiPoly& c, const Cube& cube,
                                std::size_t grid_per_dim) {
    if (grid_per_dim < 2) throw Error(errc::invalid_argument, "sup grid needs at least 2 points");
    const std::size_t d = cube.dims();
    if (c.dims() != d) throw Error(errc::dimension_mismatch, "approximant/cube dimension mismatch");

    std::size_t total = 1;
    for (std::size_t k = 0; k < d; ++k) total *= grid_per_dim;

    SupErrorResult best;
    best.value = -1.0;
    std::vector<std::size_t> idx(d, 0);
    std::vector<double> point(d);
    for (std::size_t lin = 0; lin < total; ++lin) {
        for (std::size_t k = 0; k < d; ++k) {
            const Interval& iv = cube.interval(k);
            point[k] = iv.lo + iv.width() * static_cast<double>(idx[k]) /
                                   static_cast<double>(grid_per_dim - 1);
        }
        const double hv = h(point);
        if (std::abs(hv) <= kGridSingularityTol)
            throw Error(errc::reciprocal_singularity, "h vanishes on the certification grid");
        const double err = std::abs(1.0 - hv * c(point));
        if (err > best.value) {
            best.value = err;
            best.argmax = point;
        }
        for (std::size_t k = d; k-- > 0;) {
            if (++idx[k] < grid_per_dim) break;
            idx[k] = 0;
        }
    }
    return best;
}

double sup_error(const ScalarField& h, const MultiPoly& c, const Cube& cube,
                 std::size_t grid_per_dim) {
    return sup_error_detail(h, c, cube, grid_per_dim).value;
}

Interval grid_range(const ScalarField& h, const Cube& cube, std::size_t grid_per_dim) {
    if (grid_per_dim < 2) throw Error(errc::invalid_argument, "range grid needs at least 2 points");
    const std::size_t d = cube.dims();
    std::size_t total = 1;
    for (std::size_t k = 0; k < d; ++k) total *= grid_per_dim;

    double lo = 0.0, hi = 0.0;
    std::vector<std::size_t> idx(d, 0);
    std::vector<double> point(d);
    for (std::size_t lin = 0; lin < total; ++lin) {
        for (std::size_t k = 0; k < d; ++k) {
            const Interval& iv = cube.interval(k);
            point[k] = iv.lo + iv.width() * static_cast<double>(idx[k]) /
                                   static_cast<double>(grid_per_dim - 1);
        }
        const double hv = h(point);
        if (lin == 0) {
            lo = hi = hv;
        } else {
            lo = std::min(lo, hv);
            hi = std::max(hi, hv);
        }
        for (std::size_t k = d; k-- > 0;) {
            if (++idx[k] < grid_per_dim) break;
            idx[k] = 0;
        }
    }
    return {lo, hi};
}

void write_multipoly(std::ostream& out, const MultiPoly& p) {
    const std::size_t m = p.degrees()[0];
    for (std::size_t mk : p.degrees())
        if (mk != m) throw Error(errc::io_error, "serialization requires a uniform degree");
    out << p.dims() << " " << m;
    out << std::setprecision(17);
    for (const auto& iv : p.cube().intervals()) out << " " << iv.lo << " " << iv.hi;
    out << "\n";
    for (double c : p.coeffs()) out << c << "\n";
}

MultiPoly read_multipoly(std::istream& in) {
    std::size_t d = 0, m = 0;
    if (!(in >> d >> m) || d == 0) throw Error(errc::io_error, "multipoly file: bad header");
    std::vector<Interval> intervals(d);
    for (auto& iv : intervals)
        if (!(in >> iv.lo >> iv.hi)) throw Error(errc::io_error, "multipoly file: bad cube");
    std::size_t total = 1;
    for (std::size_t k = 0; k < d; ++k) total *= m + 1;
    std::vector<double> coeffs(total);
    for (auto& c : coeffs)
        if (!(in >> c)) throw Error(errc::io_error, "multipoly file: truncated coefficients");
    return MultiPoly(Cube(std::move(intervals)), std::vector<std::size_t>(d, m), std::move(coeffs));
}

} // namespace gfilt
