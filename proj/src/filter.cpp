#include "gfilt/filter.hpp"
#include "gfilt/detail/filter_program.hpp"
#include "gfilt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

namespace gfilt {

namespace {

constexpr double kCommuteTol = 1e-10;
constexpr double kDivergenceGrowth = 1e6;

bool shifts_equal(const Shift& a, const Shift& b) {
    if (a.dim() != b.dim()) return false;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        const auto ra = a.row(i);
        const auto rb = b.row(i);
        if (ra.size() != rb.size()) return false;
        for (std::size_t e = 0; e < ra.size(); ++e)
            if (ra[e].col != rb[e].col || ra[e].value != rb[e].value) return false;
    }
    return true;
}

} // namespace

FilterSpec::FilterSpec(std::vector<Shift> shifts, MultiPoly poly)
    : shifts_(std::move(shifts)), poly_(std::move(poly)) {
    if (shifts_.empty()) throw Error(errc::invalid_argument, "filter needs at least one shift");
    if (shifts_.size() != poly_.dims())
        throw Error(errc::dimension_mismatch, "polynomial arity does not match the shift count");
    const std::size_t n = shifts_[0].dim();
    for (const auto& s : shifts_)
        if (s.dim() != n) throw Error(errc::dimension_mismatch, "shifts of unequal dimension");
    for (std::size_t k = 0; k < shifts_.size(); ++k) {
        const auto iv = shifts_[k].spectral_interval();
        const auto frame = poly_.cube().interval(k);
        // slack absorbs the rounding pad of numerically certified intervals
        const double slack = 1e-9 * std::max({1.0, std::abs(frame.lo), std::abs(frame.hi)});
        if (iv.lo < frame.lo - slack || iv.hi > frame.hi + slack)
            throw Error(errc::invalid_argument,
                        "polynomial cube does not contain the spectral interval of shift " +
                            std::to_string(k));
    }
    for (std::size_t a = 0; a < shifts_.size(); ++a)
        for (std::size_t b = a + 1; b < shifts_.size(); ++b)
            if (!check_commute(shifts_[a], shifts_[b], kCommuteTol))
                throw Error(errc::invalid_argument, "shifts " + std::to_string(a) + " and " +
                                                        std::to_string(b) + " do not commute");
}

Cube FilterSpec::joint_spectral_cube() const {
    std::vector<Interval> intervals;
    intervals.reserve(shifts_.size());
    for (const auto& s : shifts_) {
        Interval iv = s.spectral_interval();
        if (!(iv.lo < iv.hi)) {
            const double pad = 1e-12 * std::max(1.0, std::abs(iv.lo));
            iv = {iv.lo - pad, iv.hi + pad};
        }
        intervals.push_back(iv);
    }
    return Cube(std::move(intervals));
}

bool FilterSpec::shares_shifts_with(const FilterSpec& other) const {
    if (shifts_.size() != other.shifts_.size()) return false;
    for (std::size_t k = 0; k < shifts_.size(); ++k)
        if (!shifts_equal(shifts_[k], other.shifts_[k])) return false;
    return true;
}

std::vector<double> apply_filter(const FilterSpec& f, std::span<const double> x) {
    const std::size_t n = f.dim();
    if (x.size() != n) throw Error(errc::dimension_mismatch, "signal length does not match filter");
    const auto prog = detail::compile_filter_program(f.poly());
    std::vector<std::vector<double>> regs(prog.num_registers, std::vector<double>(n, 0.0));
    std::copy(x.begin(), x.end(), regs[prog.input_register].begin());
    for (const auto& ins : prog.instructions) {
        if (ins.op == detail::Instruction::Op::matvec) {
            f.shifts()[ins.shift_index].apply(regs[ins.src], regs[ins.dst]);
        } else {
            auto& dst = regs[ins.dst];
            for (std::size_t i = 0; i < n; ++i) {
                double acc = 0.0;
                for (const auto& t : ins.terms) acc += t.coeff * regs[t.src][i];
                dst[i] = acc;
            }
        }
    }
    return regs[prog.output_register];
}

double norm2(std::span<const double> v) {
    double sq = 0.0;
    for (double x : v) sq += x * x;
    return std::sqrt(sq);
}

double relative_error(std::span<const double> x_m, std::span<const double> x) {
    if (x_m.size() != x.size()) throw Error(errc::dimension_mismatch, "relative error arity");
    const double denom = norm2(x);
    if (denom == 0.0) throw Error(errc::undefined_value, "relative error against zero ground truth");
    double sq = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x_m[i] - x[i];
        sq += d * d;
    }
    return std::sqrt(sq) / denom;
}

namespace {

std::vector<double> subtract(const std::vector<double>& a, std::span<const double> b) {
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

} // namespace

IterTrace quasi_newton_solve(const ApplyFn& apply_h, const ApplyFn& apply_g,
                             std::span<const double> y, std::size_t m_max,
                             std::span<const double> x0, std::span<const double> ground_truth,
                             bool divergence_is_error, double residual_tol) {
    if (m_max < 1) throw Error(errc::invalid_argument, "need at least one iteration");
    std::vector<double> x = x0.empty() ? std::vector<double>(y.size(), 0.0)
                                       : std::vector<double>(x0.begin(), x0.end());
    if (x.size() != y.size()) throw Error(errc::dimension_mismatch, "x0/y length mismatch");

    IterTrace trace;
    const auto push_iterate = [&](const std::vector<double>& it) {
        trace.iterates.push_back(it);
        if (!ground_truth.empty()) trace.rel_errors.push_back(relative_error(it, ground_truth));
    };
    push_iterate(x); // x^(0)

    double min_res = std::numeric_limits<double>::infinity();
    double first_res = 0.0;
    for (std::size_t m = 1; m <= m_max; ++m) {
        auto e = subtract(apply_h(x), y); // e^(m) = H x^(m-1) - y
        const double res = norm2(e);
        trace.residual_norms.push_back(res); // residual of x^(m-1)
        if (m == 1) first_res = res;
        // the guard fires on exponential blowup, not on jitter near an
        // exactly-converged residual, hence the comparison against first_res
        if (!std::isfinite(res) || (res > kDivergenceGrowth * min_res && res > first_res)) {
            if (divergence_is_error)
                throw Error(errc::divergence,
                            "residual grew by more than 1e6 from its minimum (b~_M >= 1?)");
            trace.diverged = true;
            return trace;
        }
        if (residual_tol > 0.0 && res <= residual_tol) return trace;
        min_res = std::min(min_res, res);
        const auto ge = apply_g(e);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] -= ge[i]; // x^(m)
        push_iterate(x);
    }
    trace.residual_norms.push_back(norm2(subtract(apply_h(x), y)));
    return trace;
}

IterTrace cipa_solve(const FilterSpec& h, const FilterSpec& c, std::span<const double> y,
                     std::size_t m_max, std::span<const double> x0,
                     std::span<const double> ground_truth, double residual_tol) {
    if (!h.shares_shifts_with(c))
        throw Error(errc::invalid_argument, "filter and approximant must share the shift list");
    return quasi_newton_solve([&](const std::vector<double>& v) { return apply_filter(h, v); },
                              [&](const std::vector<double>& v) { return apply_filter(c, v); }, y,
                              m_max, x0, ground_truth, /*divergence_is_error=*/true, residual_tol);
}

IterTrace cpa_solve(const FilterSpec& h, const FilterSpec& c, std::span<const double> y,
                    std::size_t m_max, std::span<const double> x0,
                    std::span<const double> ground_truth, double residual_tol) {
    return cipa_solve(h, c, y, m_max, x0, ground_truth, residual_tol);
}

IterTrace ogda_solve(const FilterSpec& h, std::span<const double> y, std::size_t m_max,
                     std::span<const double> x0, std::span<const double> ground_truth,
                     std::size_t grid_per_dim, double residual_tol) {
    const Cube cube = h.joint_spectral_cube();
    if (grid_per_dim == 0) grid_per_dim = default_grid_per_dim(cube.dims());
    const Interval range = grid_range(h.poly().as_field(), cube, grid_per_dim);
    if (range.lo <= 0.0)
        throw Error(errc::indefinite_filter,
                    "h is not positive on the spectral cube (min " + std::to_string(range.lo) + ")");
    const double gamma = 2.0 / (range.hi + range.lo);
    return quasi_newton_solve(
        [&](const std::vector<double>& v) { return apply_filter(h, v); },
        [&](const std::vector<double>& v) {
            std::vector<double> out(v.size());
            for (std::size_t i = 0; i < v.size(); ++i) out[i] = gamma * v[i];
            return out;
        },
        y, m_max, x0, ground_truth, /*divergence_is_error=*/true, residual_tol);
}

IterTrace arma_solve(const FilterSpec& t, std::span<const double> y, std::size_t m_max,
                     std::span<const double> x0, std::span<const double> ground_truth,
                     double residual_tol) {
    // x^(m) = y - T x^(m-1) is the quasi-Newton scheme for H = I + T with
    // G = I:  x - (H x - y) = y - T x.
    return quasi_newton_solve(
        [&](const std::vector<double>& v) {
            auto out = apply_filter(t, v);
            for (std::size_t i = 0; i < v.size(); ++i) out[i] += v[i];
            return out;
        },
        [](const std::vector<double>& v) { return v; }, y, m_max, x0, ground_truth,
        /*divergence_is_error=*/false, residual_tol);
}

double contraction_bound(const FilterSpec& h, const FilterSpec& c, std::size_t grid_per_dim) {
    if (!h.shares_shifts_with(c))
        throw Error(errc::invalid_argument, "contraction bound needs a shared shift list");
    const Cube cube = h.poly().cube();
    if (grid_per_dim == 0) grid_per_dim = default_grid_per_dim(cube.dims());
    return sup_error(h.poly().as_field(), c.poly(), cube, grid_per_dim);
}

FilterSpec shift_poly_by_constant(const FilterSpec& f, double delta) {
    std::vector<double> coeffs(f.poly().coeffs().begin(), f.poly().coeffs().end());
    coeffs[0] += delta; // T_0...T_0 term is the constant basis function
    return FilterSpec(f.shifts(), MultiPoly(f.poly().cube(), f.poly().degrees(), std::move(coeffs)));
}

void write_trace_csv(std::ostream& out, const IterTrace& trace, const std::string& algorithm,
                     std::size_t degree, std::uint64_t seed) {
    out << "# algorithm=" << algorithm << ",M=" << degree << ",seed=" << seed
        << ",diverged=" << (trace.diverged ? 1 : 0) << "\n";
    out << "m,residual_norm,rel_error\n";
    out << std::setprecision(17);
    for (std::size_t i = 0; i < trace.iterates.size(); ++i) {
        out << i << "," << trace.residual_norms[i] << ",";
        if (i < trace.rel_errors.size()) out << trace.rel_errors[i];
        out << "\n";
    }
}

} // namespace gfilt
