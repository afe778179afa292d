#include "gfilt/detail/filter_program.hpp"


namespace gfilt::detail {

namespace {

struct Builder {
    FilterProgram prog;

    std::uint32_t emit_matvec(std::uint32_t dst, std::uint32_t shift, std::uint32_t src) {
        Instruction ins;
        ins.op = Instruction::Op::matvec;
        ins.dst = dst;
        ins.shift_index = shift;
        ins.src = src;
        prog.instructions.push_back(std::move(ins));
        return dst;
    }

    void emit_lin(std::uint32_t dst, std::vector<LinTerm> terms) {
        Instruction ins;
        ins.op = Instruction::Op::lin;
        ins.dst = dst;
        ins.terms = std::move(terms);
        prog.instructions.push_back(std::move(ins));
    }
};

} // namespace

FilterProgram compile_filter_program(const MultiPoly& poly) {
    const std::size_t d = poly.dims();
    const auto& degrees = poly.degrees();
    const auto coeffs = poly.coeffs();

    // rescale map per variable: u_k = alpha_k t + beta_k
    std::vector<double> alpha(d), beta(d);
    for (std::size_t k = 0; k < d; ++k) {
        const Interval& iv = poly.cube().interval(k);
        alpha[k] = 2.0 / iv.width();
        beta[k] = -(iv.hi + iv.lo) / iv.width();
    }

    // accumulator block: one register per multi-index over variables 0..d-2
    std::size_t acc_count = 1;
    for (std::size_t k = 0; k + 1 < d; ++k) acc_count *= degrees[k] + 1;

    Builder b;
    const std::uint32_t reg_input = 0;
    const std::uint32_t acc_base = 1;
    const std::uint32_t p0 = static_cast<std::uint32_t>(acc_base + acc_count); // p0..p0+2 rotate
    const std::uint32_t tmp = p0 + 3;
    b.prog.num_registers = tmp + 1;
    b.prog.input_register = reg_input;

    // --- innermost variable: shared forward recurrence over T_j(S~_{d-1}) x
    const std::size_t inner = d - 1;
    const std::size_t m_inner = degrees[inner];
    const std::uint32_t kInner = static_cast<std::uint32_t>(inner);
    for (std::size_t outer = 0; outer < acc_count; ++outer)
        b.emit_lin(static_cast<std::uint32_t>(acc_base + outer),
                   {{coeffs[outer * (m_inner + 1)], reg_input}});
    if (m_inner >= 1) {
        std::uint32_t prev = reg_input; // P_0 = x
        std::uint32_t cur = p0;         // P_1 = alpha S x + beta x
        b.emit_matvec(tmp, kInner, reg_input);
        b.emit_lin(cur, {{alpha[inner], tmp}, {beta[inner], reg_input}});
        for (std::size_t j = 1; j <= m_inner; ++j) {
            for (std::size_t outer = 0; outer < acc_count; ++outer) {
                const double c = coeffs[outer * (m_inner + 1) + j];
                if (c == 0.0) continue;
                const std::uint32_t acc = static_cast<std::uint32_t>(acc_base + outer);
                b.emit_lin(acc, {{1.0, acc}, {c, cur}});
            }
            if (j == m_inner) break;
            // P_{j+1} = 2(alpha S + beta I) P_j - P_{j-1}
            std::uint32_t next = p0;
            while (next == prev || next == cur) ++next; // pick the free slot among p0..p2
            b.emit_matvec(tmp, kInner, cur);
            b.emit_lin(next, {{2.0 * alpha[inner], tmp}, {2.0 * beta[inner], cur}, {-1.0, prev}});
            prev = cur;
            cur = next;
        }
    }

    // --- outer variables, innermost-first: Clenshaw with vector coefficients.
    // The accumulator block currently holds a row-major tensor over variables
    // 0..k with variable k fastest; each slice of length degrees[k]+1
    // collapses in place and results are compacted to the block head.
    for (std::size_t k = d - 1; k-- > 0;) {
        const std::size_t m = degrees[k];
        std::size_t slices = 1;
        for (std::size_t i = 0; i < k; ++i) slices *= degrees[i] + 1;
        if (m == 0) continue; // slice length 1: results already in place
        const std::uint32_t kShift = static_cast<std::uint32_t>(k);
        for (std::size_t s = 0; s < slices; ++s) {
            const auto g = [&](std::size_t j) {
                return static_cast<std::uint32_t>(acc_base + s * (m + 1) + j);
            };
            // b_m = g_m; descend j = m-1..1; write b_j over g_j (dead after read)
            std::uint32_t b_prev = 0;
            bool has_prev = false;
            std::uint32_t b_cur = g(m);
            for (std::size_t j = m; j-- > 1;) {
                b.emit_matvec(tmp, kShift, b_cur);
                std::vector<LinTerm> terms = {{1.0, g(j)},
                                              {2.0 * alpha[k], tmp},
                                              {2.0 * beta[k], b_cur}};
                if (has_prev) terms.push_back({-1.0, b_prev});
                b.emit_lin(g(j), std::move(terms));
                b_prev = b_cur;
                has_prev = true;
                b_cur = g(j);
            }
            // result = g_0 + (alpha S + beta I) b_1 - b_2
            b.emit_matvec(tmp, kShift, b_cur);
            std::vector<LinTerm> terms = {{1.0, g(0)}, {alpha[k], tmp}, {beta[k], b_cur}};
            if (has_prev) terms.push_back({-1.0, b_prev});
            b.emit_lin(g(0), std::move(terms));
        }
        // compact results (stride m+1) to the block head; sources stay ahead
        // of destinations so increasing order never clobbers a live slot
        for (std::size_t s = 1; s < slices; ++s)
            b.emit_lin(static_cast<std::uint32_t>(acc_base + s),
                       {{1.0, static_cast<std::uint32_t>(acc_base + s * (m + 1))}});
    }

    b.prog.output_register = acc_base;
    return b.prog;
}

} // namespace gfilt::detail
