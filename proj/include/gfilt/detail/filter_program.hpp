#pragma once

#include "gfilt/chebyshev.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace gfilt::detail {

/// Register program realizing one polynomial-filter application
/// h(S_1,...,S_d) x. Registers hold graph signals; the only instruction that
/// moves data between vertices is MatVec (one shift-vector product), so the
/// distributed simulator maps each MatVec to exactly one synchronous
/// communication round and everything else stays agent-local.
///
/// Schedule: the innermost variable runs the forward Chebyshev three-term
/// recurrence on T_j(S~_d) x (shared across all outer coefficients); every
/// outer variable is folded in by Clenshaw with vector-valued coefficients.
/// The register count depends only on d and the per-variable degrees.
struct LinTerm {
    double coeff;
    std::uint32_t src;
};

struct Instruction {
    enum class Op { matvec, lin };
    Op op;
    std::uint32_t dst = 0;
    std::uint32_t shift_index = 0;          // matvec: dst = S_k * reg[src]
    std::uint32_t src = 0;                  // matvec source
    std::vector<LinTerm> terms;             // lin: dst = sum coeff * reg[src], empty = 0
};

struct FilterProgram {
    std::size_t num_registers = 0;          // register 0 is the input signal
    std::uint32_t input_register = 0;
    std::uint32_t output_register = 0;
    std::vector<Instruction> instructions;

    std::size_t rounds() const {
        std::size_t r = 0;
        for (const auto& ins : instructions)
            if (ins.op == Instruction::Op::matvec) ++r;
        return r;
    }
};

/// Compiles the evaluation schedule of `poly`; shift k is rescaled on the
/// fly with the affine map of poly.cube().interval(k).
FilterProgram compile_filter_program(const MultiPoly& poly);

} // namespace gfilt::detail
