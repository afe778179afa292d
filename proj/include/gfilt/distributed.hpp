#pragma once

#include "gfilt/detail/filter_program.hpp"
#include "gfilt/filter.hpp"

#include <cstddef>
#include <iosfwd>
#include <vector>

namespace gfilt {

/// Accounting of the synchronous one-hop rounds of a simulated run.
struct RoundLedger {
    std::size_t rounds = 0;                 // communication rounds executed
    std::size_t messages = 0;               // total scalar values sent
    std::size_t per_agent_max_messages = 0; // max sends by one agent in one round

    void merge(const RoundLedger& other);
};

/// Per-round trace row for CSV export.
struct RoundRecord {
    std::size_t iteration = 0;
    std::size_t round = 0;
    std::size_t messages_this_round = 0;
};

/// One vertex of the simulated network. An agent owns nothing global: its
/// rows of each shift (restricted to itself and its neighbors), its y(i),
/// its solver state x(i)/e(i), and the bounded scratch registers of the
/// filter schedule.
struct Agent {
    std::size_t id = 0;
    std::vector<std::vector<Shift::Entry>> shift_rows; // one row per shift
    double y = 0.0;
    double x = 0.0;
    double e = 0.0;
    std::vector<double> regs;                        // schedule scratch
    std::vector<std::pair<std::size_t, double>> mailbox; // (sender, value), sorted by sender
};

enum class WhichFilter { H, C };
enum class AgentRegister { x, e, y };

/// Vertex-level simulator of the iterative inverse filter: agents exchange
/// scalars only along edges, one shift application per round. Both filter
/// schedules are the exact programs the centralized engine runs.
class Network {
public:
    /// distribute(): hands each agent its shift rows, its y(i), and the
    /// (global, O(1)-size) coefficient schedules of both polynomials.
    Network(const FilterSpec& filter_h, const FilterSpec& filter_c, std::span<const double> y);

    std::size_t num_agents() const { return agents_.size(); }
    const Agent& agent(std::size_t i) const { return agents_[i]; }

    /// Scratch registers each agent carries (independent of network size).
    std::size_t scratch_registers_per_agent() const;

    /// Runs one filter application at the vertex level from the given agent
    /// register; returns per-agent outputs. Appends per-round rows to
    /// `records` when non-null.
    std::vector<double> sim_apply_filter(WhichFilter which, AgentRegister input,
                                         RoundLedger& ledger,
                                         std::vector<RoundRecord>* records = nullptr,
                                         std::size_t iteration = 0);

    /// Runs m CIPA iterations at the vertex level; the returned trace's
    /// iterates are the per-agent x(i) after each iteration. The divergence
    /// guard is evaluated on the globally aggregated residual (a harness
    /// convenience, not an agent capability).
    IterTrace sim_cipa(std::size_t m, RoundLedger& ledger,
                       std::vector<RoundRecord>* records = nullptr);

    /// Written per-agent state dump, guarded to n <= 1000.
    void dump_state(std::ostream& out) const;

private:
    void exchange_round(std::size_t shift_index, std::uint32_t src_reg, RoundLedger& ledger,
                        std::vector<RoundRecord>* records, std::size_t iteration);

    std::vector<Agent> agents_;
    detail::FilterProgram prog_h_;
    detail::FilterProgram prog_c_;
};

void write_round_records_csv(std::ostream& out, const std::vector<RoundRecord>& records);

} // namespace gfilt
