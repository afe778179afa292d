#include "gfilt/distributed.hpp"
#include "gfilt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

namespace gfilt {

void RoundLedger::merge(const RoundLedger& other) {
    rounds += other.rounds;
    messages += other.messages;
    per_agent_max_messages = std::max(per_agent_max_messages, other.per_agent_max_messages);
}

Network::Network(const FilterSpec& filter_h, const FilterSpec& filter_c, std::span<const double> y)
    : prog_h_(detail::compile_filter_program(filter_h.poly())),
      prog_c_(detail::compile_filter_program(filter_c.poly())) {
    if (!filter_h.shares_shifts_with(filter_c))
        throw Error(errc::invalid_argument, "H and C must share the shift list");
    const std::size_t n = filter_h.dim();
    if (y.size() != n) throw Error(errc::dimension_mismatch, "input signal length mismatch");

    const std::size_t num_regs = std::max(prog_h_.num_registers, prog_c_.num_registers);
    agents_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        Agent& a = agents_[i];
        a.id = i;
        a.y = y[i];
        a.shift_rows.reserve(filter_h.num_shifts());
        std::size_t max_row = 0;
        for (const auto& s : filter_h.shifts()) {
            const auto row = s.row(i);
            a.shift_rows.emplace_back(row.begin(), row.end());
            max_row = std::max(max_row, row.size());
        }
        a.regs.assign(num_regs, 0.0);
        a.mailbox.reserve(max_row);
    }
}

std::size_t Network::scratch_registers_per_agent() const {
    return agents_.empty() ? 0 : agents_[0].regs.size();
}

void Network::exchange_round(std::size_t shift_index, std::uint32_t src_reg, RoundLedger& ledger,
                             std::vector<RoundRecord>* records, std::size_t iteration) {
    // send phase: every agent posts its register value to the neighbors
    // that carry it in their rows (symmetric support, so its own row lists
    // exactly those neighbors); mailboxes fill in ascending sender order
    for (auto& a : agents_) a.mailbox.clear();
    std::size_t sent_total = 0;
    std::size_t sent_max = 0;
    for (const auto& a : agents_) {
        const double value = a.regs[src_reg];
        std::size_t sent = 0;
        for (const auto& entry : a.shift_rows[shift_index]) {
            if (entry.col == a.id) continue;
            agents_[entry.col].mailbox.emplace_back(a.id, value);
            ++sent;
        }
        sent_total += sent;
        sent_max = std::max(sent_max, sent);
    }
    ledger.rounds += 1;
    ledger.messages += sent_total;
    ledger.per_agent_max_messages = std::max(ledger.per_agent_max_messages, sent_max);
    if (records) records->push_back({iteration, ledger.rounds, sent_total});
}

std::vector<double> Network::sim_apply_filter(WhichFilter which, AgentRegister input,
                                              RoundLedger& ledger,
                                              std::vector<RoundRecord>* records,
                                              std::size_t iteration) {
    const detail::FilterProgram& prog = which == WhichFilter::H ? prog_h_ : prog_c_;
    for (auto& a : agents_) {
        double v = 0.0;
        switch (input) {
            case AgentRegister::x: v = a.x; break;
            case AgentRegister::e: v = a.e; break;
            case AgentRegister::y: v = a.y; break;
        }
        a.regs[prog.input_register] = v;
    }
    for (const auto& ins : prog.instructions) {
        if (ins.op == detail::Instruction::Op::matvec) {
            exchange_round(ins.shift_index, ins.src, ledger, records, iteration);
            // compute phase: row-weighted combine of own value and mailbox,
            // walked in sorted column order (mailbox senders are ascending)
            for (auto& a : agents_) {
                double acc = 0.0;
                std::size_t m = 0;
                for (const auto& entry : a.shift_rows[ins.shift_index]) {
                    if (entry.col == a.id) {
                        acc += entry.value * a.regs[ins.src];
                    } else {
                        while (m < a.mailbox.size() && a.mailbox[m].first < entry.col) ++m;
                        if (m >= a.mailbox.size() || a.mailbox[m].first != entry.col)
                            throw Error(errc::invalid_argument,
                                        "missing one-hop message (support mismatch)");
                        acc += entry.value * a.mailbox[m].second;
                    }
                }
                a.regs[ins.dst] = acc;
            }
        } else {
            for (auto& a : agents_) {
                double acc = 0.0;
                for (const auto& t : ins.terms) acc += t.coeff * a.regs[t.src];
                a.regs[ins.dst] = acc;
            }
        }
    }
    std::vector<double> out(agents_.size());
    for (std::size_t i = 0; i < agents_.size(); ++i) out[i] = agents_[i].regs[prog.output_register];
    return out;
}

IterTrace Network::sim_cipa(std::size_t m, RoundLedger& ledger, std::vector<RoundRecord>* records) {
    if (m < 1) throw Error(errc::invalid_argument, "need at least one iteration");
    for (auto& a : agents_) {
        a.x = 0.0;
        a.e = 0.0;
    }
    IterTrace trace;
    const auto snapshot_x = [&] {
        std::vector<double> x(agents_.size());
        for (std::size_t i = 0; i < agents_.size(); ++i) x[i] = agents_[i].x;
        return x;
    };
    trace.iterates.push_back(snapshot_x());

    double min_res = std::numeric_limits<double>::infinity();
    double first_res = 0.0;
    const auto residual_of_x = [&] {
        const auto hx = sim_apply_filter(WhichFilter::H, AgentRegister::x, ledger, records,
                                         trace.iterates.size());
        double sq = 0.0;
        for (std::size_t i = 0; i < agents_.size(); ++i) {
            agents_[i].e = hx[i] - agents_[i].y;
            sq += agents_[i].e * agents_[i].e;
        }
        return std::sqrt(sq);
    };

    for (std::size_t it = 1; it <= m; ++it) {
        const double res = residual_of_x(); // e^(it) = H x^(it-1) - y
        trace.residual_norms.push_back(res);
        if (it == 1) first_res = res;
        if (!std::isfinite(res) || (res > 1e6 * min_res && res > first_res))
            throw Error(errc::divergence, "aggregated residual grew by more than 1e6 (b~_M >= 1?)");
        min_res = std::min(min_res, res);
        const auto ce =
            sim_apply_filter(WhichFilter::C, AgentRegister::e, ledger, records, it);
        for (std::size_t i = 0; i < agents_.size(); ++i) agents_[i].x -= ce[i];
        trace.iterates.push_back(snapshot_x());
    }
    trace.residual_norms.push_back(residual_of_x());
    trace.rounds = ledger.rounds;
    trace.messages = ledger.messages;
    return trace;
}

void Network::dump_state(std::ostream& out) const {
    if (agents_.size() > 1000)
        throw Error(errc::size_cap, "per-agent state dump guarded to n <= 1000");
    out << std::setprecision(17);
    out << "agent,x,e,y\n";
    for (const auto& a : agents_) out << a.id << "," << a.x << "," << a.e << "," << a.y << "\n";
}

void write_round_records_csv(std::ostream& out, const std::vector<RoundRecord>& records) {
    out << "round,iteration,messages_this_round\n";
    for (const auto& r : records)
        out << r.round << "," << r.iteration << "," << r.messages_this_round << "\n";
}

} // namespace gfilt
