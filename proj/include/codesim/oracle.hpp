#pragma once

// Deterministic evaluator for the restricted IR: exact big-integer execution,
// per-instruction tracing, and a closed-form fast path for counted loops so
// deeply nested programs evaluate without unrolling.

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "codesim/errors.hpp"
#include "codesim/ir.hpp"
#include "codesim/value.hpp"

namespace codesim {

using VarState = std::vector<BigInt>;

struct EvalLimits {
    // Dynamic instruction budget for direct interpretation / tracing.
    std::uint64_t max_steps = 1'000'000;
    // Largest trip count for which |m| >= 2 geometric growth is materialized.
    std::uint64_t max_geometric_iters = 1'048'576;
};

struct TraceLine {
    int source_line = 0; // 1-based line in the rendered source
    std::string text;    // "2. a0 -= a1 -> a0 = 5 - 3 = 2"
};

struct Trace {
    std::vector<TraceLine> entries; // first entry is the full initial state
    VarState final_state;
};

namespace detail {

// Composable map w -> m*w + b over one register.
struct Affine {
    BigInt m{1}, b{0};
};

inline Affine compose(const Affine& outer, const Affine& inner) {
    return Affine{outer.m * inner.m, outer.m * inner.b + outer.b};
}

// N-fold self-composition. Exact: for m != 1 the sum m^{N-1}+...+1 equals
// (m^N - 1)/(m - 1), an exact integer division.
inline std::optional<Affine> affine_power(const Affine& f, const BigInt& n,
                                          const EvalLimits& limits) {
    if (n <= 0) return Affine{1, 0};
    if (f.m == 1) return Affine{1, f.b * n};
    if (f.m == 0) return Affine{0, f.b};
    if (f.m == -1) {
        const bool odd = mpz_odd_p(n.get_mpz_t()) != 0;
        return odd ? f : Affine{1, 0};
    }
    if (!n.fits_ulong_p() || n.get_ui() > limits.max_geometric_iters) return std::nullopt;
    const unsigned long k = n.get_ui();
    BigInt mk = bigint_pow(f.m, k);
    BigInt num = mk - 1;
    BigInt den = f.m - 1;
    BigInt s;
    mpz_divexact(s.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    return Affine{mk, f.b * s};
}

inline void collect_written(const std::vector<BodyNode>& body, std::set<int>& out) {
    for (const auto& node : body) {
        if (const auto* ins = std::get_if<Instruction>(&node)) {
            out.insert(ins->dst.index);
        } else {
            collect_written(std::get<LoopBlock>(node).body, out);
        }
    }
}

class Executor {
  public:
    Executor(const Program& p, const EvalLimits& limits, std::optional<BigInt> input_n)
        : p_(p), limits_(limits), input_n_(std::move(input_n)), state_(p.init_values) {}

    void enable_trace() {
        trace_.emplace();
        trace_->entries.push_back({1, initial_state_line()});
        render(p_, &line_of_instr_);
    }

    void run() { exec_body(p_.body); }

    const VarState& state() const { return state_; }

    Trace take_trace() {
        Trace t = std::move(*trace_);
        t.final_state = state_;
        return t;
    }

  private:
    bool trace_enabled() const { return trace_.has_value(); }

    std::string initial_state_line() {
        std::string out;
        for (int i = 0; i < p_.var_count; ++i) {
            if (i) out += "; ";
            out += var_name(p_, VarId{i}) + "=" + to_string(p_.init_values[static_cast<std::size_t>(i)]);
        }
        return out;
    }

    BigInt operand_value(const Operand& src) const {
        return src.is_var() ? state_[static_cast<std::size_t>(src.var().index)] : src.literal();
    }

    void count_step() {
        if (++steps_ > limits_.max_steps)
            throw TraceTooLong("dynamic instruction budget of " + std::to_string(limits_.max_steps) +
                               " exceeded");
    }

    void apply(const Instruction& ins) {
        count_step();
        BigInt& dst = state_[static_cast<std::size_t>(ins.dst.index)];
        const BigInt rhs = operand_value(ins.src);
        const BigInt before = dst;
        switch (ins.kind) {
        case OpKind::AddAssign: dst += rhs; break;
        case OpKind::SubAssign: dst -= rhs; break;
        case OpKind::Mov: dst = rhs; break;
        case OpKind::AndAssign: dst &= rhs; break;
        case OpKind::OrAssign: dst |= rhs; break;
        case OpKind::MulAssign: dst *= rhs; break;
        }
        if (trace_enabled()) record(ins, before, rhs, dst);
    }

    void record(const Instruction& ins, const BigInt& before, const BigInt& rhs, const BigInt& after) {
        const int line = line_of_instr_.at(&ins);
        std::string explain = var_name(p_, ins.dst) + " = ";
        if (ins.kind == OpKind::Mov) {
            explain += to_string(after);
        } else {
            const char* mid = "?";
            switch (ins.kind) {
            case OpKind::AddAssign: mid = "+"; break;
            case OpKind::SubAssign: mid = "-"; break;
            case OpKind::AndAssign: mid = "&"; break;
            case OpKind::OrAssign: mid = "|"; break;
            case OpKind::MulAssign: mid = "*"; break;
            case OpKind::Mov: break;
            }
            explain += to_string(before) + " " + mid + " " + to_string(rhs) + " = " + to_string(after);
        }
        std::string text = std::to_string(line) + ". " + detail::render_instruction(p_, ins) + " -> " + explain;
        trace_->entries.push_back({line, std::move(text)});
        if (trace_->entries.size() > limits_.max_steps)
            throw TraceTooLong("trace budget exceeded");
    }

    BigInt resolve(const LoopCount& c) const {
        if (!c.is_symbolic()) return c.count();
        if (!input_n_) throw InvalidProgram("symbolic loop count with no bound input");
        return *input_n_;
    }

    // Folds a loop body into w -> m*w + b over the single written register.
    // Registers only read inside the body are constants at this point of the
    // execution, so their current values fold into b.
    std::optional<Affine> fold_body(const std::vector<BodyNode>& body, int v) {
        Affine acc{1, 0};
        for (const auto& node : body) {
            if (const auto* ins = std::get_if<Instruction>(&node)) {
                std::optional<BigInt> rhs_const;
                bool rhs_self = false;
                if (ins->src.is_var()) {
                    if (ins->src.var().index == v)
                        rhs_self = true;
                    else
                        rhs_const = state_[static_cast<std::size_t>(ins->src.var().index)];
                } else {
                    rhs_const = ins->src.literal();
                }
                Affine step;
                switch (ins->kind) {
                case OpKind::AddAssign:
                    step = rhs_self ? Affine{2, 0} : Affine{1, *rhs_const};
                    break;
                case OpKind::SubAssign:
                    step = rhs_self ? Affine{0, 0} : Affine{1, -*rhs_const};
                    break;
                case OpKind::Mov:
                    step = rhs_self ? Affine{1, 0} : Affine{0, *rhs_const};
                    break;
                case OpKind::MulAssign:
                    if (rhs_self) return std::nullopt; // w*w is not affine
                    step = Affine{*rhs_const, 0};
                    break;
                case OpKind::AndAssign:
                case OpKind::OrAssign:
                    return std::nullopt; // bitwise ops are not affine
                }
                acc = compose(step, acc);
            } else {
                const auto& loop = std::get<LoopBlock>(node);
                auto inner = fold_body(loop.body, v);
                if (!inner) return std::nullopt;
                auto powered = affine_power(*inner, resolve(loop.iterations), limits_);
                if (!powered) return std::nullopt;
                acc = compose(*powered, acc);
            }
        }
        return acc;
    }

    void exec_loop(const LoopBlock& loop) {
        const BigInt n = resolve(loop.iterations);
        if (n <= 0) return; // range(k) for k <= 0 runs zero iterations
        if (!trace_enabled()) {
            std::set<int> written;
            detail::collect_written(loop.body, written);
            if (written.empty()) return;
            if (written.size() == 1) {
                const int v = *written.begin();
                if (auto one = fold_body(loop.body, v)) {
                    if (auto total = affine_power(*one, n, limits_)) {
                        count_step();
                        BigInt& w = state_[static_cast<std::size_t>(v)];
                        w = total->m * w + total->b;
                        return;
                    }
                }
            }
        }
        if (!n.fits_ulong_p())
            throw TraceTooLong("loop trip count too large to interpret directly");
        const unsigned long k = n.get_ui();
        for (unsigned long i = 0; i < k; ++i) exec_body(loop.body);
    }

    void exec_body(const std::vector<BodyNode>& body) {
        for (const auto& node : body) {
            if (const auto* ins = std::get_if<Instruction>(&node))
                apply(*ins);
            else
                exec_loop(std::get<LoopBlock>(node));
        }
    }

    const Program& p_;
    EvalLimits limits_;
    std::optional<BigInt> input_n_;
    VarState state_;
    std::uint64_t steps_ = 0;
    std::optional<Trace> trace_;
    std::unordered_map<const Instruction*, int> line_of_instr_;
};

inline Value query_value(const Program& p, const VarState& state) {
    if (const auto* fv = std::get_if<FinalVarQuery>(&p.query))
        return Value::integer(state[static_cast<std::size_t>(fv->var.index)]);
    const auto& fq = std::get<FunctionQuery>(p.query);
    if (!fq.as_list) return Value::integer(state[static_cast<std::size_t>(fq.vars[0].index)]);
    std::vector<BigInt> items;
    items.reserve(fq.vars.size());
    for (VarId v : fq.vars) items.push_back(state[static_cast<std::size_t>(v.index)]);
    return Value::list(std::move(items));
}

} // namespace detail

// Evaluates a straight-line or literal-loop program to its queried value.
inline Value eval(const Program& p, const EvalLimits& limits = {}) {
    validate(p);
    if (p.is_function()) throw InvalidProgram("function-shaped program requires an input; use eval_function");
    detail::Executor ex(p, limits, std::nullopt);
    ex.run();
    return detail::query_value(p, ex.state());
}

// Evaluates a function-shaped program at input n.
inline Value eval_function(const Program& p, const BigInt& n, const EvalLimits& limits = {}) {
    validate(p);
    if (!p.is_function()) throw InvalidProgram("eval_function on a straight-line query");
    detail::Executor ex(p, limits, n);
    ex.run();
    return detail::query_value(p, ex.state());
}

// Per-instruction execution trace with source line numbers. Loops are fully
// unrolled, subject to the step budget.
inline Trace trace(const Program& p, const EvalLimits& limits = {}) {
    validate(p);
    detail::Executor ex(p, limits, std::nullopt);
    ex.enable_trace();
    ex.run();
    return ex.take_trace();
}

inline Trace trace_function(const Program& p, const BigInt& n, const EvalLimits& limits = {}) {
    validate(p);
    if (!p.is_function()) throw InvalidProgram("trace_function on a straight-line query");
    detail::Executor ex(p, limits, n);
    ex.enable_trace();
    ex.run();
    return ex.take_trace();
}

// --- Backward data-dependence slicing (straight-line programs only) ---

namespace detail {

inline std::vector<int> reads_of(const Instruction& ins) {
    std::vector<int> r;
    if (ins.kind != OpKind::Mov) r.push_back(ins.dst.index);
    if (ins.src.is_var()) r.push_back(ins.src.var().index);
    return r;
}

} // namespace detail

// Indices (ascending) of the body instructions the queried variable's final
// value depends on. On this language class the static backward slice equals
// the dynamic critical path.
inline std::vector<std::size_t> backward_slice(const Program& p, VarId target) {
    validate(p);
    detail::check_var(p, target, "slice target");
    std::set<int> live{target.index};
    std::vector<std::size_t> picked;
    for (std::size_t i = p.body.size(); i-- > 0;) {
        const auto* ins = std::get_if<Instruction>(&p.body[i]);
        if (!ins) throw InvalidProgram("backward_slice requires a loop-free program");
        if (!live.count(ins->dst.index)) continue;
        picked.push_back(i);
        if (ins->kind == OpKind::Mov) live.erase(ins->dst.index); // overwrite kills the dependence
        for (int r : detail::reads_of(*ins)) live.insert(r);
    }
    std::vector<std::size_t> out(picked.rbegin(), picked.rend());
    return out;
}

// The same program with its body restricted to the given instruction indices.
inline Program restrict_to(const Program& p, const std::vector<std::size_t>& indices) {
    Program out = p;
    out.body.clear();
    for (std::size_t i : indices) out.body.push_back(p.body[i]);
    return out;
}

} // namespace codesim
