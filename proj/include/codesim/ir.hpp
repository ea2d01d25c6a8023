#pragma once

// Restricted program representation shared by the generators and the oracle:
// integer registers, {+=, -=, =, &=, |=, *=} instructions, optional counted
// loops, rendered bit-exactly to Python3 source text.

#include <optional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "codesim/errors.hpp"
#include "codesim/value.hpp"

namespace codesim {

struct VarId {
    int index = 0;
    bool operator==(const VarId&) const = default;
};

enum class OpKind { AddAssign, SubAssign, Mov, AndAssign, OrAssign, MulAssign };

inline const char* op_token(OpKind k) {
    switch (k) {
    case OpKind::AddAssign: return "+=";
    case OpKind::SubAssign: return "-=";
    case OpKind::Mov: return "=";
    case OpKind::AndAssign: return "&=";
    case OpKind::OrAssign: return "|=";
    case OpKind::MulAssign: return "*=";
    }
    return "?";
}

class Operand {
  public:
    static Operand variable(VarId v) { return Operand(v); }
    static Operand literal(BigInt v) { return Operand(std::move(v)); }
    static Operand literal(std::int64_t v) { return Operand(BigInt(static_cast<long>(v))); }

    bool is_var() const { return std::holds_alternative<VarId>(v_); }
    VarId var() const { return std::get<VarId>(v_); }
    const BigInt& literal() const { return std::get<BigInt>(v_); }

    bool operator==(const Operand&) const = default;

  private:
    explicit Operand(VarId v) : v_(v) {}
    explicit Operand(BigInt v) : v_(std::move(v)) {}
    std::variant<VarId, BigInt> v_;
};

struct Instruction {
    OpKind kind = OpKind::Mov;
    VarId dst;
    Operand src = Operand::literal(0);
    bool operator==(const Instruction&) const = default;
};

inline Instruction make_instr(OpKind kind, VarId dst, Operand src) {
    return Instruction{kind, dst, std::move(src)};
}

// Loop iteration count: the symbolic function input n, or a literal.
class LoopCount {
  public:
    static LoopCount input_n() { return LoopCount(true, 0); }
    static LoopCount literal(BigInt c) { return LoopCount(false, std::move(c)); }

    bool is_symbolic() const { return symbolic_; }
    const BigInt& count() const { return count_; }

    bool operator==(const LoopCount&) const = default;

  private:
    LoopCount(bool s, BigInt c) : symbolic_(s), count_(std::move(c)) {}
    bool symbolic_ = false;
    BigInt count_;
};

struct LoopBlock;
using BodyNode = std::variant<Instruction, LoopBlock>;

struct LoopBlock {
    LoopCount iterations = LoopCount::input_n();
    std::vector<BodyNode> body;
    bool operator==(const LoopBlock&) const = default;
};

// How variable indices print. Straight-line families use a0..a4, the
// approximate family n_0..n_{k-1}, the nested accumulator a plain `a`.
enum class VarNaming { AIndexed, NUnderscore, PlainA };

struct FinalVarQuery {
    VarId var;
    bool operator==(const FinalVarQuery&) const = default;
};

struct FunctionQuery {
    std::vector<VarId> vars;
    bool as_list = false; // true renders `return [v0, ..., vk]` even for one var
    bool operator==(const FunctionQuery&) const = default;
};

using Query = std::variant<FinalVarQuery, FunctionQuery>;

struct Program {
    int var_count = 0;
    VarNaming naming = VarNaming::AIndexed;
    std::vector<BigInt> init_values;
    std::vector<BodyNode> body;
    Query query = FinalVarQuery{};

    bool is_function() const { return std::holds_alternative<FunctionQuery>(query); }
    bool operator==(const Program&) const = default;
};

struct SourceText {
    std::string text;
    std::string language_tag = "python3";
    bool operator==(const SourceText&) const = default;
};

inline std::string var_name(VarNaming naming, VarId v) {
    switch (naming) {
    case VarNaming::AIndexed: return "a" + std::to_string(v.index);
    case VarNaming::NUnderscore: return "n_" + std::to_string(v.index);
    case VarNaming::PlainA: return "a";
    }
    return {};
}

inline std::string var_name(const Program& p, VarId v) { return var_name(p.naming, v); }

namespace detail {

inline void check_var(const Program& p, VarId v, const char* what) {
    if (v.index < 0 || v.index >= p.var_count)
        throw InvalidProgram(std::string("uninitialized variable referenced as ") + what + ": index " +
                             std::to_string(v.index) + " with " + std::to_string(p.var_count) + " declared");
}

inline void validate_body(const Program& p, const std::vector<BodyNode>& body, int depth) {
    for (const auto& node : body) {
        if (const auto* ins = std::get_if<Instruction>(&node)) {
            check_var(p, ins->dst, "destination");
            if (ins->src.is_var()) check_var(p, ins->src.var(), "source");
            if (ins->kind == OpKind::MulAssign && depth == 0)
                throw InvalidProgram("MulAssign outside a loop body");
        } else {
            const auto& loop = std::get<LoopBlock>(node);
            if (loop.iterations.is_symbolic() && !p.is_function())
                throw InvalidProgram("symbolic loop count outside a function-shaped program");
            if (loop.body.empty()) throw InvalidProgram("empty loop body renders as invalid Python");
            validate_body(p, loop.body, depth + 1);
        }
    }
}

} // namespace detail

inline void validate(const Program& p) {
    if (p.var_count < 1) throw InvalidProgram("program declares no variables");
    if (static_cast<int>(p.init_values.size()) != p.var_count)
        throw InvalidProgram("init_values does not cover all declared variables");
    if (p.naming == VarNaming::PlainA && p.var_count != 1)
        throw InvalidProgram("plain `a` naming requires exactly one variable");
    detail::validate_body(p, p.body, 0);
    if (const auto* fv = std::get_if<FinalVarQuery>(&p.query)) {
        detail::check_var(p, fv->var, "query");
    } else {
        const auto& fq = std::get<FunctionQuery>(p.query);
        if (fq.vars.empty()) throw InvalidProgram("function query returns nothing");
        if (fq.vars.size() > 1 && !fq.as_list) throw InvalidProgram("multi-variable query must return a list");
        for (VarId v : fq.vars) detail::check_var(p, v, "query");
    }
}

namespace detail {

inline std::string render_operand(const Program& p, const Operand& src) {
    return src.is_var() ? var_name(p, src.var()) : to_string(src.literal());
}

inline std::string render_instruction(const Program& p, const Instruction& ins) {
    return var_name(p, ins.dst) + " " + op_token(ins.kind) + " " + render_operand(p, ins.src);
}

inline std::string render_loop_header(const LoopCount& c) {
    return c.is_symbolic() ? std::string("for _ in range(n):")
                           : "for _ in range(" + to_string(c.count()) + "):";
}

// Header line joining all initializations. Fig-style compact `a0=-1; a1=0`
// for indexed names, spaced `a = -2` for the single plain accumulator.
inline std::string render_init_line(const Program& p) {
    if (p.naming == VarNaming::PlainA) return "a = " + to_string(p.init_values[0]);
    std::string out;
    for (int i = 0; i < p.var_count; ++i) {
        if (i) out += "; ";
        out += var_name(p, VarId{i}) + "=" + to_string(p.init_values[static_cast<std::size_t>(i)]);
    }
    return out;
}

struct LineSink {
    std::vector<std::string> lines;
    std::unordered_map<const Instruction*, int>* line_of_instr = nullptr;

    void emit(int indent, std::string text, const Instruction* ins = nullptr) {
        if (ins && line_of_instr) (*line_of_instr)[ins] = static_cast<int>(lines.size()) + 1;
        lines.push_back(std::string(static_cast<std::size_t>(indent) * 4, ' ') + std::move(text));
    }
};

inline void render_body(const Program& p, const std::vector<BodyNode>& body, int indent, LineSink& sink) {
    for (const auto& node : body) {
        if (const auto* ins = std::get_if<Instruction>(&node)) {
            sink.emit(indent, render_instruction(p, *ins), ins);
        } else {
            const auto& loop = std::get<LoopBlock>(node);
            sink.emit(indent, render_loop_header(loop.iterations));
            render_body(p, loop.body, indent + 1, sink);
        }
    }
}

inline SourceText render_function(const Program& p, const std::string& name,
                                  std::unordered_map<const Instruction*, int>* line_of_instr) {
    const auto& fq = std::get<FunctionQuery>(p.query);
    LineSink sink;
    sink.line_of_instr = line_of_instr;
    sink.emit(0, "def " + name + "(n):");
    sink.emit(1, render_init_line(p));
    render_body(p, p.body, 1, sink);
    std::string ret = "return ";
    if (fq.as_list) {
        ret += "[";
        for (std::size_t i = 0; i < fq.vars.size(); ++i) {
            if (i) ret += ", ";
            ret += var_name(p, fq.vars[i]);
        }
        ret += "]";
    } else {
        ret += var_name(p, fq.vars[0]);
    }
    sink.emit(1, ret);
    std::string text;
    for (std::size_t i = 0; i < sink.lines.size(); ++i) {
        if (i) text += "\n";
        text += sink.lines[i];
    }
    return SourceText{text};
}

inline SourceText render_script(const Program& p,
                                std::unordered_map<const Instruction*, int>* line_of_instr) {
    LineSink sink;
    sink.line_of_instr = line_of_instr;
    sink.emit(0, render_init_line(p));
    render_body(p, p.body, 0, sink);
    std::string text;
    for (std::size_t i = 0; i < sink.lines.size(); ++i) {
        if (i) text += "\n";
        text += sink.lines[i];
    }
    return SourceText{text};
}

} // namespace detail

// Wraps a function-shaped program as `def {name}(n):` with a final return.
inline SourceText function_wrap(const Program& p, const std::string& name,
                                std::unordered_map<const Instruction*, int>* line_of_instr = nullptr) {
    validate(p);
    if (!p.is_function()) throw InvalidProgram("function_wrap on a straight-line query");
    return detail::render_function(p, name, line_of_instr);
}

// Deterministic rendering to Python3 source. Function-shaped programs wrap as
// `def f(n):`; straight-line programs emit the init header plus one statement
// per line.
inline SourceText render(const Program& p,
                         std::unordered_map<const Instruction*, int>* line_of_instr = nullptr) {
    validate(p);
    if (p.is_function()) return detail::render_function(p, "f", line_of_instr);
    return detail::render_script(p, line_of_instr);
}

} // namespace codesim
