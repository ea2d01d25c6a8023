#pragma once

// Procedural synthesis of benchmark instances. Every generator is a pure
// function of (parameters, seed): identical inputs produce byte-identical
// instances, including question text and source renderings. Ground truth is
// computed by the evaluator at construction time, never assumed.

#include <algorithm>
#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "codesim/corpus.hpp"
#include "codesim/errors.hpp"
#include "codesim/hashing.hpp"
#include "codesim/ir.hpp"
#include "codesim/oracle.hpp"
#include "codesim/phrases.hpp"
#include "codesim/rng.hpp"
#include "codesim/value.hpp"

namespace codesim {

enum class Family {
    SingleClass,
    StraightLine,
    CriticalPath,
    Approximate,
    Redundant,
    NestedLoops,
    Sorting,
    VariantPair,
    GoodExchange,
};

inline std::string_view family_name(Family f) {
    switch (f) {
    case Family::SingleClass: return "single_class";
    case Family::StraightLine: return "straight_line";
    case Family::CriticalPath: return "critical_path";
    case Family::Approximate: return "approximate";
    case Family::Redundant: return "redundant";
    case Family::NestedLoops: return "nested_loops";
    case Family::Sorting: return "sorting";
    case Family::VariantPair: return "variant_pair";
    case Family::GoodExchange: return "good_exchange";
    }
    throw UnknownFamily("unhandled family enum value");
}

inline Family family_from_name(std::string_view name) {
    static const std::vector<Family> all = {
        Family::SingleClass, Family::StraightLine, Family::CriticalPath,
        Family::Approximate, Family::Redundant,    Family::NestedLoops,
        Family::Sorting,     Family::VariantPair,  Family::GoodExchange,
    };
    for (Family f : all)
        if (family_name(f) == name) return f;
    throw UnknownFamily("no task family named '" + std::string(name) + "'");
}

enum class InstructionClass { AddSub, Mov, AndOr };

inline std::string_view instruction_class_name(InstructionClass c) {
    switch (c) {
    case InstructionClass::AddSub: return "addsub";
    case InstructionClass::Mov: return "mov";
    case InstructionClass::AndOr: return "andor";
    }
    throw UnknownFamily("unhandled instruction class enum value");
}

inline InstructionClass instruction_class_from_name(std::string_view name) {
    for (InstructionClass c : {InstructionClass::AddSub, InstructionClass::Mov, InstructionClass::AndOr})
        if (instruction_class_name(c) == name) return c;
    throw UnknownFamily("no instruction class named '" + std::string(name) + "'");
}

enum class SortStyle { Iterative, Recursive };

inline std::string_view sort_style_name(SortStyle s) {
    return s == SortStyle::Iterative ? "iterative" : "recursive";
}

inline SortStyle sort_style_from_name(std::string_view name) {
    if (name == "iterative") return SortStyle::Iterative;
    if (name == "recursive") return SortStyle::Recursive;
    throw UnknownFamily("no sorting style named '" + std::string(name) + "'");
}

enum class ExchangeMode { Naturalistic, Synthetic };

inline std::string_view exchange_mode_name(ExchangeMode m) {
    return m == ExchangeMode::Naturalistic ? "naturalistic" : "synthetic";
}

inline ExchangeMode exchange_mode_from_name(std::string_view name) {
    if (name == "naturalistic") return ExchangeMode::Naturalistic;
    if (name == "synthetic") return ExchangeMode::Synthetic;
    throw UnknownFamily("no exchange mode named '" + std::string(name) + "'");
}

// Parameter record for one benchmark cell. Only the fields relevant to the
// family participate in the canonical rendering (and therefore in instance
// ids); unrelated fields keep their defaults and are ignored.
struct FamilyParams {
    Family family = Family::StraightLine;
    int n_lines = 0;
    int var_count = 5;
    int path_len = 0;    // CriticalPath
    int k = 0;           // Approximate loop count / NestedLoops depth
    int m = 0;           // Redundant copies
    int input_len = 0;   // Sorting
    std::int64_t n_input = 10;
    std::vector<InstructionClass> instruction_classes;
    SortStyle style = SortStyle::Iterative;  // Sorting
    ExchangeMode mode = ExchangeMode::Synthetic;  // GoodExchange
    std::string algorithm;  // Sorting algorithm / corpus id for VariantPair members
    bool enforce_bound = true;  // NestedLoops
    bool anonymize = false;     // VariantPair

    std::string canonical() const {
        std::string s(family_name(family));
        auto add = [&s](std::string_view key, const std::string& v) {
            s += ';';
            s += key;
            s += '=';
            s += v;
        };
        switch (family) {
        case Family::SingleClass: {
            std::string cls;
            for (auto c : instruction_classes) {
                if (!cls.empty()) cls += '+';
                cls += instruction_class_name(c);
            }
            add("class", cls);
            add("lines", std::to_string(n_lines));
            add("vars", std::to_string(var_count));
            break;
        }
        case Family::StraightLine:
            add("lines", std::to_string(n_lines));
            add("vars", std::to_string(var_count));
            break;
        case Family::CriticalPath:
            add("lines", std::to_string(n_lines));
            add("path", std::to_string(path_len));
            add("vars", std::to_string(var_count));
            break;
        case Family::Approximate:
            add("k", std::to_string(k));
            add("n", std::to_string(n_input));
            break;
        case Family::Redundant:
            add("m", std::to_string(m));
            add("lines", std::to_string(n_lines));
            add("vars", std::to_string(var_count));
            break;
        case Family::NestedLoops:
            add("k", std::to_string(k));
            add("n", std::to_string(n_input));
            add("bound", enforce_bound ? "1" : "0");
            break;
        case Family::Sorting:
            add("alg", algorithm);
            add("style", std::string(sort_style_name(style)));
            add("len", std::to_string(input_len));
            break;
        case Family::VariantPair:
            add("fn", algorithm);
            add("anon", anonymize ? "1" : "0");
            break;
        case Family::GoodExchange:
            add("interactions", std::to_string(n_lines));
            add("mode", std::string(exchange_mode_name(mode)));
            break;
        }
        return s;
    }

    // Compact tag for file names: no separators that are awkward on disk.
    std::string file_tag() const {
        switch (family) {
        case Family::SingleClass:
            return std::string(instruction_class_name(instruction_classes.at(0))) + "_l" +
                   std::to_string(n_lines);
        case Family::StraightLine: return "l" + std::to_string(n_lines);
        case Family::CriticalPath:
            return "l" + std::to_string(n_lines) + "_p" + std::to_string(path_len);
        case Family::Approximate: return "k" + std::to_string(k);
        case Family::Redundant: return "m" + std::to_string(m);
        case Family::NestedLoops: return "k" + std::to_string(k);
        case Family::Sorting:
            return algorithm + "_" + std::string(sort_style_name(style)) + "_len" +
                   std::to_string(input_len);
        case Family::VariantPair: return algorithm + (anonymize ? "_anon" : "");
        case Family::GoodExchange:
            return std::string(exchange_mode_name(mode)) + "_i" + std::to_string(n_lines);
        }
        throw UnknownFamily("unhandled family enum value");
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["family"] = std::string(family_name(family));
        switch (family) {
        case Family::SingleClass: {
            std::vector<std::string> cls;
            for (auto c : instruction_classes) cls.emplace_back(instruction_class_name(c));
            j["instruction_classes"] = cls;
            j["n_lines"] = n_lines;
            j["var_count"] = var_count;
            break;
        }
        case Family::StraightLine:
            j["n_lines"] = n_lines;
            j["var_count"] = var_count;
            break;
        case Family::CriticalPath:
            j["n_lines"] = n_lines;
            j["path_len"] = path_len;
            j["var_count"] = var_count;
            break;
        case Family::Approximate:
            j["k"] = k;
            j["n_input"] = n_input;
            break;
        case Family::Redundant:
            j["m"] = m;
            j["n_lines"] = n_lines;
            j["var_count"] = var_count;
            break;
        case Family::NestedLoops:
            j["k"] = k;
            j["n_input"] = n_input;
            j["enforce_bound"] = enforce_bound;
            break;
        case Family::Sorting:
            j["algorithm"] = algorithm;
            j["style"] = std::string(sort_style_name(style));
            j["input_len"] = input_len;
            break;
        case Family::VariantPair:
            j["function"] = algorithm;
            j["anonymize"] = anonymize;
            break;
        case Family::GoodExchange:
            j["n_interactions"] = n_lines;
            j["mode"] = std::string(exchange_mode_name(mode));
            break;
        }
        return j;
    }

    static FamilyParams from_json(const nlohmann::json& j) {
        FamilyParams p;
        p.family = family_from_name(j.at("family").get<std::string>());
        switch (p.family) {
        case Family::SingleClass:
            for (const auto& name : j.at("instruction_classes"))
                p.instruction_classes.push_back(
                    instruction_class_from_name(name.get<std::string>()));
            p.n_lines = j.at("n_lines").get<int>();
            p.var_count = j.value("var_count", 5);
            break;
        case Family::StraightLine:
            p.n_lines = j.at("n_lines").get<int>();
            p.var_count = j.value("var_count", 5);
            break;
        case Family::CriticalPath:
            p.n_lines = j.at("n_lines").get<int>();
            p.path_len = j.at("path_len").get<int>();
            p.var_count = j.value("var_count", 5);
            break;
        case Family::Approximate:
            p.k = j.at("k").get<int>();
            p.n_input = j.value("n_input", std::int64_t{10});
            break;
        case Family::Redundant:
            p.m = j.at("m").get<int>();
            p.n_lines = j.value("n_lines", 10);
            p.var_count = j.value("var_count", 5);
            break;
        case Family::NestedLoops:
            p.k = j.at("k").get<int>();
            p.n_input = j.value("n_input", std::int64_t{10});
            p.enforce_bound = j.value("enforce_bound", true);
            break;
        case Family::Sorting:
            p.algorithm = j.at("algorithm").get<std::string>();
            p.style = sort_style_from_name(j.at("style").get<std::string>());
            p.input_len = j.at("input_len").get<int>();
            break;
        case Family::VariantPair:
            p.algorithm = j.at("function").get<std::string>();
            p.anonymize = j.value("anonymize", false);
            break;
        case Family::GoodExchange:
            p.n_lines = j.at("n_interactions").get<int>();
            p.mode = exchange_mode_from_name(j.at("mode").get<std::string>());
            break;
        }
        return p;
    }
};

// Structured description of what the question asks for; the prompt builder
// consumes this instead of re-parsing the question sentence.
struct QueryInfo {
    enum class Kind { FinalVariable, FunctionValue, SortedVector, AgentCount };
    Kind kind = Kind::FinalVariable;
    std::string var_name;      // FinalVariable (and the synthetic exchange rendering)
    std::string input_render;  // FunctionValue: "n=10"; SortedVector: the vector literal
    std::string agent;         // AgentCount
    std::string good;          // AgentCount
};

struct BenchmarkInstance {
    std::string id;  // stable hash of (family, params, seed, input)
    Family family = Family::StraightLine;
    FamilyParams params;
    std::uint64_t seed = 0;
    std::vector<SourceText> sources;  // one per program variant (m for Redundant)
    std::string question;
    QueryInfo query;
    std::optional<Value> input;  // function input / sorting vector, when applicable
    Value ground_truth;
    std::vector<Program> programs;  // parallel to sources when IR-backed, else empty
};

namespace detail {

inline std::uint64_t gen_stream_seed(const FamilyParams& params, std::uint64_t seed) {
    HashWriter w;
    w.add("generate").add(params.canonical()).add_u64(seed);
    return w.value();
}

inline std::string make_instance_id(const FamilyParams& params, std::uint64_t seed,
                                    std::string_view extra = {}) {
    HashWriter w;
    w.add("instance").add(params.canonical()).add_u64(seed).add(extra);
    return hex64(w.value());
}

// Construction-time ground-truth check: re-evaluate every attached program
// and require agreement with the stored ground truth.
inline void verify_instance(const BenchmarkInstance& inst) {
    for (const Program& p : inst.programs) {
        Value got = p.is_function() ? eval_function(p, inst.input ? inst.input->as_int() : BigInt(10))
                                    : eval(p);
        if (!(got == inst.ground_truth))
            throw InvalidProgram("construction-time oracle check failed for instance " + inst.id +
                                 ": program evaluates to " + got.render() + " but ground truth is " +
                                 inst.ground_truth.render());
    }
}

inline std::vector<BigInt> random_inits(Rng& rng, int var_count, std::int64_t lo, std::int64_t hi) {
    std::vector<BigInt> inits;
    inits.reserve(static_cast<std::size_t>(var_count));
    for (int i = 0; i < var_count; ++i) inits.emplace_back(static_cast<long>(rng.uniform(lo, hi)));
    return inits;
}

inline OpKind kind_for_class(InstructionClass cls, Rng& rng) {
    switch (cls) {
    case InstructionClass::AddSub: return rng.chance(0.5) ? OpKind::AddAssign : OpKind::SubAssign;
    case InstructionClass::Mov: return OpKind::Mov;
    case InstructionClass::AndOr: return rng.chance(0.5) ? OpKind::AndAssign : OpKind::OrAssign;
    }
    throw UnknownFamily("unhandled instruction class enum value");
}

inline std::vector<BodyNode> straight_body(Rng& rng, const std::vector<InstructionClass>& classes,
                                           int n_lines, int var_count) {
    std::vector<BodyNode> body;
    body.reserve(static_cast<std::size_t>(n_lines));
    for (int i = 0; i < n_lines; ++i) {
        InstructionClass cls = classes[rng.index(classes.size())];
        OpKind kind = kind_for_class(cls, rng);
        VarId dst{static_cast<int>(rng.index(static_cast<std::size_t>(var_count)))};
        Operand src = rng.chance(0.2)
                          ? Operand::literal(rng.uniform(-10, 10))
                          : Operand::variable(VarId{static_cast<int>(rng.index(static_cast<std::size_t>(var_count)))});
        body.push_back(make_instr(kind, dst, src));
    }
    return body;
}

inline std::vector<int> written_vars(const std::vector<BodyNode>& body) {
    std::set<int> w;
    collect_written(body, w);
    return std::vector<int>(w.begin(), w.end());
}

// Query policy for the straight-line families: uniform over written variables;
// programs too short to have written every variable may query any variable.
inline VarId choose_query(Rng& rng, const Program& p, bool any_when_short) {
    std::vector<int> written = written_vars(p.body);
    if (written.empty() || (any_when_short && static_cast<int>(p.body.size()) < p.var_count))
        return VarId{static_cast<int>(rng.index(static_cast<std::size_t>(p.var_count)))};
    return VarId{written[rng.index(written.size())]};
}

inline BenchmarkInstance finish_ir_instance(FamilyParams params, std::uint64_t seed, Program p,
                                            std::string_view id_extra = {}) {
    validate(p);
    BenchmarkInstance inst;
    inst.family = params.family;
    inst.params = std::move(params);
    inst.seed = seed;
    inst.programs.push_back(std::move(p));
    const Program& prog = inst.programs.front();
    inst.sources.push_back(render(prog));
    if (prog.is_function()) {
        inst.input = Value::integer(inst.params.n_input);
        inst.query.kind = QueryInfo::Kind::FunctionValue;
        inst.query.input_render = phrases::input_render_scalar(BigInt(static_cast<long>(inst.params.n_input)));
        inst.question = phrases::question_function_output(inst.query.input_render);
        inst.ground_truth = eval_function(prog, BigInt(static_cast<long>(inst.params.n_input)));
    } else {
        VarId q = std::get<FinalVarQuery>(prog.query).var;
        inst.query.kind = QueryInfo::Kind::FinalVariable;
        inst.query.var_name = var_name(prog.naming, q);
        inst.question = phrases::question_final_variable(inst.query.var_name);
        inst.ground_truth = eval(prog);
    }
    inst.id = make_instance_id(inst.params, seed, id_extra);
    verify_instance(inst);
    return inst;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Straight-line families
// ---------------------------------------------------------------------------

inline BenchmarkInstance gen_single_class(InstructionClass cls, int n_lines, std::uint64_t seed) {
    if (n_lines < 1) throw InvalidProgram("single-class generation requires n_lines >= 1");
    FamilyParams params;
    params.family = Family::SingleClass;
    params.n_lines = n_lines;
    params.instruction_classes = {cls};
    Rng rng(detail::gen_stream_seed(params, seed));
    Program p;
    p.var_count = params.var_count;
    p.naming = VarNaming::AIndexed;
    p.init_values = detail::random_inits(rng, p.var_count, -10, 10);
    p.body = detail::straight_body(rng, params.instruction_classes, n_lines, p.var_count);
    p.query = FinalVarQuery{detail::choose_query(rng, p, /*any_when_short=*/true)};
    return detail::finish_ir_instance(std::move(params), seed, std::move(p));
}

inline BenchmarkInstance gen_straight_line(int n_lines, std::uint64_t seed) {
    if (n_lines < 1) throw InvalidProgram("straight-line generation requires n_lines >= 1");
    FamilyParams params;
    params.family = Family::StraightLine;
    params.n_lines = n_lines;
    params.instruction_classes = {InstructionClass::AddSub, InstructionClass::Mov};
    Rng rng(detail::gen_stream_seed(params, seed));
    Program p;
    p.var_count = params.var_count;
    p.naming = VarNaming::AIndexed;
    p.init_values = detail::random_inits(rng, p.var_count, -10, 10);
    p.body = detail::straight_body(rng, params.instruction_classes, n_lines, p.var_count);
    p.query = FinalVarQuery{detail::choose_query(rng, p, /*any_when_short=*/false)};
    return detail::finish_ir_instance(std::move(params), seed, std::move(p));
}

// ---------------------------------------------------------------------------
// Critical path
// ---------------------------------------------------------------------------
//
// Direct construction. Variables are partitioned into chain variables (the
// query variable plus up to two helpers), filler variables (written only by
// off-path instructions) and constant variables (never written). Each chain
// instruction reads the previous chain instruction's destination — or only
// literals/constants/fresh state for the first — so the backward slice of the
// query variable is exactly the chain. Fillers write only filler variables and
// therefore can never join the slice.

inline BenchmarkInstance gen_critical_path(int n_lines, int path_len, std::uint64_t seed) {
    if (path_len < 1 || path_len > n_lines)
        throw InvalidProgram("critical-path generation requires 0 < path_len <= n_lines");
    FamilyParams params;
    params.family = Family::CriticalPath;
    params.n_lines = n_lines;
    params.path_len = path_len;
    Rng rng(detail::gen_stream_seed(params, seed));
    const int V = params.var_count;
    if (V < 3) throw InvalidProgram("critical-path generation requires at least 3 variables");

    const int query = static_cast<int>(rng.index(static_cast<std::size_t>(V)));
    std::vector<int> others;
    for (int v = 0; v < V; ++v)
        if (v != query) others.push_back(v);
    rng.shuffle(others);
    const bool need_filler = n_lines > path_len;
    // Keep at least two non-chain variables available when fillers are needed.
    const std::size_t max_extra = std::min<std::size_t>(2, others.size() - (need_filler ? 2 : 0));
    const std::size_t chain_extra = rng.index(max_extra + 1);
    std::vector<int> chain{query};
    for (std::size_t i = 0; i < chain_extra; ++i) chain.push_back(others[i]);
    std::vector<int> rest(others.begin() + static_cast<std::ptrdiff_t>(chain_extra), others.end());
    std::vector<int> fillers, konst;
    if (need_filler) {
        const std::size_t filler_count = 1 + rng.index(rest.size());
        fillers.assign(rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(filler_count));
        konst.assign(rest.begin() + static_cast<std::ptrdiff_t>(filler_count), rest.end());
    } else {
        konst = rest;
    }

    // Carrier sequence through the chain variables, ending at the query.
    std::vector<int> carriers(static_cast<std::size_t>(path_len));
    carriers.back() = query;
    for (int i = path_len - 2; i >= 0; --i) {
        carriers[static_cast<std::size_t>(i)] =
            rng.chance(0.5) ? carriers[static_cast<std::size_t>(i + 1)] : chain[rng.index(chain.size())];
    }

    auto addsub = [&rng] { return rng.chance(0.5) ? OpKind::AddAssign : OpKind::SubAssign; };
    auto safe_src = [&](int self) {
        // Sources that cannot pull extra instructions into the slice.
        if (!konst.empty() && rng.chance(0.35)) return Operand::variable(VarId{konst[rng.index(konst.size())]});
        if (rng.chance(0.25)) return Operand::variable(VarId{self});
        return Operand::literal(rng.uniform(-10, 10));
    };

    std::vector<Instruction> chain_instrs;
    std::set<int> chain_written;
    for (int i = 0; i < path_len; ++i) {
        const int v = carriers[static_cast<std::size_t>(i)];
        Instruction ins;
        if (i == 0) {
            ins = make_instr(addsub(), VarId{v}, safe_src(v));
        } else if (const int prev = carriers[static_cast<std::size_t>(i - 1)]; v == prev) {
            ins = make_instr(addsub(), VarId{v}, safe_src(v));
        } else if (!chain_written.count(v) && rng.chance(0.5)) {
            // Compound onto a fresh variable also reads its (initial) value
            // without adding an instruction to the slice.
            ins = make_instr(addsub(), VarId{v}, Operand::variable(VarId{prev}));
        } else {
            ins = make_instr(OpKind::Mov, VarId{v}, Operand::variable(VarId{prev}));
        }
        chain_written.insert(v);
        chain_instrs.push_back(ins);
    }

    std::vector<Instruction> filler_instrs;
    for (int i = 0; i < n_lines - path_len; ++i) {
        OpKind kind = rng.chance(0.3) ? OpKind::Mov : addsub();
        VarId dst{fillers[rng.index(fillers.size())]};
        Operand src = rng.chance(0.2)
                          ? Operand::literal(rng.uniform(-10, 10))
                          : Operand::variable(VarId{static_cast<int>(rng.index(static_cast<std::size_t>(V)))});
        filler_instrs.push_back(make_instr(kind, dst, src));
    }

    std::vector<int> slots(static_cast<std::size_t>(n_lines), 0);
    for (int i = 0; i < path_len; ++i) slots[static_cast<std::size_t>(i)] = 1;
    rng.shuffle(slots);

    Program p;
    p.var_count = V;
    p.naming = VarNaming::AIndexed;
    p.init_values = detail::random_inits(rng, V, -10, 10);
    std::size_t ci = 0, fi = 0;
    for (int is_chain : slots)
        p.body.push_back(is_chain ? chain_instrs[ci++] : filler_instrs[fi++]);
    p.query = FinalVarQuery{VarId{query}};

    BenchmarkInstance inst = detail::finish_ir_instance(std::move(params), seed, std::move(p));
    // The construction guarantees slice cardinality and slice-only agreement;
    // verify both anyway so a construction bug cannot ship a bad instance.
    const Program& prog = inst.programs.front();
    std::vector<std::size_t> slice = backward_slice(prog, VarId{query});
    if (static_cast<int>(slice.size()) != path_len)
        throw GenerationExhausted("critical-path construction produced a slice of length " +
                                  std::to_string(slice.size()) + ", expected " + std::to_string(path_len));
    if (!(eval(restrict_to(prog, slice)) == inst.ground_truth))
        throw GenerationExhausted("critical-path slice-only evaluation disagrees with full evaluation");
    return inst;
}

// ---------------------------------------------------------------------------
// Approximate computation
// ---------------------------------------------------------------------------

inline BenchmarkInstance gen_approximate(int k, std::uint64_t seed) {
    if (k < 1 || k > 9) throw InvalidProgram("approximate generation requires 1 <= k <= 9");
    FamilyParams params;
    params.family = Family::Approximate;
    params.k = k;
    params.var_count = k;
    Rng rng(detail::gen_stream_seed(params, seed));
    Program p;
    p.var_count = k;
    p.naming = VarNaming::NUnderscore;
    p.init_values.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) p.init_values.emplace_back(static_cast<long>(rng.uniform(-1, 1)));
    std::vector<VarId> all_vars;
    for (int i = 0; i < k; ++i) {
        // Update menu: += 1, += 2, -= 1, -= 2, *= 2, *= -2, *= -1.
        Instruction update;
        switch (rng.index(7)) {
        case 0: update = make_instr(OpKind::AddAssign, VarId{i}, Operand::literal(1)); break;
        case 1: update = make_instr(OpKind::AddAssign, VarId{i}, Operand::literal(2)); break;
        case 2: update = make_instr(OpKind::SubAssign, VarId{i}, Operand::literal(1)); break;
        case 3: update = make_instr(OpKind::SubAssign, VarId{i}, Operand::literal(2)); break;
        case 4: update = make_instr(OpKind::MulAssign, VarId{i}, Operand::literal(2)); break;
        case 5: update = make_instr(OpKind::MulAssign, VarId{i}, Operand::literal(-2)); break;
        default: update = make_instr(OpKind::MulAssign, VarId{i}, Operand::literal(-1)); break;
        }
        p.body.push_back(LoopBlock{LoopCount::input_n(), {update}});
        all_vars.push_back(VarId{i});
    }
    p.query = FunctionQuery{all_vars, /*as_list=*/true};
    // Each loop must write exactly its own variable (syntactic disjointness).
    for (std::size_t i = 0; i < p.body.size(); ++i) {
        std::set<int> w;
        detail::collect_written(std::get<LoopBlock>(p.body[i]).body, w);
        if (w != std::set<int>{static_cast<int>(i)})
            throw InvalidProgram("approximate loops must write disjoint variables");
    }
    return detail::finish_ir_instance(std::move(params), seed, std::move(p));
}

// ---------------------------------------------------------------------------
// Fault-tolerant redundancy
// ---------------------------------------------------------------------------

namespace detail {

// Renames variables by a permutation that fixes the query variable, so the
// question text stays valid for every copy.
inline Program alpha_rename(const Program& p, Rng& rng) {
    const int q = std::get<FinalVarQuery>(p.query).var.index;
    std::vector<int> others;
    for (int v = 0; v < p.var_count; ++v)
        if (v != q) others.push_back(v);
    std::vector<int> shuffled = others;
    rng.shuffle(shuffled);
    std::vector<int> perm(static_cast<std::size_t>(p.var_count));
    perm[static_cast<std::size_t>(q)] = q;
    for (std::size_t i = 0; i < others.size(); ++i)
        perm[static_cast<std::size_t>(others[i])] = shuffled[i];

    Program out = p;
    for (int v = 0; v < p.var_count; ++v)
        out.init_values[static_cast<std::size_t>(perm[static_cast<std::size_t>(v)])] =
            p.init_values[static_cast<std::size_t>(v)];
    for (auto& node : out.body) {
        auto& ins = std::get<Instruction>(node);
        ins.dst = VarId{perm[static_cast<std::size_t>(ins.dst.index)]};
        if (ins.src.is_var()) ins.src = Operand::variable(VarId{perm[static_cast<std::size_t>(ins.src.var().index)]});
    }
    return out;
}

inline bool instructions_independent(const Instruction& a, const Instruction& b) {
    auto reads = [](const Instruction& ins) {
        std::set<int> r;
        for (int v : reads_of(ins)) r.insert(v);
        return r;
    };
    std::set<int> ra = reads(a), rb = reads(b);
    if (rb.count(a.dst.index) || ra.count(b.dst.index)) return false;
    return a.dst.index != b.dst.index;
}

inline Program swap_adjacent_independent(const Program& p, Rng& rng) {
    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i + 1 < p.body.size(); ++i) {
        if (instructions_independent(std::get<Instruction>(p.body[i]), std::get<Instruction>(p.body[i + 1])))
            candidates.push_back(i);
    }
    if (candidates.empty()) return p;
    Program out = p;
    const std::size_t i = candidates[rng.index(candidates.size())];
    std::swap(out.body[i], out.body[i + 1]);
    return out;
}

inline Program insert_self_assignment(const Program& p, Rng& rng) {
    Program out = p;
    const VarId v{static_cast<int>(rng.index(static_cast<std::size_t>(p.var_count)))};
    const std::size_t pos = rng.index(out.body.size() + 1);
    out.body.insert(out.body.begin() + static_cast<std::ptrdiff_t>(pos),
                    make_instr(OpKind::Mov, v, Operand::variable(v)));
    return out;
}

}  // namespace detail

inline BenchmarkInstance gen_redundant(std::uint64_t base_seed, int m) {
    if (m < 2) throw InvalidProgram("redundant generation requires m >= 2 copies");
    FamilyParams params;
    params.family = Family::Redundant;
    params.m = m;
    params.n_lines = 10;
    Rng rng(detail::gen_stream_seed(params, base_seed));

    Program base;
    base.var_count = params.var_count;
    base.naming = VarNaming::AIndexed;
    base.init_values = detail::random_inits(rng, base.var_count, -10, 10);
    base.body = detail::straight_body(rng, {InstructionClass::AddSub, InstructionClass::Mov},
                                      params.n_lines, base.var_count);
    base.query = FinalVarQuery{detail::choose_query(rng, base, /*any_when_short=*/false)};
    validate(base);

    std::vector<Program> variants{base};
    std::set<std::string> seen{render(base).text};
    int attempts = 0;
    while (static_cast<int>(variants.size()) < m) {
        if (++attempts > 1000)
            throw GenerationExhausted("could not derive " + std::to_string(m) +
                                      " textually distinct equivalent programs");
        Program candidate = base;
        const int n_transforms = 1 + static_cast<int>(rng.index(3));
        for (int t = 0; t < n_transforms; ++t) {
            switch (rng.index(3)) {
            case 0: candidate = detail::alpha_rename(candidate, rng); break;
            case 1: candidate = detail::swap_adjacent_independent(candidate, rng); break;
            default: candidate = detail::insert_self_assignment(candidate, rng); break;
            }
        }
        validate(candidate);
        std::string text = render(candidate).text;
        if (seen.insert(text).second) variants.push_back(std::move(candidate));
    }

    BenchmarkInstance inst;
    inst.family = params.family;
    inst.seed = base_seed;
    inst.ground_truth = eval(base);
    const VarId q = std::get<FinalVarQuery>(base.query).var;
    inst.query.kind = QueryInfo::Kind::FinalVariable;
    inst.query.var_name = var_name(base.naming, q);
    inst.question = phrases::question_final_variable(inst.query.var_name);
    for (Program& v : variants) {
        inst.sources.push_back(render(v));
        inst.programs.push_back(std::move(v));
    }
    inst.params = std::move(params);
    inst.id = detail::make_instance_id(inst.params, base_seed);
    detail::verify_instance(inst);  // every copy must agree with the ground truth
    return inst;
}

// ---------------------------------------------------------------------------
// Nested loops
// ---------------------------------------------------------------------------

namespace detail {

inline Instruction nested_add(Rng& rng) {
    const bool plus = rng.chance(0.5);
    const std::int64_t c = rng.chance(0.5) ? 1 : 2;
    return make_instr(plus ? OpKind::AddAssign : OpKind::SubAssign, VarId{0}, Operand::literal(c));
}

inline Instruction nested_negate() {
    return make_instr(OpKind::MulAssign, VarId{0}, Operand::literal(-1));
}

inline Instruction nested_any_update(Rng& rng) {
    switch (rng.index(5)) {
    case 0: return make_instr(OpKind::AddAssign, VarId{0}, Operand::literal(1));
    case 1: return make_instr(OpKind::AddAssign, VarId{0}, Operand::literal(2));
    case 2: return make_instr(OpKind::SubAssign, VarId{0}, Operand::literal(1));
    case 3: return make_instr(OpKind::SubAssign, VarId{0}, Operand::literal(2));
    default: return nested_negate();
    }
}

// Instruction mix for one loop level. In bounded mode the level is biased
// towards bodies whose ten-iteration net effect is the identity (a sign flip
// makes the even iteration count cancel; paired +c/-c cancels directly), with
// an occasional small net drift; the caller still verifies the final bound.
inline std::vector<BodyNode> nested_level_body(Rng& rng, std::optional<LoopBlock> inner, bool biased) {
    std::vector<Instruction> instrs;
    if (!biased) {
        const int count = inner ? static_cast<int>(rng.index(3)) : 1 + static_cast<int>(rng.index(3));
        for (int i = 0; i < count; ++i) instrs.push_back(nested_any_update(rng));
    } else {
        const double roll = static_cast<double>(rng.index(100)) / 100.0;
        if (roll < 0.45) {  // sign-flip level: net identity over an even iteration count
            if (rng.chance(0.5)) instrs.push_back(nested_add(rng));
            instrs.push_back(nested_negate());
            rng.shuffle(instrs);
        } else if (roll < 0.80) {  // balanced level: adds cancel exactly
            if (!inner || rng.chance(0.6)) {
                const std::int64_t c = rng.chance(0.5) ? 1 : 2;
                const bool plus_first = rng.chance(0.5);
                instrs.push_back(make_instr(plus_first ? OpKind::AddAssign : OpKind::SubAssign,
                                            VarId{0}, Operand::literal(c)));
                instrs.push_back(make_instr(plus_first ? OpKind::SubAssign : OpKind::AddAssign,
                                            VarId{0}, Operand::literal(c)));
            }
        } else {  // drifting level: small nonzero net, survives only near the top
            instrs.push_back(nested_add(rng));
        }
        if (!inner && instrs.empty()) instrs.push_back(nested_negate());
    }

    std::vector<BodyNode> body;
    const std::size_t split = inner ? rng.index(instrs.size() + 1) : instrs.size();
    for (std::size_t i = 0; i < split; ++i) body.push_back(instrs[i]);
    if (inner) body.push_back(std::move(*inner));
    for (std::size_t i = split; i < instrs.size(); ++i) body.push_back(instrs[i]);
    return body;
}

}  // namespace detail

inline BenchmarkInstance gen_nested(int k, std::uint64_t seed, bool enforce_bound = true) {
    if (k < 1 || k > 9) throw InvalidProgram("nested generation requires 1 <= k <= 9");
    FamilyParams params;
    params.family = Family::NestedLoops;
    params.k = k;
    params.var_count = 1;
    params.enforce_bound = enforce_bound;
    Rng rng(detail::gen_stream_seed(params, seed));
    const BigInt bound = std::min<std::int64_t>(std::int64_t(1) << k, 1024);

    constexpr int kAttemptBudget = 10'000;
    for (int attempt = 0; attempt < kAttemptBudget; ++attempt) {
        Program p;
        p.var_count = 1;
        p.naming = VarNaming::PlainA;
        p.init_values = {BigInt(static_cast<long>(rng.uniform(-2, 2)))};

        std::vector<BodyNode> level = detail::nested_level_body(rng, std::nullopt, enforce_bound);
        for (int depth = k; depth >= 1; --depth) {
            LoopBlock loop{LoopCount::input_n(), std::move(level)};
            if (depth == 1) {
                level.clear();
                const int direct = static_cast<int>(rng.index(3));  // 0-2 unamplified adds
                std::vector<Instruction> extra;
                for (int i = 0; i < direct; ++i) extra.push_back(detail::nested_add(rng));
                const std::size_t split = rng.index(extra.size() + 1);
                for (std::size_t i = 0; i < split; ++i) level.push_back(extra[i]);
                level.push_back(std::move(loop));
                for (std::size_t i = split; i < extra.size(); ++i) level.push_back(extra[i]);
            } else {
                level = detail::nested_level_body(rng, std::move(loop), enforce_bound);
            }
        }
        p.body = std::move(level);
        p.query = FunctionQuery{{VarId{0}}, /*as_list=*/false};
        validate(p);

        Value v = eval_function(p, BigInt(static_cast<long>(params.n_input)));
        if (enforce_bound && abs(v.as_int()) > bound) continue;
        return detail::finish_ir_instance(std::move(params), seed, std::move(p));
    }
    throw GenerationExhausted("no depth-" + std::to_string(k) +
                              " nested program satisfied the value bound within " +
                              std::to_string(kAttemptBudget) + " attempts");
}

// ---------------------------------------------------------------------------
// Sorting corpus
// ---------------------------------------------------------------------------

inline BenchmarkInstance gen_sorting_with_input(std::string_view algorithm, SortStyle style,
                                                std::vector<BigInt> input, std::uint64_t seed) {
    const std::string corpus_id =
        "sorting_" + std::string(algorithm) + "_" + std::string(sort_style_name(style));
    const CorpusEntry& entry = corpus_entry(corpus_id);
    if (static_cast<int>(input.size()) < entry.min_input_len)
        throw InvalidProgram("input of length " + std::to_string(input.size()) + " is below the '" +
                             corpus_id + "' template's minimum of " +
                             std::to_string(entry.min_input_len));
    FamilyParams params;
    params.family = Family::Sorting;
    params.algorithm = std::string(algorithm);
    params.style = style;
    params.input_len = static_cast<int>(input.size());

    BenchmarkInstance inst;
    inst.family = params.family;
    inst.seed = seed;
    inst.sources.push_back(SourceText{std::string(entry.text), "python3"});
    Value in = Value::list(std::move(input));
    inst.ground_truth = reference_value(corpus_id, in);
    inst.query.kind = QueryInfo::Kind::SortedVector;
    inst.query.input_render = in.render();
    inst.question = phrases::question_function_output("the input vector " + inst.query.input_render);
    inst.input = std::move(in);
    inst.params = std::move(params);
    inst.id = detail::make_instance_id(inst.params, seed, inst.query.input_render);
    return inst;
}

inline BenchmarkInstance gen_sorting(std::string_view algorithm, SortStyle style, int input_len,
                                     std::uint64_t seed) {
    if (input_len != 10 && input_len != 20 && input_len != 30 && input_len != 40)
        throw InvalidProgram("sorting input length must be one of {10, 20, 30, 40}");
    FamilyParams probe;
    probe.family = Family::Sorting;
    probe.algorithm = std::string(algorithm);
    probe.style = style;
    probe.input_len = input_len;
    Rng rng(detail::gen_stream_seed(probe, seed));
    std::vector<BigInt> input;
    input.reserve(static_cast<std::size_t>(input_len));
    for (int i = 0; i < input_len; ++i) input.emplace_back(static_cast<long>(rng.uniform(0, 100)));
    return gen_sorting_with_input(algorithm, style, std::move(input), seed);
}

// ---------------------------------------------------------------------------
// Classic/variant pairs
// ---------------------------------------------------------------------------

namespace detail {

inline std::string anonymize_function(std::string_view text, std::string_view original,
                                      char letter) {
    // Every corpus classic starts with "def <single letter>(". Replacing that
    // one character renames the function; none of the classics are recursive.
    const std::string needle = "def " + std::string(original) + "(";
    const std::size_t pos = std::string_view(text).find(needle);
    if (pos == std::string_view::npos)
        throw UnknownTemplate("cannot anonymize: definition of '" + std::string(original) +
                              "' not found");
    std::string out(text);
    out[pos + 4] = letter;
    return out;
}

inline BenchmarkInstance make_variant_member(std::string_view corpus_id, const Value& input,
                                             bool anonymize, char letter, std::uint64_t seed) {
    const CorpusEntry& entry = corpus_entry(corpus_id);
    FamilyParams params;
    params.family = Family::VariantPair;
    params.algorithm = std::string(corpus_id);
    params.anonymize = anonymize;
    if (input.is_int() && input.as_int().fits_slong_p())
        params.n_input = static_cast<std::int64_t>(input.as_int().get_si());

    BenchmarkInstance inst;
    inst.family = params.family;
    inst.seed = seed;
    std::string text = anonymize ? anonymize_function(entry.text, entry.function_name, letter)
                                 : std::string(entry.text);
    inst.sources.push_back(SourceText{std::move(text), "python3"});
    inst.ground_truth = reference_value(corpus_id, input);
    inst.query.kind = input.is_list() ? QueryInfo::Kind::SortedVector : QueryInfo::Kind::FunctionValue;
    inst.query.input_render = input.is_list() ? input.render() : phrases::input_render_scalar(input.as_int());
    inst.question = phrases::question_function_output(
        input.is_list() ? "the input vector " + inst.query.input_render : inst.query.input_render);
    inst.input = input;
    inst.params = std::move(params);
    inst.id = detail::make_instance_id(inst.params, seed, inst.query.input_render);
    return inst;
}

}  // namespace detail

inline std::pair<BenchmarkInstance, BenchmarkInstance> gen_variant_pair(std::string_view pair_name,
                                                                        const Value& input,
                                                                        bool anonymize,
                                                                        std::uint64_t seed = 0) {
    for (const VariantPairIds& pair : variant_pairs()) {
        if (pair.pair_name != pair_name) continue;
        // Fresh, distinct single-letter names chosen deterministically per pair.
        static constexpr char kLetters[] = {'h', 'p', 'q', 'r', 's', 't', 'u', 'v', 'w'};
        HashWriter w;
        w.add("anonymize").add(pair_name).add_u64(seed);
        Rng letter_rng(w.value());
        const std::size_t first = letter_rng.index(sizeof(kLetters));
        const std::size_t second = (first + 1 + letter_rng.index(sizeof(kLetters) - 1)) % sizeof(kLetters);
        return {detail::make_variant_member(pair.classic_id, input, anonymize, kLetters[first], seed),
                detail::make_variant_member(pair.variant_id, input, anonymize, kLetters[second], seed)};
    }
    throw UnknownFamily("no classic/variant pair named '" + std::string(pair_name) + "'");
}

// ---------------------------------------------------------------------------
// Good exchange
// ---------------------------------------------------------------------------

namespace detail {

struct ExchangeEvent {
    enum class Kind { Gain, Loss, Set, Give };
    Kind kind = Kind::Gain;
    int agent = 0;  // acting agent (the giver for Give)
    std::int64_t qty = 0;
};

struct ExchangeScript {
    std::array<std::int64_t, 2> init{};
    std::array<std::int64_t, 2> final_counts{};
    std::vector<ExchangeEvent> events;
    int query_agent = 0;
};

// The event sequence is shared by both renderings: its stream seed must not
// depend on the mode, only on the interaction count and caller seed.
inline ExchangeScript make_exchange_script(int n_interactions, std::uint64_t seed) {
    HashWriter w;
    w.add("good_exchange_events").add_i64(n_interactions).add_u64(seed);
    Rng rng(w.value());
    ExchangeScript script;
    script.init = {rng.uniform(0, 20), rng.uniform(0, 20)};
    std::array<std::int64_t, 2> count = script.init;

    int lines = 0;  // synthetic rendering cost: Give takes two lines
    while (lines < n_interactions) {
        ExchangeEvent ev;
        const bool give_fits = n_interactions - lines >= 2;
        switch (rng.index(give_fits ? 4 : 3)) {
        case 0:
            ev.kind = ExchangeEvent::Kind::Gain;
            ev.agent = static_cast<int>(rng.index(2));
            ev.qty = rng.uniform(1, 5);
            break;
        case 1: {
            ev.agent = static_cast<int>(rng.index(2));
            if (count[static_cast<std::size_t>(ev.agent)] >= 1) {
                ev.kind = ExchangeEvent::Kind::Loss;
                ev.qty = rng.uniform(1, std::min<std::int64_t>(5, count[static_cast<std::size_t>(ev.agent)]));
            } else {  // nothing to lose; gain instead
                ev.kind = ExchangeEvent::Kind::Gain;
                ev.qty = rng.uniform(1, 5);
            }
            break;
        }
        case 2:
            ev.kind = ExchangeEvent::Kind::Set;
            ev.agent = static_cast<int>(rng.index(2));
            ev.qty = rng.uniform(0, 20);
            break;
        default: {
            ev.agent = static_cast<int>(rng.index(2));
            if (count[static_cast<std::size_t>(ev.agent)] >= 1) {
                ev.kind = ExchangeEvent::Kind::Give;
                ev.qty = rng.uniform(1, std::min<std::int64_t>(5, count[static_cast<std::size_t>(ev.agent)]));
            } else {
                ev.kind = ExchangeEvent::Kind::Gain;
                ev.qty = rng.uniform(1, 5);
            }
            break;
        }
        }
        switch (ev.kind) {
        case ExchangeEvent::Kind::Gain: count[static_cast<std::size_t>(ev.agent)] += ev.qty; lines += 1; break;
        case ExchangeEvent::Kind::Loss: count[static_cast<std::size_t>(ev.agent)] -= ev.qty; lines += 1; break;
        case ExchangeEvent::Kind::Set: count[static_cast<std::size_t>(ev.agent)] = ev.qty; lines += 1; break;
        case ExchangeEvent::Kind::Give:
            count[static_cast<std::size_t>(ev.agent)] -= ev.qty;
            count[static_cast<std::size_t>(1 - ev.agent)] += ev.qty;
            lines += 2;
            break;
        }
        script.events.push_back(ev);
    }
    script.final_counts = count;
    script.query_agent = static_cast<int>(rng.index(2));
    return script;
}

inline const std::array<std::string_view, 2>& exchange_agent_names() {
    static const std::array<std::string_view, 2> names = {"Alice", "Bob"};
    return names;
}

inline std::string exchange_good(std::int64_t qty) { return qty == 1 ? "apple" : "apples"; }

}  // namespace detail

inline BenchmarkInstance gen_good_exchange(int n_interactions, ExchangeMode mode,
                                           std::uint64_t seed) {
    if (n_interactions < 1) throw InvalidProgram("good-exchange generation requires n_interactions >= 1");
    FamilyParams params;
    params.family = Family::GoodExchange;
    params.n_lines = n_interactions;
    params.var_count = 2;
    params.mode = mode;
    detail::ExchangeScript script = detail::make_exchange_script(n_interactions, seed);
    const auto& names = detail::exchange_agent_names();

    // The synthetic program is always built: it is the instance itself in
    // synthetic mode and the construction-time cross-check in naturalistic mode.
    Program p;
    p.var_count = 2;
    p.naming = VarNaming::AIndexed;
    p.init_values = {BigInt(static_cast<long>(script.init[0])), BigInt(static_cast<long>(script.init[1]))};
    for (const auto& ev : script.events) {
        const VarId actor{ev.agent};
        switch (ev.kind) {
        case detail::ExchangeEvent::Kind::Gain:
            p.body.push_back(make_instr(OpKind::AddAssign, actor, Operand::literal(ev.qty)));
            break;
        case detail::ExchangeEvent::Kind::Loss:
            p.body.push_back(make_instr(OpKind::SubAssign, actor, Operand::literal(ev.qty)));
            break;
        case detail::ExchangeEvent::Kind::Set:
            p.body.push_back(make_instr(OpKind::Mov, actor, Operand::literal(ev.qty)));
            break;
        case detail::ExchangeEvent::Kind::Give:
            p.body.push_back(make_instr(OpKind::SubAssign, actor, Operand::literal(ev.qty)));
            p.body.push_back(make_instr(OpKind::AddAssign, VarId{1 - ev.agent}, Operand::literal(ev.qty)));
            break;
        }
    }
    p.query = FinalVarQuery{VarId{script.query_agent}};
    validate(p);
    if (static_cast<int>(p.body.size()) != n_interactions)
        throw InvalidProgram("good-exchange synthetic rendering must have exactly one line per interaction unit");

    BenchmarkInstance inst;
    inst.family = params.family;
    inst.seed = seed;
    inst.ground_truth = eval(p);
    if (!(inst.ground_truth == Value::integer(BigInt(static_cast<long>(script.final_counts[static_cast<std::size_t>(script.query_agent)])))))
        throw InvalidProgram("good-exchange event simulation disagrees with the program evaluation");

    if (mode == ExchangeMode::Synthetic) {
        inst.sources.push_back(render(p));
        inst.programs.push_back(std::move(p));
        inst.query.kind = QueryInfo::Kind::FinalVariable;
        inst.query.var_name = var_name(VarNaming::AIndexed, VarId{script.query_agent});
        inst.question = phrases::question_final_variable(inst.query.var_name);
    } else {
        std::string text;
        for (int a = 0; a < 2; ++a) {
            text += std::string(names[static_cast<std::size_t>(a)]) + " starts with " +
                    std::to_string(script.init[static_cast<std::size_t>(a)]) + " " +
                    detail::exchange_good(script.init[static_cast<std::size_t>(a)]) + ".\n";
        }
        for (const auto& ev : script.events) {
            const std::string actor(names[static_cast<std::size_t>(ev.agent)]);
            const std::string other(names[static_cast<std::size_t>(1 - ev.agent)]);
            const std::string qty = std::to_string(ev.qty) + " " + detail::exchange_good(ev.qty);
            switch (ev.kind) {
            case detail::ExchangeEvent::Kind::Gain: text += actor + " picks " + qty + ".\n"; break;
            case detail::ExchangeEvent::Kind::Loss: text += actor + " loses " + qty + ".\n"; break;
            case detail::ExchangeEvent::Kind::Set:
                text += actor + " now has exactly " + qty + ".\n";
                break;
            case detail::ExchangeEvent::Kind::Give:
                text += actor + " gives " + other + " " + qty + ".\n";
                break;
            }
        }
        text.pop_back();  // drop the trailing newline, matching program renderings
        inst.sources.push_back(SourceText{std::move(text), "text"});
        inst.query.kind = QueryInfo::Kind::AgentCount;
        inst.query.agent = std::string(names[static_cast<std::size_t>(script.query_agent)]);
        inst.query.good = "apples";
        inst.question = phrases::question_good_exchange(inst.query.agent, inst.query.good);
    }
    inst.params = std::move(params);
    inst.id = detail::make_instance_id(inst.params, seed);
    detail::verify_instance(inst);
    return inst;
}

// ---------------------------------------------------------------------------
// Manifest serialization
// ---------------------------------------------------------------------------

inline nlohmann::json instance_to_json(const BenchmarkInstance& inst,
                                       const std::vector<std::string>& source_paths) {
    nlohmann::json j;
    j["id"] = inst.id;
    j["family"] = std::string(family_name(inst.family));
    j["params"] = inst.params.to_json();
    j["seed"] = inst.seed;
    j["sources"] = source_paths;
    j["question"] = inst.question;
    j["ground_truth"] = inst.ground_truth.to_json();
    if (inst.input) j["input"] = inst.input->to_json();
    return j;
}

// Writes sources as individual files plus a manifest.jsonl (one instance per
// line) into the directory; returns the manifest path.
inline std::filesystem::path write_manifest(const std::vector<BenchmarkInstance>& instances,
                                            const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    const std::filesystem::path manifest_path = dir / "manifest.jsonl";
    std::ofstream manifest(manifest_path, std::ios::binary | std::ios::trunc);
    if (!manifest) throw ConfigError("cannot open " + manifest_path.string() + " for writing");
    for (const BenchmarkInstance& inst : instances) {
        const std::string stem = std::string(family_name(inst.family)) + "_" +
                                 std::to_string(inst.seed) + "_" + inst.params.file_tag() + "_" +
                                 inst.id.substr(0, 8);
        std::vector<std::string> paths;
        for (std::size_t i = 0; i < inst.sources.size(); ++i) {
            std::string name = stem;
            if (inst.sources.size() > 1) name += "_v" + std::to_string(i);
            name += inst.sources[i].language_tag == "python3" ? ".py" : ".txt";
            const std::filesystem::path file = dir / name;
            std::ofstream out(file, std::ios::binary | std::ios::trunc);
            if (!out) throw ConfigError("cannot open " + file.string() + " for writing");
            out << inst.sources[i].text;
            paths.push_back(name);
        }
        manifest << instance_to_json(inst, paths).dump() << "\n";
    }
    return manifest_path;
}

inline std::vector<nlohmann::json> read_manifest(const std::filesystem::path& manifest_path) {
    std::ifstream in(manifest_path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + manifest_path.string() + " for reading");
    std::vector<nlohmann::json> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        rows.push_back(nlohmann::json::parse(line));
    }
    return rows;
}

}  // namespace codesim
