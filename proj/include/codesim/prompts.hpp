#pragma once

// Prompt construction for every family × technique combination. Templates are
// reproduced byte-for-byte from the benchmark's fixed assets; everything here
// is a pure function of (instance, technique).

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "codesim/errors.hpp"
#include "codesim/generators.hpp"
#include "codesim/hashing.hpp"
#include "codesim/oracle.hpp"
#include "codesim/phrases.hpp"
#include "codesim/prompt_assets.hpp"

namespace codesim {

struct Technique {
    enum class Kind { Base, CoT, KShot, CoSm, SelfConsistency };
    enum class KShotMode { Instructional, Examples };

    Kind kind = Kind::CoT;
    KShotMode kshot_mode = KShotMode::Instructional;
    int kshot_k = 1;               // examples mode: number of worked illustrations
    int votes = 3;                 // SelfConsistency only
    Kind inner = Kind::CoT;        // SelfConsistency: the wrapped technique
    KShotMode inner_kshot_mode = KShotMode::Instructional;
    int inner_kshot_k = 1;

    static Technique base() { return Technique{Kind::Base}; }
    static Technique cot() { return Technique{Kind::CoT}; }
    static Technique cosm() { return Technique{Kind::CoSm}; }
    static Technique kshot(KShotMode mode, int k = 1) {
        if (k < 1 || k > 3) throw UnsupportedCombination("k-shot illustration count must be 1, 2 or 3");
        Technique t{Kind::KShot};
        t.kshot_mode = mode;
        t.kshot_k = k;
        return t;
    }
    static Technique self_consistency(const Technique& wrapped, int votes = 3) {
        if (wrapped.kind == Kind::SelfConsistency)
            throw UnsupportedCombination("self-consistency cannot wrap itself");
        if (votes < 2) throw UnsupportedCombination("self-consistency requires at least 2 votes");
        Technique t{Kind::SelfConsistency};
        t.votes = votes;
        t.inner = wrapped.kind;
        t.inner_kshot_mode = wrapped.kshot_mode;
        t.inner_kshot_k = wrapped.kshot_k;
        return t;
    }

    Technique unwrapped() const {
        Technique t{inner};
        t.kshot_mode = inner_kshot_mode;
        t.kshot_k = inner_kshot_k;
        return t;
    }

  private:
    explicit Technique(Kind k) : kind(k) {}

  public:
    Technique() = default;
};

inline std::string technique_name(const Technique& t) {
    switch (t.kind) {
    case Technique::Kind::Base: return "base";
    case Technique::Kind::CoT: return "cot";
    case Technique::Kind::CoSm: return "cosm";
    case Technique::Kind::KShot:
        return t.kshot_mode == Technique::KShotMode::Instructional
                   ? "kshot_instructional"
                   : "kshot_examples" + std::to_string(t.kshot_k);
    case Technique::Kind::SelfConsistency:
        return "sc" + std::to_string(t.votes) + "_" + technique_name(t.unwrapped());
    }
    throw UnsupportedCombination("unhandled technique enum value");
}

inline Technique technique_from_name(std::string_view name) {
    if (name == "base") return Technique::base();
    if (name == "cot") return Technique::cot();
    if (name == "cosm") return Technique::cosm();
    if (name == "kshot_instructional") return Technique::kshot(Technique::KShotMode::Instructional);
    if (name.rfind("kshot_examples", 0) == 0 && name.size() == 15)
        return Technique::kshot(Technique::KShotMode::Examples, name.back() - '0');
    if (name.rfind("sc", 0) == 0) {
        const std::size_t underscore = name.find('_');
        if (underscore != std::string_view::npos && underscore > 2) {
            const int votes = std::stoi(std::string(name.substr(2, underscore - 2)));
            return Technique::self_consistency(technique_from_name(name.substr(underscore + 1)), votes);
        }
    }
    throw UnsupportedCombination("no prompting technique named '" + std::string(name) + "'");
}

enum class AnswerContract { ResultTags, BareValue };

inline std::string contract_name(AnswerContract c) {
    return c == AnswerContract::ResultTags ? "result_tags" : "bare_value";
}

inline AnswerContract contract_from_name(const std::string& name) {
    if (name == "result_tags") return AnswerContract::ResultTags;
    if (name == "bare_value") return AnswerContract::BareValue;
    throw UnsupportedCombination("unknown answer contract: " + name);
}

struct PromptBundle {
    std::optional<std::string> system_text;  // unset: the benchmark uses none
    std::string user_text;
    AnswerContract contract = AnswerContract::ResultTags;
    Technique technique;    // the effective single-call technique (SC unwrapped)
    std::string instance_id;
    std::string directive;  // recorded so phrasing ablations stay auditable
    double temperature = 0.0;
    int vote_index = 0;     // position within a self-consistency ensemble
};

namespace detail {

inline std::string replace_all_placeholder(std::string text, std::string_view placeholder,
                                           const std::string& value) {
    std::size_t pos = 0;
    while ((pos = text.find(placeholder, pos)) != std::string::npos) {
        text.replace(pos, placeholder.size(), value);
        pos += value.size();
    }
    return text;
}

inline std::string joined_sources(const BenchmarkInstance& inst) {
    std::string out;
    for (std::size_t i = 0; i < inst.sources.size(); ++i) {
        if (i) out += "\n\n";
        out += inst.sources[i].text;
    }
    return out;
}

inline std::string directive_for(const BenchmarkInstance& inst) {
    switch (inst.family) {
    case Family::Redundant:
        return "Simulate these Python programs and demonstrate they yield the same result.";
    case Family::Approximate:
    case Family::NestedLoops:
    case Family::Sorting:
    case Family::VariantPair:
        return "Simulate this Python function.";
    case Family::GoodExchange:
        if (inst.params.mode == ExchangeMode::Naturalistic)
            return "Consider the following exchange of goods.";
        return "Simulate this Python code.";
    default:
        return "Simulate this Python code.";
    }
}

inline std::string split_layout(const std::string& directive, const std::string& code,
                                const std::string& question) {
    std::string text = prompt_assets::k_split_layout_template;
    text = replace_all_placeholder(std::move(text), "@directive@", directive);
    text = replace_all_placeholder(std::move(text), "@code@", code);
    text = replace_all_placeholder(std::move(text), "@question@", question);
    return text;
}

// Rewrites the chain-of-thought question into its direct form by dropping the
// step-by-step preamble: "Think step by step and then reply with X." -> "Reply with X."
inline std::string direct_question(const std::string& question) {
    constexpr std::string_view prefix = "Think step by step and then reply";
    if (question.rfind(prefix, 0) != 0)
        throw UnsupportedCombination("question sentence lacks the step-by-step preamble: " + question);
    return "Reply" + question.substr(prefix.size());
}

inline std::string cosm_input_slot(const BenchmarkInstance& inst) {
    if (!inst.query.input_render.empty()) return inst.query.input_render;
    if (inst.query.kind == QueryInfo::Kind::AgentCount) return inst.query.agent;
    return inst.query.var_name;
}

// A worked program/trace illustration, evaluator-generated so the shown trace
// can never contradict the semantics it teaches.
inline std::string make_example_block(const std::string& instance_id, int shot_index) {
    HashWriter w;
    w.add("kshot_example").add(instance_id).add_i64(shot_index);
    BenchmarkInstance example = gen_straight_line(4, w.value());
    const Program& p = example.programs.front();
    Trace t = trace(p);
    std::string trace_text;
    for (std::size_t i = 0; i < t.entries.size(); ++i) {
        if (i) trace_text += "\n";
        // The evaluator leaves the initial-state entry unnumbered; the shown
        // trace numbers every line, the state line included.
        if (i == 0) trace_text += "1. ";
        trace_text += t.entries[i].text;
    }
    std::string block = prompt_assets::k_example_block_template;
    block = replace_all_placeholder(std::move(block), "@code@", render(p).text);
    block = replace_all_placeholder(std::move(block), "@trace@", trace_text);
    return block;
}

inline PromptBundle single_bundle(const BenchmarkInstance& inst, const Technique& technique) {
    PromptBundle bundle;
    bundle.instance_id = inst.id;
    bundle.technique = technique;
    bundle.directive = directive_for(inst);

    const std::string code = joined_sources(inst);
    const std::string tags = std::string(" ") + prompt_assets::k_tags_sentence;

    switch (technique.kind) {
    case Technique::Kind::Base: {
        if (inst.family == Family::NestedLoops) {
            // The nested-loop base template asks for the bare value.
            std::string text = prompt_assets::k_nested_base_template;
            text = replace_all_placeholder(std::move(text), "@input@", inst.query.input_render);
            text = replace_all_placeholder(std::move(text), "@code@", code);
            bundle.user_text = std::move(text);
            bundle.directive = "Execute this Python function";
            bundle.contract = AnswerContract::BareValue;
        } else {
            bundle.user_text = split_layout(bundle.directive, code, direct_question(inst.question) + tags);
            bundle.contract = AnswerContract::ResultTags;
        }
        break;
    }
    case Technique::Kind::CoT: {
        bundle.user_text = split_layout(bundle.directive, code, inst.question + tags);
        bundle.contract = AnswerContract::ResultTags;
        break;
    }
    case Technique::Kind::KShot: {
        if (inst.family != Family::SingleClass && inst.family != Family::StraightLine &&
            inst.family != Family::CriticalPath)
            throw UnsupportedCombination(
                "k-shot illustrations are defined only for the straight-line program families");
        std::string blocks;
        if (technique.kshot_mode == Technique::KShotMode::Instructional) {
            blocks = prompt_assets::k_instructional_block;
        } else {
            for (int i = 0; i < technique.kshot_k; ++i) {
                if (i) blocks += "\n\n";
                blocks += make_example_block(inst.id, i);
            }
        }
        bundle.user_text =
            blocks + "\n\n" + split_layout(bundle.directive, code, inst.question + tags);
        bundle.contract = AnswerContract::ResultTags;
        break;
    }
    case Technique::Kind::CoSm: {
        std::string text = prompt_assets::k_cosm_template;
        text = replace_all_placeholder(std::move(text), "@code@", code);
        text = replace_all_placeholder(std::move(text), "@input@", cosm_input_slot(inst));
        // Keep the template verbatim and append the answer contract to the
        // final directive line (before the closing quotes).
        const std::string anchor = ".\n\"\"\"";
        const std::size_t pos = text.rfind(anchor);
        if (pos == std::string::npos)
            throw UnsupportedCombination("code-simulation template lost its closing directive");
        text.insert(pos + 1, tags);
        bundle.user_text = std::move(text);
        bundle.directive = "Simulate the above program instruction by instruction.";
        bundle.contract = AnswerContract::ResultTags;
        break;
    }
    case Technique::Kind::SelfConsistency:
        throw UnsupportedCombination("self-consistency is expanded by build(), not single_bundle()");
    }
    return bundle;
}

}  // namespace detail

// Builds the prompt(s) for one instance under one technique. All techniques
// yield a single bundle except self-consistency, which yields `votes`
// identical texts marked for independent sampling at temperature 0.1.
inline std::vector<PromptBundle> build(const BenchmarkInstance& inst, const Technique& technique) {
    if (technique.kind == Technique::Kind::SelfConsistency) {
        PromptBundle proto = detail::single_bundle(inst, technique.unwrapped());
        proto.temperature = 0.1;  // the self-consistency sampling temperature
        std::vector<PromptBundle> bundles;
        bundles.reserve(static_cast<std::size_t>(technique.votes));
        for (int i = 0; i < technique.votes; ++i) {
            PromptBundle b = proto;
            b.vote_index = i;
            bundles.push_back(std::move(b));
        }
        return bundles;
    }
    return {detail::single_bundle(inst, technique)};
}

}  // namespace codesim
