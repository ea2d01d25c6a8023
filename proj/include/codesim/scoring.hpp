#pragma once

// Answer extraction and metrics: parses model completions into values and
// aggregates accuracy, mean absolute error, normalized Levenshtein tuple
// similarity, per-loop error rate, and majority-vote outcomes.

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "codesim/prompts.hpp"
#include "codesim/value.hpp"

namespace codesim {

struct ExtractedAnswer {
    enum class Method { Tags, FallbackLastLiteral, Failed };

    std::optional<Value> value;  // empty when nothing parseable was found
    Method method = Method::Failed;
    std::size_t begin = 0;  // span of the parsed literal within the completion
    std::size_t end = 0;

    bool parsed() const { return value.has_value(); }
};

inline std::string method_name(ExtractedAnswer::Method m) {
    switch (m) {
    case ExtractedAnswer::Method::Tags: return "tags";
    case ExtractedAnswer::Method::FallbackLastLiteral: return "fallback_last_literal";
    case ExtractedAnswer::Method::Failed: return "failed";
    }
    return "failed";
}

inline ExtractedAnswer::Method method_from_name(const std::string& name) {
    if (name == "tags") return ExtractedAnswer::Method::Tags;
    if (name == "fallback_last_literal") return ExtractedAnswer::Method::FallbackLastLiteral;
    if (name == "failed") return ExtractedAnswer::Method::Failed;
    throw std::invalid_argument("unknown extraction method: " + name);
}

inline nlohmann::json extracted_to_json(const ExtractedAnswer& a) {
    nlohmann::json j;
    j["method"] = method_name(a.method);
    j["value"] = a.value ? a.value->to_json() : nlohmann::json(nullptr);
    j["begin"] = a.begin;
    j["end"] = a.end;
    return j;
}

inline ExtractedAnswer extracted_from_json(const nlohmann::json& j) {
    ExtractedAnswer a;
    a.method = method_from_name(j.at("method").get<std::string>());
    if (!j.at("value").is_null()) a.value = Value::from_json(j.at("value"));
    a.begin = j.at("begin").get<std::size_t>();
    a.end = j.at("end").get<std::size_t>();
    return a;
}

namespace detail {

inline bool is_word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}

// Parses a signed integer run starting at `pos`; advances `pos` past it.
inline std::optional<BigInt> scan_integer(std::string_view text, std::size_t& pos) {
    std::size_t start = pos;
    if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) ++pos;
    std::size_t digits = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == digits) {
        pos = start;
        return std::nullopt;
    }
    return BigInt(std::string(text.substr(start, pos - start)));
}

// Parses a bracketed integer list `[a, b, ...]` (or `[]`) starting at the '['
// at `pos`; advances `pos` past the closing bracket on success.
inline std::optional<std::vector<BigInt>> scan_list(std::string_view text, std::size_t& pos) {
    std::size_t cursor = pos;
    auto skip_ws = [&] {
        while (cursor < text.size() && (text[cursor] == ' ' || text[cursor] == '\t')) ++cursor;
    };
    if (cursor >= text.size() || text[cursor] != '[') return std::nullopt;
    ++cursor;
    skip_ws();
    std::vector<BigInt> items;
    if (cursor < text.size() && text[cursor] == ']') {
        pos = cursor + 1;
        return items;
    }
    while (true) {
        skip_ws();
        auto item = scan_integer(text, cursor);
        if (!item) return std::nullopt;
        items.push_back(std::move(*item));
        skip_ws();
        if (cursor < text.size() && text[cursor] == ',') {
            ++cursor;
            continue;
        }
        if (cursor < text.size() && text[cursor] == ']') {
            pos = cursor + 1;
            return items;
        }
        return std::nullopt;
    }
}

struct Literal {
    Value value;
    std::size_t begin = 0;
    std::size_t end = 0;
};

// Finds the last value literal in free text: a bracketed integer list, a bare
// integer (word-bounded, not part of a decimal fraction), or True/False.
inline std::optional<Literal> last_literal(std::string_view text) {
    std::optional<Literal> found;
    std::size_t pos = 0;
    auto record = [&](Value v, std::size_t begin, std::size_t end) {
        found = Literal{std::move(v), begin, end};
    };
    while (pos < text.size()) {
        const char c = text[pos];
        if (c == '[') {
            std::size_t cursor = pos;
            if (auto list = scan_list(text, cursor)) {
                record(Value::list(std::move(*list)), pos, cursor);
                pos = cursor;
                continue;
            }
            ++pos;
            continue;
        }
        const bool digit_start = std::isdigit(static_cast<unsigned char>(c)) != 0;
        const bool sign_start = c == '-' && pos + 1 < text.size() &&
                                std::isdigit(static_cast<unsigned char>(text[pos + 1])) != 0;
        if (digit_start || sign_start) {
            const char prev = pos > 0 ? text[pos - 1] : '\0';
            // Reject digits glued to identifiers (a4) and fraction parts (3.14).
            bool bad_prefix = is_word_char(prev);
            if (prev == '.' && pos >= 2 &&
                std::isdigit(static_cast<unsigned char>(text[pos - 2])) != 0)
                bad_prefix = true;
            std::size_t cursor = pos;
            auto n = scan_integer(text, cursor);
            const char next = cursor < text.size() ? text[cursor] : '\0';
            bool bad_suffix = is_word_char(next);
            if (next == '.' && cursor + 1 < text.size() &&
                std::isdigit(static_cast<unsigned char>(text[cursor + 1])) != 0)
                bad_suffix = true;
            if (n && !bad_prefix && !bad_suffix) record(Value::integer(std::move(*n)), pos, cursor);
            pos = cursor > pos ? cursor : pos + 1;
            continue;
        }
        if (c == 'T' || c == 'F') {
            const std::string_view word = c == 'T' ? "True" : "False";
            const char prev = pos > 0 ? text[pos - 1] : '\0';
            if (!is_word_char(prev) && text.substr(pos, word.size()) == word) {
                const std::size_t after = pos + word.size();
                const char next = after < text.size() ? text[after] : '\0';
                if (!is_word_char(next)) {
                    record(Value::boolean(c == 'T'), pos, after);
                    pos = after;
                    continue;
                }
            }
        }
        ++pos;
    }
    return found;
}

// Parses text that must be exactly one literal, surrounding whitespace aside.
inline std::optional<Literal> parse_exact(std::string_view text, std::size_t base_offset) {
    std::size_t lo = 0;
    std::size_t hi = text.size();
    while (lo < hi && std::isspace(static_cast<unsigned char>(text[lo])) != 0) ++lo;
    while (hi > lo && std::isspace(static_cast<unsigned char>(text[hi - 1])) != 0) --hi;
    if (lo == hi) return std::nullopt;
    auto lit = last_literal(text.substr(lo, hi - lo));
    if (!lit || lit->begin != 0 || lit->end != hi - lo) return std::nullopt;
    lit->begin = base_offset + lo;
    lit->end = base_offset + hi;
    return lit;
}

}  // namespace detail

// Pulls the answer out of a completion: a single well-formed
// <result>...</result> region wins; otherwise the last integer, bracketed
// integer list, or True/False literal anywhere in the text. The contract is
// recorded alongside the completion but both contracts extract identically —
// a model that volunteers tags under the bare-value contract is still parsed.
inline ExtractedAnswer extract(std::string_view text, AnswerContract /*contract*/) {
    static constexpr std::string_view kOpen = "<result>";
    static constexpr std::string_view kClose = "</result>";

    ExtractedAnswer out;
    const std::size_t open = text.find(kOpen);
    if (open != std::string_view::npos && text.find(kOpen, open + 1) == std::string_view::npos) {
        const std::size_t close = text.find(kClose, open + kOpen.size());
        if (close != std::string_view::npos &&
            text.find(kClose, close + 1) == std::string_view::npos) {
            const std::size_t content_begin = open + kOpen.size();
            auto lit = detail::parse_exact(text.substr(content_begin, close - content_begin),
                                           content_begin);
            if (lit) {
                out.value = std::move(lit->value);
                out.method = ExtractedAnswer::Method::Tags;
                out.begin = lit->begin;
                out.end = lit->end;
                return out;
            }
        }
    }
    if (auto lit = detail::last_literal(text)) {
        out.value = std::move(lit->value);
        out.method = ExtractedAnswer::Method::FallbackLastLiteral;
        out.begin = lit->begin;
        out.end = lit->end;
        return out;
    }
    return out;
}

// --- Metrics ----------------------------------------------------------------

inline double accuracy(const std::vector<ExtractedAnswer>& answers,
                       const std::vector<Value>& truths) {
    if (answers.empty() || answers.size() != truths.size())
        throw EmptyBatch("accuracy needs equal-length nonempty batches");
    std::size_t correct = 0;
    for (std::size_t i = 0; i < answers.size(); ++i)
        if (answers[i].value && *answers[i].value == truths[i]) ++correct;
    return static_cast<double>(correct) / static_cast<double>(answers.size());
}

struct MaeResult {
    double value = 0.0;
    std::size_t excluded = 0;  // answers with no integer to measure against
};

inline MaeResult mae(const std::vector<ExtractedAnswer>& answers,
                     const std::vector<Value>& truths) {
    if (answers.empty() || answers.size() != truths.size())
        throw EmptyBatch("mae needs equal-length nonempty batches");
    MaeResult r;
    double sum = 0.0;
    std::size_t counted = 0;
    for (std::size_t i = 0; i < answers.size(); ++i) {
        if (!truths[i].is_int()) throw std::invalid_argument("mae requires integer ground truth");
        if (!answers[i].value || !answers[i].value->is_int()) {
            ++r.excluded;
            continue;
        }
        BigInt diff = answers[i].value->as_int() - truths[i].as_int();
        sum += std::abs(diff.get_d());
        ++counted;
    }
    if (counted == 0) throw NoParseableAnswers("no parseable numeric answers in batch");
    r.value = sum / static_cast<double>(counted);
    return r;
}

inline std::size_t levenshtein(const std::vector<BigInt>& a, const std::vector<BigInt>& b) {
    const std::size_t n = a.size();
    const std::size_t m = b.size();
    std::vector<std::size_t> row(m + 1);
    for (std::size_t j = 0; j <= m; ++j) row[j] = j;
    for (std::size_t i = 1; i <= n; ++i) {
        std::size_t prev_diag = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= m; ++j) {
            const std::size_t prev_row = row[j];
            const std::size_t subst = prev_diag + (a[i - 1] == b[j - 1] ? 0 : 1);
            row[j] = std::min({row[j] + 1, row[j - 1] + 1, subst});
            prev_diag = prev_row;
        }
    }
    return row[m];
}

// Normalized similarity between integer tuples: 1 - lev / max(lengths).
inline double tuple_similarity(const std::vector<BigInt>& answer,
                               const std::vector<BigInt>& truth) {
    const std::size_t longest = std::max(answer.size(), truth.size());
    if (longest == 0) return 1.0;
    return 1.0 - static_cast<double>(levenshtein(answer, truth)) / static_cast<double>(longest);
}

inline double tuple_similarity(const ExtractedAnswer& answer, const Value& truth) {
    if (!truth.is_list()) throw std::invalid_argument("tuple similarity requires a list truth");
    if (!answer.value || !answer.value->is_list()) return 0.0;
    return tuple_similarity(answer.value->as_list(), truth.as_list());
}

struct DeltaReport {
    double delta = 0.0;                 // 1 - mean per-element exact-match rate
    double whole_tuple_accuracy = 0.0;  // observed, for comparison with (1-delta)^k
    std::size_t n = 0;
};

// Per-loop error rate over tuple-valued instances: each ground-truth element
// is matched positionally against the answer; absent or misparsed answers
// count every element as a miss.
inline DeltaReport per_loop_delta(const std::vector<ExtractedAnswer>& answers,
                                  const std::vector<Value>& truths) {
    if (answers.empty() || answers.size() != truths.size())
        throw EmptyBatch("per-loop delta needs equal-length nonempty batches");
    std::size_t elements = 0;
    std::size_t matches = 0;
    std::size_t exact_tuples = 0;
    for (std::size_t i = 0; i < answers.size(); ++i) {
        if (!truths[i].is_list())
            throw std::invalid_argument("per-loop delta requires list ground truth");
        const auto& truth = truths[i].as_list();
        const std::vector<BigInt>* got = nullptr;
        if (answers[i].value && answers[i].value->is_list()) got = &answers[i].value->as_list();
        std::size_t row_matches = 0;
        for (std::size_t k = 0; k < truth.size(); ++k)
            if (got && k < got->size() && (*got)[k] == truth[k]) ++row_matches;
        elements += truth.size();
        matches += row_matches;
        if (got && *got == truth) ++exact_tuples;
    }
    DeltaReport r;
    r.n = answers.size();
    r.delta = elements == 0
                  ? 0.0
                  : 1.0 - static_cast<double>(matches) / static_cast<double>(elements);
    r.whole_tuple_accuracy =
        static_cast<double>(exact_tuples) / static_cast<double>(answers.size());
    return r;
}

struct VoteOutcome {
    ExtractedAnswer answer;
    bool tie_broken = false;
    std::size_t parsed_votes = 0;
};

// Majority vote over independent samples. Failed extractions do not vote;
// among the most frequent values, the first-sampled one wins and the tie is
// recorded. If every vote failed, the result is the first (failed) answer.
inline VoteOutcome majority_vote(const std::vector<ExtractedAnswer>& answers) {
    if (answers.size() < 2) throw EmptyBatch("majority vote needs at least two answers");
    VoteOutcome out;
    struct Bucket {
        const Value* value;
        std::size_t count;
        std::size_t first_index;
    };
    std::vector<Bucket> buckets;
    for (std::size_t i = 0; i < answers.size(); ++i) {
        if (!answers[i].value) continue;
        ++out.parsed_votes;
        auto it = std::find_if(buckets.begin(), buckets.end(),
                               [&](const Bucket& b) { return *b.value == *answers[i].value; });
        if (it == buckets.end())
            buckets.push_back({&*answers[i].value, 1, i});
        else
            ++it->count;
    }
    if (buckets.empty()) {
        out.answer = answers.front();
        return out;
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < buckets.size(); ++i)
        if (buckets[i].count > buckets[best].count ||
            (buckets[i].count == buckets[best].count &&
             buckets[i].first_index < buckets[best].first_index))
            best = i;
    std::size_t peak_buckets = 0;
    for (const auto& b : buckets)
        if (b.count == buckets[best].count) ++peak_buckets;
    out.answer = answers[buckets[best].first_index];
    out.tie_broken = peak_buckets > 1;
    return out;
}

// --- Aggregation ------------------------------------------------------------

struct ScoredItem {
    ExtractedAnswer answer;
    Value truth;
    bool correct = false;
    bool tie_broken = false;  // set by the runner for self-consistency rows
};

inline ScoredItem score_item(ExtractedAnswer answer, Value truth, bool tie_broken = false) {
    ScoredItem item;
    item.correct = answer.value && *answer.value == truth;
    item.answer = std::move(answer);
    item.truth = std::move(truth);
    item.tie_broken = tie_broken;
    return item;
}

struct ScoreReport {
    std::size_t n = 0;
    std::size_t correct = 0;
    double accuracy = 0.0;
    std::optional<double> mae;  // absent when no row had an integer truth and answer
    std::size_t mae_excluded = 0;
    std::optional<double> tuple_similarity;  // mean over list-truth rows
    std::optional<double> delta;
    std::optional<double> whole_tuple_accuracy;
    std::size_t unparsed = 0;
    std::size_t tie_broken = 0;

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["n"] = n;
        j["correct"] = correct;
        j["accuracy"] = accuracy;
        j["mae"] = mae ? nlohmann::json(*mae) : nlohmann::json(nullptr);
        j["mae_excluded"] = mae_excluded;
        j["tuple_similarity"] =
            tuple_similarity ? nlohmann::json(*tuple_similarity) : nlohmann::json(nullptr);
        j["delta"] = delta ? nlohmann::json(*delta) : nlohmann::json(nullptr);
        j["whole_tuple_accuracy"] = whole_tuple_accuracy
                                        ? nlohmann::json(*whole_tuple_accuracy)
                                        : nlohmann::json(nullptr);
        j["unparsed"] = unparsed;
        j["tie_broken"] = tie_broken;
        return j;
    }
};

inline ScoreReport aggregate(const std::vector<ScoredItem>& items) {
    if (items.empty()) throw EmptyBatch("cannot aggregate an empty batch");
    ScoreReport r;
    r.n = items.size();
    double mae_sum = 0.0;
    std::size_t mae_n = 0;
    double sim_sum = 0.0;
    std::size_t sim_n = 0;
    std::size_t elements = 0;
    std::size_t matches = 0;
    std::size_t exact_tuples = 0;
    std::size_t list_rows = 0;
    for (const auto& item : items) {
        if (item.correct) ++r.correct;
        if (!item.answer.value) ++r.unparsed;
        if (item.tie_broken) ++r.tie_broken;
        if (item.truth.is_int()) {
            if (item.answer.value && item.answer.value->is_int()) {
                BigInt diff = item.answer.value->as_int() - item.truth.as_int();
                mae_sum += std::abs(diff.get_d());
                ++mae_n;
            } else {
                ++r.mae_excluded;
            }
        }
        if (item.truth.is_list()) {
            ++list_rows;
            sim_sum += tuple_similarity(item.answer, item.truth);
            ++sim_n;
            const auto& truth = item.truth.as_list();
            const std::vector<BigInt>* got = nullptr;
            if (item.answer.value && item.answer.value->is_list())
                got = &item.answer.value->as_list();
            for (std::size_t k = 0; k < truth.size(); ++k)
                if (got && k < got->size() && (*got)[k] == truth[k]) ++matches;
            elements += truth.size();
            if (got && *got == truth) ++exact_tuples;
        }
    }
    r.accuracy = static_cast<double>(r.correct) / static_cast<double>(r.n);
    if (mae_n > 0) r.mae = mae_sum / static_cast<double>(mae_n);
    if (sim_n > 0) r.tuple_similarity = sim_sum / static_cast<double>(sim_n);
    if (list_rows > 0 && elements > 0) {
        r.delta = 1.0 - static_cast<double>(matches) / static_cast<double>(elements);
        r.whole_tuple_accuracy =
            static_cast<double>(exact_tuples) / static_cast<double>(list_rows);
    }
    return r;
}

// --- Report serialization ---------------------------------------------------

namespace detail {

inline std::string format_fixed(double v, int precision = 4) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", precision, v);
    return buf;
}

inline std::string format_optional(const std::optional<double>& v, int precision = 4) {
    return v ? format_fixed(*v, precision) : std::string();
}

}  // namespace detail

struct ReportRow {
    std::string model;
    std::string family;
    std::string params;
    std::string technique;
    ScoreReport report;
};

inline std::string report_csv_header() {
    return "model,family,params,technique,n,accuracy,mae,mae_excluded,tuple_similarity,delta,"
           "whole_tuple_accuracy,unparsed,tie_broken";
}

inline std::string report_csv_row(const ReportRow& row) {
    const ScoreReport& r = row.report;
    std::string line;
    line += row.model + "," + row.family + "," + row.params + "," + row.technique + ",";
    line += std::to_string(r.n) + ",";
    line += detail::format_fixed(r.accuracy) + ",";
    line += detail::format_optional(r.mae) + ",";
    line += std::to_string(r.mae_excluded) + ",";
    line += detail::format_optional(r.tuple_similarity) + ",";
    line += detail::format_optional(r.delta) + ",";
    line += detail::format_optional(r.whole_tuple_accuracy) + ",";
    line += std::to_string(r.unparsed) + ",";
    line += std::to_string(r.tie_broken);
    return line;
}

inline std::string report_csv(const std::vector<ReportRow>& rows) {
    std::string out = report_csv_header() + "\n";
    for (const auto& row : rows) out += report_csv_row(row) + "\n";
    return out;
}

}  // namespace codesim
