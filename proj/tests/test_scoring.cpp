#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "codesim/scoring.hpp"

using namespace codesim;

namespace {

std::vector<BigInt> ints(std::initializer_list<long> xs) {
    std::vector<BigInt> out;
    for (long x : xs) out.emplace_back(x);
    return out;
}

ExtractedAnswer ex(std::string_view text) { return extract(text, AnswerContract::ResultTags); }

ExtractedAnswer answer_of(Value v) {
    ExtractedAnswer a;
    a.value = std::move(v);
    a.method = ExtractedAnswer::Method::Tags;
    return a;
}

ExtractedAnswer failed_answer() { return ExtractedAnswer{}; }

// Plain-recursion edit distance, deliberately different from the production
// dynamic program, for cross-checking on short tuples.
std::size_t lev_reference(const std::vector<BigInt>& a, const std::vector<BigInt>& b,
                          std::size_t i, std::size_t j) {
    if (i == a.size()) return b.size() - j;
    if (j == b.size()) return a.size() - i;
    std::size_t best = lev_reference(a, b, i + 1, j + 1) + (a[i] == b[j] ? 0 : 1);
    best = std::min(best, lev_reference(a, b, i + 1, j) + 1);
    best = std::min(best, lev_reference(a, b, i, j + 1) + 1);
    return best;
}

}  // namespace

TEST_CASE("tagged answers are parsed when exactly one region is present") {
    auto a = ex("Let me work through this.\n<result>22</result>\n");
    REQUIRE(a.parsed());
    CHECK(a.method == ExtractedAnswer::Method::Tags);
    CHECK(*a.value == Value::integer(22));

    auto list = ex("<result>[19, 19, 11, 10, 1024]</result>");
    REQUIRE(list.parsed());
    CHECK(list.method == ExtractedAnswer::Method::Tags);
    CHECK(*list.value == Value::list(ints({19, 19, 11, 10, 1024})));

    auto negative = ex("<result> -42 </result>");
    REQUIRE(negative.parsed());
    CHECK(*negative.value == Value::integer(-42));

    auto flag = ex("<result>True</result>");
    REQUIRE(flag.parsed());
    CHECK(*flag.value == Value::boolean(true));
}

TEST_CASE("a well-formed tag region wins over later prose literals") {
    auto a = ex("<result>5</result> though on reflection maybe 9");
    REQUIRE(a.parsed());
    CHECK(a.method == ExtractedAnswer::Method::Tags);
    CHECK(*a.value == Value::integer(5));
}

TEST_CASE("fallback takes the last literal in the text") {
    auto a = ex("So a4 will also have a value of 22. Therefore the final value of a4 is 22.");
    REQUIRE(a.parsed());
    CHECK(a.method == ExtractedAnswer::Method::FallbackLastLiteral);
    CHECK(*a.value == Value::integer(22));

    auto list = ex("First guess [1, 2], corrected output: [3, 5, 5].");
    REQUIRE(list.parsed());
    CHECK(*list.value == Value::list(ints({3, 5, 5})));

    auto after_list = ex("the tuple [1, 2] sums to 3");
    REQUIRE(after_list.parsed());
    CHECK(*after_list.value == Value::integer(3));

    auto boolean = ex("so the answer is False.");
    REQUIRE(boolean.parsed());
    CHECK(*boolean.value == Value::boolean(false));
}

TEST_CASE("identifier digits and decimals are not answers") {
    auto a = ex("the value in a4 equals 22 at step a9");
    REQUIRE(a.parsed());
    CHECK(*a.value == Value::integer(22));

    CHECK_FALSE(ex("roughly 3.14 overall").parsed());
    CHECK_FALSE(ex("").parsed());
    CHECK_FALSE(ex("no numbers here, Falsework aside").parsed());
    CHECK(ex("").method == ExtractedAnswer::Method::Failed);
}

TEST_CASE("duplicate or malformed tag regions fall back to the literal scan") {
    auto dup = ex("<result>4</result><result>9</result>");
    REQUIRE(dup.parsed());
    CHECK(dup.method == ExtractedAnswer::Method::FallbackLastLiteral);
    CHECK(*dup.value == Value::integer(9));

    auto prose = ex("<result>the register holds 7 now</result>");
    REQUIRE(prose.parsed());
    CHECK(prose.method == ExtractedAnswer::Method::FallbackLastLiteral);
    CHECK(*prose.value == Value::integer(7));

    auto empty = ex("<result></result>");
    CHECK_FALSE(empty.parsed());
}

TEST_CASE("extraction round-trips every rendered value") {
    const std::vector<Value> values = {
        Value::integer(0),     Value::integer(-1024), Value::integer(BigInt("123456789012345678901234567890")),
        Value::boolean(true),  Value::boolean(false), Value::list(ints({5})),
        Value::list(ints({-1024, 1024, -1, 21, -20}))};
    for (const auto& v : values) {
        auto bare = ex(v.render());
        REQUIRE(bare.parsed());
        CHECK(*bare.value == v);
        auto tagged = ex("<result>" + v.render() + "</result>");
        REQUIRE(tagged.parsed());
        CHECK(tagged.method == ExtractedAnswer::Method::Tags);
        CHECK(*tagged.value == v);
    }
}

TEST_CASE("extraction reports the span of the parsed literal") {
    const std::string text = "the final value is 22.";
    auto a = ex(text);
    REQUIRE(a.parsed());
    CHECK(text.substr(a.begin, a.end - a.begin) == "22");

    const std::string tagged = "abc <result> [1, 2] </result>";
    auto b = ex(tagged);
    REQUIRE(b.parsed());
    CHECK(tagged.substr(b.begin, b.end - b.begin) == "[1, 2]");
}

TEST_CASE("extracted answers serialize and deserialize") {
    auto a = ex("<result>[3, 4]</result>");
    auto j = extracted_to_json(a);
    auto back = extracted_from_json(j);
    CHECK(back.method == a.method);
    CHECK(*back.value == *a.value);
    CHECK(back.begin == a.begin);
    CHECK(back.end == a.end);

    auto none = extracted_from_json(extracted_to_json(failed_answer()));
    CHECK_FALSE(none.parsed());
}

TEST_CASE("accuracy is the exact-match rate with unparsed counting as wrong") {
    std::vector<ExtractedAnswer> answers = {answer_of(Value::integer(5)),
                                            answer_of(Value::integer(7))};
    std::vector<Value> truths = {Value::integer(5), Value::integer(9)};
    CHECK(accuracy(answers, truths) == 0.5);

    answers[1] = answer_of(Value::integer(9));
    CHECK(accuracy(answers, truths) == 1.0);

    answers[1] = failed_answer();
    CHECK(accuracy(answers, truths) == 0.5);

    CHECK_THROWS_AS(accuracy({}, {}), EmptyBatch);
}

TEST_CASE("mean absolute error skips unparseable answers and counts them") {
    std::vector<ExtractedAnswer> answers = {answer_of(Value::integer(6)), failed_answer(),
                                            answer_of(Value::integer(4))};
    std::vector<Value> truths = {Value::integer(6), Value::integer(1), Value::integer(1)};
    auto r = mae(answers, truths);
    CHECK(r.value == 1.5);
    CHECK(r.excluded == 1);

    auto exact = mae({answer_of(Value::integer(20))}, {Value::integer(20)});
    CHECK(exact.value == 0.0);
    auto off = mae({answer_of(Value::integer(22))}, {Value::integer(20)});
    CHECK(off.value == 2.0);

    CHECK_THROWS_AS(mae({failed_answer()}, {Value::integer(1)}), NoParseableAnswers);
    CHECK_THROWS_AS(mae({}, {}), EmptyBatch);
}

TEST_CASE("tuple similarity normalizes edit distance by the longer tuple") {
    CHECK(tuple_similarity(ints({1, 2, 3, 4, 5}), ints({1, 2, 3, 4, 5})) == 1.0);
    CHECK(tuple_similarity(ints({-1024, 1024, -1, 21, -20}), ints({-1024, 1024, 1, 21, -20})) ==
          0.8);

    std::vector<BigInt> truth;
    for (int i = 0; i < 40; ++i) truth.emplace_back(i / 2);
    std::vector<BigInt> missing_one(truth.begin(), truth.end() - 1);
    CHECK(tuple_similarity(missing_one, truth) == 1.0 - 1.0 / 40.0);

    CHECK(tuple_similarity(failed_answer(), Value::list(ints({1, 2}))) == 0.0);
    CHECK(tuple_similarity(answer_of(Value::integer(7)), Value::list(ints({7}))) == 0.0);
    CHECK(tuple_similarity(answer_of(Value::list(ints({1, 2}))), Value::list(ints({1, 2}))) ==
          1.0);
}

TEST_CASE("the edit-distance dynamic program matches plain recursion") {
    // Every pair of tuples of length <= 3 over a three-symbol alphabet.
    std::vector<std::vector<BigInt>> tuples = {{}};
    for (int len = 1; len <= 3; ++len) {
        std::size_t start = 0;
        std::vector<std::vector<BigInt>> next;
        for (const auto& t : tuples) {
            if (t.size() != static_cast<std::size_t>(len - 1)) continue;
            for (long s = 0; s < 3; ++s) {
                auto extended = t;
                extended.emplace_back(s);
                next.push_back(std::move(extended));
            }
        }
        (void)start;
        tuples.insert(tuples.end(), next.begin(), next.end());
    }
    for (const auto& a : tuples)
        for (const auto& b : tuples)
            CHECK(levenshtein(a, b) == lev_reference(a, b, 0, 0));
}

TEST_CASE("per-loop error rate averages element matches across the batch") {
    std::vector<ExtractedAnswer> exact = {answer_of(Value::list(ints({1, 2, 3, 4, 5}))),
                                          answer_of(Value::list(ints({0, 0, 0, 0, 0})))};
    std::vector<Value> truths = {Value::list(ints({1, 2, 3, 4, 5})),
                                 Value::list(ints({0, 0, 0, 0, 0}))};
    auto all_good = per_loop_delta(exact, truths);
    CHECK(all_good.delta == 0.0);
    CHECK(all_good.whole_tuple_accuracy == 1.0);
    CHECK(all_good.n == 2);

    std::vector<ExtractedAnswer> one_off = {answer_of(Value::list(ints({9, 2, 3, 4, 5}))),
                                            answer_of(Value::list(ints({0, 0, 9, 0, 0})))};
    auto r = per_loop_delta(one_off, truths);
    CHECK(r.delta == Catch::Approx(0.2));
    CHECK(r.whole_tuple_accuracy == 0.0);

    std::vector<ExtractedAnswer> broken = {failed_answer(),
                                           answer_of(Value::list(ints({0, 0, 0, 0, 0})))};
    auto half = per_loop_delta(broken, truths);
    CHECK(half.delta == Catch::Approx(0.5));  // the failed row misses all five elements

    std::vector<ExtractedAnswer> short_list = {answer_of(Value::list(ints({1, 2, 3}))),
                                               answer_of(Value::list(ints({0, 0, 0, 0, 0})))};
    auto trimmed = per_loop_delta(short_list, truths);
    CHECK(trimmed.delta == Catch::Approx(0.2));

    CHECK_THROWS_AS(per_loop_delta({}, {}), EmptyBatch);
}

TEST_CASE("majority vote picks the modal answer and records ties") {
    auto two_of_three = majority_vote({answer_of(Value::integer(7)), answer_of(Value::integer(7)),
                                       answer_of(Value::integer(9))});
    CHECK(*two_of_three.answer.value == Value::integer(7));
    CHECK_FALSE(two_of_three.tie_broken);
    CHECK(two_of_three.parsed_votes == 3);

    auto late_pair = majority_vote({answer_of(Value::integer(7)), answer_of(Value::integer(9)),
                                    answer_of(Value::integer(9))});
    CHECK(*late_pair.answer.value == Value::integer(9));
    CHECK_FALSE(late_pair.tie_broken);

    auto all_distinct = majority_vote({answer_of(Value::integer(7)), answer_of(Value::integer(8)),
                                       answer_of(Value::integer(9))});
    CHECK(*all_distinct.answer.value == Value::integer(7));
    CHECK(all_distinct.tie_broken);

    auto with_failure = majority_vote(
        {failed_answer(), answer_of(Value::integer(9)), answer_of(Value::integer(9))});
    CHECK(*with_failure.answer.value == Value::integer(9));
    CHECK(with_failure.parsed_votes == 2);
    CHECK_FALSE(with_failure.tie_broken);

    auto none = majority_vote({failed_answer(), failed_answer()});
    CHECK_FALSE(none.answer.parsed());
    CHECK(none.parsed_votes == 0);

    auto lists = majority_vote({answer_of(Value::list(ints({1, 2}))),
                                answer_of(Value::list(ints({1, 2}))),
                                answer_of(Value::list(ints({3})))});
    CHECK(*lists.answer.value == Value::list(ints({1, 2})));

    CHECK_THROWS_AS(majority_vote({answer_of(Value::integer(1))}), EmptyBatch);
}

TEST_CASE("aggregation folds a batch into one report") {
    std::vector<ScoredItem> items;
    items.push_back(score_item(answer_of(Value::integer(5)), Value::integer(5)));
    items.push_back(score_item(answer_of(Value::integer(8)), Value::integer(6)));
    items.push_back(score_item(failed_answer(), Value::integer(1)));
    items.push_back(
        score_item(answer_of(Value::list(ints({1, 2, 3, 4, 5}))), Value::list(ints({1, 2, 3, 4, 5}))));
    items.push_back(score_item(answer_of(Value::list(ints({9, 2, 3, 4, 5}))),
                               Value::list(ints({1, 2, 3, 4, 5})), /*tie_broken=*/true));

    auto r = aggregate(items);
    CHECK(r.n == 5);
    CHECK(r.correct == 2);
    CHECK(r.accuracy == Catch::Approx(0.4));
    REQUIRE(r.mae.has_value());
    CHECK(*r.mae == 1.0);  // |5-5| and |8-6| averaged
    CHECK(r.mae_excluded == 1);
    REQUIRE(r.tuple_similarity.has_value());
    CHECK(*r.tuple_similarity == Catch::Approx(0.9));
    REQUIRE(r.delta.has_value());
    CHECK(*r.delta == Catch::Approx(0.1));
    REQUIRE(r.whole_tuple_accuracy.has_value());
    CHECK(*r.whole_tuple_accuracy == 0.5);
    CHECK(r.unparsed == 1);
    CHECK(r.tie_broken == 1);

    CHECK_THROWS_AS(aggregate({}), EmptyBatch);
}

TEST_CASE("reports with no tuple rows leave tuple metrics empty") {
    std::vector<ScoredItem> items = {score_item(answer_of(Value::integer(5)), Value::integer(5))};
    auto r = aggregate(items);
    CHECK_FALSE(r.tuple_similarity.has_value());
    CHECK_FALSE(r.delta.has_value());
    auto j = r.to_json();
    CHECK(j["tuple_similarity"].is_null());
    CHECK(j["accuracy"].get<double>() == 1.0);
}

TEST_CASE("csv reports use fixed formatting") {
    ScoreReport r;
    r.n = 90;
    r.correct = 81;
    r.accuracy = 0.9;
    r.mae = 1.5;
    r.mae_excluded = 2;
    r.unparsed = 2;
    ReportRow row{"mock-oracle", "straight_line", "n10", "cot", r};
    CHECK(report_csv_row(row) ==
          "mock-oracle,straight_line,n10,cot,90,0.9000,1.5000,2,,,,2,0");
    CHECK(report_csv_header() ==
          "model,family,params,technique,n,accuracy,mae,mae_excluded,tuple_similarity,delta,"
          "whole_tuple_accuracy,unparsed,tie_broken");
    CHECK(report_csv({row}) == report_csv_header() + "\n" + report_csv_row(row) + "\n");
}
