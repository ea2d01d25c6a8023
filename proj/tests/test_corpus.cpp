#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <string>

#include "codesim/corpus.hpp"

using namespace codesim;

namespace {

Value ints(std::vector<long> xs) {
    std::vector<BigInt> v;
    for (long x : xs) v.emplace_back(x);
    return Value::list(std::move(v));
}

} // namespace

TEST_CASE("the corpus registers 16 sorting templates and 10 classic functions") {
    std::set<std::string> ids;
    int sorting = 0;
    for (const auto& e : corpus()) {
        ids.insert(std::string(e.id));
        if (e.id.starts_with("sorting_")) ++sorting;
        CHECK(!e.text.empty());
    }
    CHECK(ids.size() == corpus().size());
    CHECK(corpus().size() == 26);
    CHECK(sorting == 16);
    CHECK_THROWS_AS(corpus_entry("sorting_bogo_iterative"), UnknownTemplate);
}

TEST_CASE("every algorithm appears in both styles") {
    for (const char* alg : {"insertion", "bubble", "selection", "adaptive_bubble", "quick", "merge", "tim", "heap"}) {
        CHECK_NOTHROW(corpus_entry(std::string("sorting_") + alg + "_iterative"));
        CHECK_NOTHROW(corpus_entry(std::string("sorting_") + alg + "_recursive"));
    }
}

TEST_CASE("the stored corpus repeats two listings verbatim") {
    // The recursive insertion and selection listings are identical, as are the
    // iterative bubble and selection listings; both ids are kept.
    CHECK(corpus_entry("sorting_insertion_recursive").text == corpus_entry("sorting_selection_recursive").text);
    CHECK(corpus_entry("sorting_bubble_iterative").text == corpus_entry("sorting_selection_iterative").text);
}

TEST_CASE("sorting entries expose their invocation constraints") {
    CHECK(corpus_entry("sorting_quick_iterative").min_input_len == 2);
    CHECK(corpus_entry("sorting_quick_recursive").min_input_len == 1);
    CHECK(corpus_entry("sorting_heap_iterative").function_name == "main");
    CHECK(corpus_entry("fibonacci").shape == CallShape::UnaryInt);
    CHECK(corpus_entry("bubble_asc").shape == CallShape::UnaryList);
}

TEST_CASE("sorting ground truth is the ascending sorted multiset") {
    CHECK(reference_value("sorting_bubble_iterative", ints({3, 1, 2})).render() == "[1, 2, 3]");
    CHECK(reference_value("sorting_tim_recursive", ints({58, 58, 2, 58, 58})).render() == "[2, 58, 58, 58, 58]");
    CHECK(reference_value("sorting_quick_iterative", ints({5, 5})).render() == "[5, 5]");
}

TEST_CASE("classic reference oracles return the frozen values") {
    CHECK(reference_value("fibonacci", Value::integer(10)).render() == "55");
    CHECK(reference_value("fibonacci", Value::integer(0)).render() == "0");
    CHECK(reference_value("fibonacci", Value::integer(1)).render() == "1");
    CHECK(reference_value("padovan", Value::integer(10)).render() == "12");
    CHECK(reference_value("padovan", Value::integer(2)).render() == "1");
    CHECK(reference_value("gauss", Value::integer(10)).render() == "45");
    CHECK(reference_value("gauss_alt", Value::integer(10)).render() == "-5");
    CHECK(reference_value("is_prime", Value::integer(7)).render() == "True");
    CHECK(reference_value("is_prime", Value::integer(9)).render() == "False");
    CHECK(reference_value("is_prime", Value::integer(2)).render() == "True");
    CHECK(reference_value("is_prime", Value::integer(1)).render() == "False");
    CHECK(reference_value("is_prime_succ", Value::integer(6)).render() == "True");
    CHECK(reference_value("collatz_sum", Value::integer(3)).render() == "49");
    CHECK(reference_value("collatz_sum", Value::integer(1)).render() == "1");
    CHECK(reference_value("collatz_even_sum", Value::integer(3)).render() == "23");
    CHECK(reference_value("collatz_even_sum", Value::integer(4)).render() == "7");
}

TEST_CASE("the bubble pair sorts in opposite directions") {
    CHECK(reference_value("bubble_asc", ints({3, 1, 2})).render() == "[1, 2, 3]");
    CHECK(reference_value("bubble_desc", ints({3, 1, 2})).render() == "[3, 2, 1]");
}

TEST_CASE("differentiating inputs separate each variant from its classic") {
    // collatz pair coincides at 4 (both 7) but differs at 3.
    CHECK(reference_value("collatz_sum", Value::integer(4)).render() == "7");
    CHECK(reference_value("collatz_even_sum", Value::integer(4)).render() == "7");
    CHECK(reference_value("collatz_sum", Value::integer(3)).render() !=
          reference_value("collatz_even_sum", Value::integer(3)).render());
    CHECK(reference_value("gauss", Value::integer(10)).render() !=
          reference_value("gauss_alt", Value::integer(10)).render());
}

TEST_CASE("variant pair table resolves to registered entries") {
    REQUIRE(variant_pairs().size() == 5);
    for (const auto& pr : variant_pairs()) {
        CHECK_NOTHROW(corpus_entry(pr.classic_id));
        CHECK_NOTHROW(corpus_entry(pr.variant_id));
    }
}

TEST_CASE("shape mismatches are rejected") {
    CHECK_THROWS_AS(reference_value("fibonacci", ints({1, 2})), UnknownTemplate);
    CHECK_THROWS_AS(reference_value("sorting_merge_iterative", Value::integer(3)), UnknownTemplate);
}
