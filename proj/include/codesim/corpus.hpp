#pragma once

// Registry over the verbatim source corpus plus native reference oracles:
// sorting templates are graded against the sorted multiset, classic/variant
// functions against direct reimplementations of the listed code.

#include <algorithm>
#include <string>
#include <string_view>
#include <vector>

#include "codesim/corpus_text.hpp"
#include "codesim/errors.hpp"
#include "codesim/value.hpp"

namespace codesim {

// How a corpus entry is invoked: main(v, len(v)) for sorting templates,
// f(n)/g(n) for integer functions, f(v)/g(v) for the classic bubble pair.
enum class CallShape { MainWithSize, UnaryInt, UnaryList };

struct CorpusEntry {
    std::string_view id;
    std::string_view text;
    std::string_view function_name; // entry point inside text
    CallShape shape = CallShape::MainWithSize;
    bool sorts_descending = false;
    // Smallest input the template itself tolerates (the iterative quicksort
    // indexes a stack sized h-l+1 and needs at least 2 elements).
    int min_input_len = 1;
};

inline const std::vector<CorpusEntry>& corpus() {
    using namespace corpus_text;
    static const std::vector<CorpusEntry> entries = {
        {"sorting_insertion_recursive", k_sorting_insertion_recursive, "main", CallShape::MainWithSize, false, 1},
        {"sorting_bubble_recursive", k_sorting_bubble_recursive, "main", CallShape::MainWithSize, false, 1},
        {"sorting_selection_recursive", k_sorting_selection_recursive, "main", CallShape::MainWithSize, false, 1},
        {"sorting_adaptive_bubble_recursive", k_sorting_adaptive_bubble_recursive, "main", CallShape::MainWithSize, false, 1},
        {"sorting_quick_recursive", k_sorting_quick_recursive, "main", CallShape::MainWithSize, false, 1},
        {"sorting_merge_recursive", k_sorting_merge_recursive, "main", CallShape::MainWithSize, false, 1},
        {"sorting_tim_recursive", k_sorting_tim_recursive, "main", CallShape::MainWithSize, false, 1},
        {"sorting_heap_recursive", k_sorting_heap_recursive, "main", CallShape::MainWithSize, false, 1},
        {"sorting_insertion_iterative", k_sorting_insertion_iterative, "main", CallShape::MainWithSize, false, 1},
        {"sorting_bubble_iterative", k_sorting_bubble_iterative, "main", CallShape::MainWithSize, false, 1},
        {"sorting_selection_iterative", k_sorting_selection_iterative, "main", CallShape::MainWithSize, false, 1},
        {"sorting_adaptive_bubble_iterative", k_sorting_adaptive_bubble_iterative, "main", CallShape::MainWithSize, false, 1},
        {"sorting_quick_iterative", k_sorting_quick_iterative, "main", CallShape::MainWithSize, false, 2},
        {"sorting_merge_iterative", k_sorting_merge_iterative, "main", CallShape::MainWithSize, false, 1},
        {"sorting_tim_iterative", k_sorting_tim_iterative, "main", CallShape::MainWithSize, false, 1},
        {"sorting_heap_iterative", k_sorting_heap_iterative, "main", CallShape::MainWithSize, false, 1},
        {"fibonacci", k_fibonacci, "f", CallShape::UnaryInt, false, 1},
        {"padovan", k_padovan, "g", CallShape::UnaryInt, false, 1},
        {"bubble_asc", k_bubble_asc, "f", CallShape::UnaryList, false, 1},
        {"bubble_desc", k_bubble_desc, "g", CallShape::UnaryList, true, 1},
        {"gauss", k_gauss, "f", CallShape::UnaryInt, false, 1},
        {"gauss_alt", k_gauss_alt, "g", CallShape::UnaryInt, false, 1},
        {"is_prime", k_is_prime, "f", CallShape::UnaryInt, false, 1},
        {"is_prime_succ", k_is_prime_succ, "g", CallShape::UnaryInt, false, 1},
        {"collatz_sum", k_collatz_sum, "f", CallShape::UnaryInt, false, 1},
        {"collatz_even_sum", k_collatz_even_sum, "g", CallShape::UnaryInt, false, 1},
    };
    return entries;
}

inline const CorpusEntry& corpus_entry(std::string_view id) {
    for (const auto& e : corpus())
        if (e.id == id) return e;
    throw UnknownTemplate("no corpus entry named '" + std::string(id) + "'");
}

// The five classic/variant pairs used for the memorisation study.
struct VariantPairIds {
    std::string_view pair_name;
    std::string_view classic_id;
    std::string_view variant_id;
};

inline const std::vector<VariantPairIds>& variant_pairs() {
    static const std::vector<VariantPairIds> pairs = {
        {"fibonacci/padovan", "fibonacci", "padovan"},
        {"bubble_asc/desc", "bubble_asc", "bubble_desc"},
        {"gauss/gauss_alt", "gauss", "gauss_alt"},
        {"is_prime/is_prime_succ", "is_prime", "is_prime_succ"},
        {"collatz_sum/collatz_even_sum", "collatz_sum", "collatz_even_sum"},
    };
    return pairs;
}

namespace detail {

inline BigInt fibonacci_ref(const BigInt& n) {
    if (n <= 1) return n;
    BigInt a = 0, b = 1;
    for (BigInt i = 1; i < n; ++i) {
        BigInt c = a + b;
        a = b;
        b = c;
    }
    return b;
}

inline BigInt padovan_ref(const BigInt& n) {
    BigInt a = 1, b = 1, c = 1, d = 1;
    for (BigInt i = 3; i <= n; ++i) {
        d = a + b;
        a = b;
        b = c;
        c = d;
    }
    return d;
}

inline BigInt gauss_ref(const BigInt& n) {
    BigInt tot = 0;
    for (BigInt i = 0; i < n; ++i) tot += i;
    return tot;
}

inline BigInt gauss_alt_ref(const BigInt& n) {
    BigInt tot = 0;
    for (BigInt i = 0; i < n; ++i) tot += (mpz_even_p(i.get_mpz_t()) ? i : -i);
    return tot;
}

inline bool is_prime_ref(const BigInt& n) {
    if (n < 2) return false;
    BigInt root;
    mpz_sqrt(root.get_mpz_t(), n.get_mpz_t());
    for (BigInt x = 2; x <= root; ++x)
        if (n % x == 0) return false;
    return true;
}

inline BigInt collatz_sum_ref(BigInt n) {
    BigInt s = n;
    while (n != 1) {
        if (mpz_even_p(n.get_mpz_t()))
            n /= 2;
        else
            n = 3 * n + 1;
        s += n;
    }
    return s;
}

inline BigInt collatz_even_sum_ref(BigInt n) {
    BigInt s = n;
    while (n != 1) {
        if (mpz_even_p(n.get_mpz_t())) {
            n /= 2;
            s += n;
        } else {
            n = 3 * n + 1;
        }
    }
    return s;
}

inline std::vector<BigInt> sorted_ref(std::vector<BigInt> v, bool descending) {
    std::sort(v.begin(), v.end());
    if (descending) std::reverse(v.begin(), v.end());
    return v;
}

} // namespace detail

// Ground truth for a corpus entry on a concrete input, computed natively.
inline Value reference_value(std::string_view corpus_id, const Value& input) {
    const CorpusEntry& e = corpus_entry(corpus_id);
    if (e.shape == CallShape::MainWithSize || e.shape == CallShape::UnaryList) {
        if (input.kind() != Value::Kind::List)
            throw UnknownTemplate("corpus entry '" + std::string(corpus_id) + "' takes a list input");
        return Value::list(detail::sorted_ref(input.as_list(), e.sorts_descending));
    }
    if (input.kind() != Value::Kind::Int)
        throw UnknownTemplate("corpus entry '" + std::string(corpus_id) + "' takes an integer input");
    const BigInt& n = input.as_int();
    if (corpus_id == "fibonacci") return Value::integer(detail::fibonacci_ref(n));
    if (corpus_id == "padovan") return Value::integer(detail::padovan_ref(n));
    if (corpus_id == "gauss") return Value::integer(detail::gauss_ref(n));
    if (corpus_id == "gauss_alt") return Value::integer(detail::gauss_alt_ref(n));
    if (corpus_id == "is_prime") return Value::boolean(detail::is_prime_ref(n));
    if (corpus_id == "is_prime_succ") return Value::boolean(detail::is_prime_ref(n + 1));
    if (corpus_id == "collatz_sum") return Value::integer(detail::collatz_sum_ref(n));
    if (corpus_id == "collatz_even_sum") return Value::integer(detail::collatz_even_sum_ref(n));
    throw UnknownTemplate("no reference oracle for '" + std::string(corpus_id) + "'");
}

} // namespace codesim
