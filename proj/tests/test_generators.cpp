#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "codesim/generators.hpp"
#include "codesim/oracle.hpp"
#include "support.hpp"

using namespace codesim;

namespace {

std::vector<std::string> body_lines(const std::string& source) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start <= source.size()) {
        std::size_t end = source.find('\n', start);
        if (end == std::string::npos) end = source.size();
        lines.push_back(source.substr(start, end - start));
        start = end + 1;
    }
    lines.erase(lines.begin());  // drop the initialization header
    return lines;
}

int count_occurrences(const std::string& text, const std::string& needle) {
    int n = 0;
    for (std::size_t pos = text.find(needle); pos != std::string::npos;
         pos = text.find(needle, pos + 1))
        ++n;
    return n;
}

}  // namespace

TEST_CASE("generation is deterministic in (family, params, seed)") {
    auto a = gen_straight_line(30, 42);
    auto b = gen_straight_line(30, 42);
    CHECK(a.id == b.id);
    CHECK(a.question == b.question);
    REQUIRE(a.sources.size() == 1);
    CHECK(a.sources[0].text == b.sources[0].text);
    CHECK(a.ground_truth == b.ground_truth);

    auto c = gen_straight_line(30, 43);
    CHECK(a.id != c.id);
    CHECK(a.sources[0].text != c.sources[0].text);
}

TEST_CASE("instance ids separate families with equal numeric parameters") {
    auto a = gen_single_class(InstructionClass::AddSub, 10, 7);
    auto b = gen_straight_line(10, 7);
    CHECK(a.id != b.id);
}

TEST_CASE("single-class programs contain only the requested instruction kind") {
    SECTION("mov programs have one assignment per line") {
        auto inst = gen_single_class(InstructionClass::Mov, 9, 3);
        auto lines = body_lines(inst.sources[0].text);
        REQUIRE(lines.size() == 9);
        for (const auto& line : lines) {
            CAPTURE(line);
            CHECK(line.find(" = ") != std::string::npos);
            CHECK(line.find("+=") == std::string::npos);
            CHECK(line.find("-=") == std::string::npos);
            CHECK(line.find("&=") == std::string::npos);
            CHECK(line.find("|=") == std::string::npos);
        }
    }
    SECTION("addsub programs use only += and -=") {
        auto inst = gen_single_class(InstructionClass::AddSub, 10, 5);
        for (const auto& line : body_lines(inst.sources[0].text)) {
            CAPTURE(line);
            CHECK((line.find("+=") != std::string::npos || line.find("-=") != std::string::npos));
        }
    }
    SECTION("andor programs use only &= and |=") {
        auto inst = gen_single_class(InstructionClass::AndOr, 10, 5);
        for (const auto& line : body_lines(inst.sources[0].text)) {
            CAPTURE(line);
            CHECK((line.find("&=") != std::string::npos || line.find("|=") != std::string::npos));
        }
    }
}

TEST_CASE("single-instruction addsub ground truth is one arithmetic step") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto inst = gen_single_class(InstructionClass::AddSub, 1, seed);
        const Program& p = inst.programs.at(0);
        const auto& ins = std::get<Instruction>(p.body.at(0));
        const VarId q = std::get<FinalVarQuery>(p.query).var;
        BigInt expected = p.init_values[static_cast<std::size_t>(q.index)];
        if (q == ins.dst) {
            BigInt rhs = ins.src.is_var()
                             ? p.init_values[static_cast<std::size_t>(ins.src.var().index)]
                             : ins.src.literal();
            if (ins.kind == OpKind::AddAssign)
                expected += rhs;
            else
                expected -= rhs;
        }
        CHECK(inst.ground_truth == Value::integer(expected));
    }
}

TEST_CASE("query variables are written ones when the program is long enough") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        auto inst = gen_single_class(InstructionClass::Mov, 10, seed);
        const Program& p = inst.programs.at(0);
        std::set<int> written;
        for (const auto& node : p.body) written.insert(std::get<Instruction>(node).dst.index);
        const VarId q = std::get<FinalVarQuery>(p.query).var;
        CAPTURE(seed, q.index);
        CHECK(written.count(q.index) == 1);
    }
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        auto inst = gen_straight_line(12, seed);
        const Program& p = inst.programs.at(0);
        std::set<int> written;
        for (const auto& node : p.body) written.insert(std::get<Instruction>(node).dst.index);
        CHECK(written.count(std::get<FinalVarQuery>(p.query).var.index) == 1);
    }
}

TEST_CASE("straight-line programs reject degenerate lengths and exclude bitwise ops") {
    CHECK_THROWS_AS(gen_straight_line(0, 1), InvalidProgram);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto inst = gen_straight_line(50, seed);
        const std::string& text = inst.sources[0].text;
        CHECK(count_occurrences(text, "&=") == 0);
        CHECK(count_occurrences(text, "|=") == 0);
        CHECK(count_occurrences(text, "*=") == 0);
        CHECK(body_lines(text).size() == 50);
    }
}

TEST_CASE("straight-line questions use the frozen wording") {
    auto inst = gen_straight_line(10, 11);
    const std::string expected = "Think step by step and then reply with the numerical value " +
                                 inst.query.var_name + " has at the end of the computation.";
    CHECK(inst.question == expected);
}

TEST_CASE("critical-path instances have exact slice length and slice-faithful value") {
    for (int n_lines : {20, 30}) {
        for (int path_len : {5, 10, 15, 20}) {
            for (std::uint64_t seed = 0; seed < 5; ++seed) {
                auto inst = gen_critical_path(n_lines, path_len, seed);
                const Program& p = inst.programs.at(0);
                const VarId q = std::get<FinalVarQuery>(p.query).var;
                auto slice = backward_slice(p, q);
                CAPTURE(n_lines, path_len, seed);
                CHECK(static_cast<int>(slice.size()) == path_len);
                CHECK(eval(restrict_to(p, slice)) == inst.ground_truth);
            }
        }
    }
}

TEST_CASE("critical path covering every line behaves like a fully dependent program") {
    auto inst = gen_critical_path(12, 12, 9);
    const Program& p = inst.programs.at(0);
    auto slice = backward_slice(p, std::get<FinalVarQuery>(p.query).var);
    CHECK(slice.size() == 12);
}

TEST_CASE("critical-path parameter validation") {
    CHECK_THROWS_AS(gen_critical_path(10, 0, 1), InvalidProgram);
    CHECK_THROWS_AS(gen_critical_path(10, 11, 1), InvalidProgram);
}

TEST_CASE("approximate programs are one independent loop per variable") {
    auto inst = gen_approximate(5, 21);
    const Program& p = inst.programs.at(0);
    REQUIRE(p.body.size() == 5);
    for (std::size_t i = 0; i < p.body.size(); ++i) {
        const auto& loop = std::get<LoopBlock>(p.body[i]);
        CHECK(loop.iterations.is_symbolic());
        REQUIRE(loop.body.size() == 1);
        CHECK(std::get<Instruction>(loop.body[0]).dst.index == static_cast<int>(i));
    }
    REQUIRE(inst.ground_truth.is_list());
    CHECK(inst.ground_truth.as_list().size() == 5);
    CHECK(inst.question == "Think step by step and then reply with the output of the function for n=10.");

    const std::string& text = inst.sources[0].text;
    CHECK(text.rfind("def f(n):\n", 0) == 0);
    CHECK(count_occurrences(text, "for _ in range(n):") == 5);
    CHECK(text.find("return [n_0, n_1, n_2, n_3, n_4]") != std::string::npos);
}

TEST_CASE("approximate inits stay in {-1, 0, 1}") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        auto inst = gen_approximate(9, seed);
        for (const BigInt& v : inst.programs.at(0).init_values) {
            CHECK(v >= -1);
            CHECK(v <= 1);
        }
    }
}

TEST_CASE("redundant instances carry m distinct equivalent sources") {
    auto inst = gen_redundant(77, 5);
    REQUIRE(inst.sources.size() == 5);
    REQUIRE(inst.programs.size() == 5);
    std::set<std::string> texts;
    for (const auto& s : inst.sources) texts.insert(s.text);
    CHECK(texts.size() == 5);
    for (const Program& p : inst.programs) CHECK(eval(p) == inst.ground_truth);
    // The question names one variable, so every copy must keep that variable's
    // name meaningful: evaluating each copy at its own recorded query agrees.
    for (const Program& p : inst.programs)
        CHECK(var_name(p.naming, std::get<FinalVarQuery>(p.query).var) == inst.query.var_name);
}

TEST_CASE("redundant generation rejects m < 2 and detects broken equivalence") {
    CHECK_THROWS_AS(gen_redundant(1, 1), InvalidProgram);
    auto inst = gen_redundant(5, 2);
    // Sabotage one copy; the construction-time verifier must notice.
    auto& ins = std::get<Instruction>(inst.programs[1].body[0]);
    ins.kind = ins.kind == OpKind::AddAssign ? OpKind::SubAssign : OpKind::AddAssign;
    bool still_equal = eval(inst.programs[1]) == inst.ground_truth;
    if (!still_equal) CHECK_THROWS_AS(detail::verify_instance(inst), InvalidProgram);
}

TEST_CASE("nested instances respect the value bound for every depth") {
    for (int k = 1; k <= 9; ++k) {
        const BigInt bound = std::min<long>(1L << k, 1024);
        for (std::uint64_t seed = 0; seed < 3; ++seed) {
            auto inst = gen_nested(k, seed);
            CAPTURE(k, seed);
            REQUIRE(inst.ground_truth.is_int());
            CHECK(abs(inst.ground_truth.as_int()) <= bound);
            const std::string& text = inst.sources[0].text;
            CHECK(text.rfind("def f(n):\n", 0) == 0);
            CHECK(count_occurrences(text, "for _ in range(n):") == k);
            CHECK(text.find("return a") != std::string::npos);
        }
    }
}

TEST_CASE("nested generation without bound enforcement still yields valid instances") {
    auto inst = gen_nested(4, 123, /*enforce_bound=*/false);
    const Program& p = inst.programs.at(0);
    CHECK(eval_function(p, 10) == inst.ground_truth);
    CHECK_THROWS_AS(gen_nested(10, 1), InvalidProgram);
    CHECK_THROWS_AS(gen_nested(0, 1), InvalidProgram);
}

TEST_CASE("sorting instances use the verbatim template and a seeded input") {
    auto inst = gen_sorting("bubble", SortStyle::Iterative, 10, 5);
    CHECK(inst.sources[0].text == std::string(corpus_entry("sorting_bubble_iterative").text));
    REQUIRE(inst.input.has_value());
    const auto& in = inst.input->as_list();
    REQUIRE(in.size() == 10);
    for (const BigInt& x : in) {
        CHECK(x >= 0);
        CHECK(x <= 100);
    }
    std::vector<BigInt> expected = in;
    std::sort(expected.begin(), expected.end());
    CHECK(inst.ground_truth == Value::list(expected));
    CHECK(inst.question.find(inst.query.input_render) != std::string::npos);
    CHECK(inst.query.input_render.front() == '[');
}

TEST_CASE("sorting parameter validation") {
    CHECK_THROWS_AS(gen_sorting("bubble", SortStyle::Iterative, 15, 1), InvalidProgram);
    CHECK_THROWS_AS(gen_sorting("bogo", SortStyle::Iterative, 10, 1), UnknownTemplate);
    CHECK_THROWS_AS(
        gen_sorting_with_input("quick", SortStyle::Iterative, {BigInt(4)}, 1),
        InvalidProgram);
}

TEST_CASE("explicit-input sorting instances sort exactly that input") {
    auto inst = gen_sorting_with_input("merge", SortStyle::Recursive,
                                       {BigInt(5), BigInt(3), BigInt(5)}, 2);
    CHECK(inst.ground_truth == Value::list({BigInt(3), BigInt(5), BigInt(5)}));
    CHECK(inst.query.input_render == "[5, 3, 5]");
}

TEST_CASE("variant pairs resolve both members with reference ground truth") {
    auto [classic, variant] = gen_variant_pair("fibonacci/padovan", Value::integer(10), false);
    CHECK(classic.ground_truth == Value::integer(55));
    CHECK(variant.ground_truth == Value::integer(12));
    CHECK(classic.sources[0].text == std::string(corpus_entry("fibonacci").text));
    CHECK(variant.sources[0].text == std::string(corpus_entry("padovan").text));
    CHECK(classic.id != variant.id);
    CHECK(classic.question == "Think step by step and then reply with the output of the function for n=10.");
}

TEST_CASE("variant pair anonymization renames exactly the definition letter") {
    auto [classic, variant] = gen_variant_pair("gauss/gauss_alt", Value::integer(10), true);
    const std::string plain(corpus_entry("gauss").text);
    const std::string& anon = classic.sources[0].text;
    REQUIRE(anon.size() == plain.size());
    CHECK(anon.rfind("def ", 0) == 0);
    CHECK(anon[4] != 'f');
    CHECK(anon.substr(5) == plain.substr(5));
    // Fresh names must differ between the two members.
    CHECK(anon[4] != variant.sources[0].text[4]);
    CHECK(classic.ground_truth == Value::integer(45));
    CHECK(variant.ground_truth == Value::integer(-5));
}

TEST_CASE("variant pairs cover list-shaped and boolean-shaped members") {
    std::vector<BigInt> v{BigInt(3), BigInt(1), BigInt(2)};
    auto [asc, desc] = gen_variant_pair("bubble_asc/desc", Value::list(v), false);
    CHECK(asc.ground_truth == Value::list({BigInt(1), BigInt(2), BigInt(3)}));
    CHECK(desc.ground_truth == Value::list({BigInt(3), BigInt(2), BigInt(1)}));

    auto [prime, prime_succ] = gen_variant_pair("is_prime/is_prime_succ", Value::integer(7), false);
    CHECK(prime.ground_truth == Value::boolean(true));
    CHECK(prime_succ.ground_truth == Value::boolean(false));  // 8 is not prime

    auto [csum, cesum] = gen_variant_pair("collatz_sum/collatz_even_sum", Value::integer(4), false);
    CHECK(csum.ground_truth == Value::integer(7));
    CHECK(cesum.ground_truth == Value::integer(7));

    CHECK_THROWS_AS(gen_variant_pair("fizz/buzz", Value::integer(1), false), UnknownFamily);
}

TEST_CASE("good-exchange renderings share ground truth across modes") {
    for (int n : {10, 50}) {
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            auto natural = gen_good_exchange(n, ExchangeMode::Naturalistic, seed);
            auto synthetic = gen_good_exchange(n, ExchangeMode::Synthetic, seed);
            CAPTURE(n, seed);
            CHECK(natural.ground_truth == synthetic.ground_truth);
            CHECK(natural.id != synthetic.id);
            REQUIRE(natural.ground_truth.is_int());
            CHECK(natural.ground_truth.as_int() >= 0);
        }
    }
}

TEST_CASE("good-exchange synthetic rendering has one code line per interaction unit") {
    auto inst = gen_good_exchange(30, ExchangeMode::Synthetic, 8);
    CHECK(body_lines(inst.sources[0].text).size() == 30);
    CHECK(inst.sources[0].language_tag == "python3");
    CHECK((inst.query.var_name == "a0" || inst.query.var_name == "a1"));
}

TEST_CASE("good-exchange naturalistic rendering is English sentences") {
    auto inst = gen_good_exchange(10, ExchangeMode::Naturalistic, 8);
    const std::string& text = inst.sources[0].text;
    CHECK(inst.sources[0].language_tag == "text");
    CHECK(text.rfind("Alice starts with ", 0) == 0);
    CHECK(text.find("Bob starts with ") != std::string::npos);
    CHECK(text.find('=') == std::string::npos);
    CHECK((inst.query.agent == "Alice" || inst.query.agent == "Bob"));
    CHECK(inst.question.find(inst.query.agent) != std::string::npos);
    CHECK(inst.question.find("apples") != std::string::npos);
}

TEST_CASE("manifests round-trip instances and write sources to disk") {
    testsupport::TempDir dir;
    std::vector<BenchmarkInstance> batch = {
        gen_straight_line(10, 1),
        gen_redundant(2, 3),
        gen_good_exchange(10, ExchangeMode::Naturalistic, 4),
    };
    auto manifest_path = write_manifest(batch, dir.path());
    auto rows = read_manifest(manifest_path);
    REQUIRE(rows.size() == batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) {
        CHECK(rows[i]["id"] == batch[i].id);
        CHECK(rows[i]["seed"] == batch[i].seed);
        CHECK(Value::from_json(rows[i]["ground_truth"]) == batch[i].ground_truth);
        const auto& files = rows[i]["sources"];
        REQUIRE(files.size() == batch[i].sources.size());
        for (std::size_t j = 0; j < batch[i].sources.size(); ++j) {
            const auto path = dir.path() / files[j].get<std::string>();
            CHECK(testsupport::read_file(path) == batch[i].sources[j].text);
        }
    }
    CHECK(rows[1]["sources"].size() == 3);
    CHECK(rows[2]["sources"][0].get<std::string>().find(".txt") != std::string::npos);
}

TEST_CASE("family and parameter names round-trip") {
    for (Family f : {Family::SingleClass, Family::StraightLine, Family::CriticalPath,
                     Family::Approximate, Family::Redundant, Family::NestedLoops, Family::Sorting,
                     Family::VariantPair, Family::GoodExchange})
        CHECK(family_from_name(family_name(f)) == f);
    CHECK_THROWS_AS(family_from_name("quantum"), UnknownFamily);
    for (InstructionClass c :
         {InstructionClass::AddSub, InstructionClass::Mov, InstructionClass::AndOr})
        CHECK(instruction_class_from_name(instruction_class_name(c)) == c);
}
