#pragma once

// Verbatim prompt templates. These strings are benchmark identity: byte-equal
// copies live under assets/prompts/ and a test keeps the two in sync, so any
// wording change is deliberate and visible in review.

namespace codesim::prompt_assets {

// Code-simulation directive template; @code@ and @input@ are replaced at
// prompt time. The answer-format sentence, when required, is appended to the
// third directive line after substitution.
inline constexpr const char* k_cosm_template =
    R"PROMPT("""
@code@
# 1. Simulate the above program instruction by instruction.
# 2. Report the trace of the program at the end of each iteration.
# 3. Think step by step and reply with the output of the function for the following input: @input@.
""")PROMPT";

// Instructional illustration: teaches the instruction semantics and walks one
// worked example. The example's header line lists only the variables the
// original illustration listed; the walked trace is the authoritative state.
inline constexpr const char* k_instructional_block =
    R"PROMPT("""
Consider a Python program that can contain sums, assignments and logical operations.
A sum has the form a += b, which means that a becomes equal to its value plus that of b. A subtraction, in the form a -= b, works with the same rationale.
An assignment has the form a = b, which means that a becomes equal to b.
A logical and has the form a &= b, which means that a becomes equal to the logical and of a and b. A logical or, in the form a |= b, works with the same rationale.

Here's an example of a program that consists of 5 instructions, including assignments.
a0=5; a1=3; a2=8
a0 -= a1
a0 = a1
a4 += a1
a0 -= a2

The computation carried on is the following:
1. a0=5; a1=3; a2=8; a3=0; a4=4
2. a0 -= a1 -> a0 = 5 - 3 = 2
3. a0 = a1 -> a0 = 3
4. a4 += a1 -> a4 = 4 + 3 = 7
5. a0 -= a2 -> a0 = 3 - 8 = -5

So, for example, the value of a4 at the end of the iterations is 7 while the value of a0 is -5.
""")PROMPT";

// Worked-example illustration skeleton for the examples mode; the program and
// its trace are produced by the evaluator at prompt-build time.
inline constexpr const char* k_example_block_template =
    R"PROMPT("""
Consider an example of a program comprising 5 instructions, including assignments.
@code@

The computation carried on is the following:
@trace@
""")PROMPT";

// Split question layout: directive block, program text, question block.
inline constexpr const char* k_split_layout_template =
    R"PROMPT("""
@directive@
"""
@code@

"""
@question@
""")PROMPT";

// Single-block layout used for the nested-loop baseline.
inline constexpr const char* k_nested_base_template =
    R"PROMPT("""Execute this Python function and report the numerical result for the input value @input@. Reply just with the solution.
"""

@code@)PROMPT";

inline constexpr const char* k_tags_sentence =
    "Enclose the solution between <result></result> tags.";

}  // namespace codesim::prompt_assets
