#pragma once

// Canonical question sentences attached to benchmark instances.  The prompt
// builder derives technique-specific variants from these (e.g. stripping the
// step-by-step preamble), so the exact wording here is part of the benchmark
// identity and is locked by tests.

#include <string>

#include "codesim/value.hpp"

namespace codesim::phrases {

inline std::string question_final_variable(const std::string& var_name) {
    return "Think step by step and then reply with the numerical value " + var_name +
           " has at the end of the computation.";
}

inline std::string question_function_output(const std::string& input_render) {
    return "Think step by step and then reply with the output of the function for " +
           input_render + ".";
}

inline std::string question_good_exchange(const std::string& agent, const std::string& good) {
    return "Think step by step and then reply with the number of " + good + " " + agent +
           " has at the end of the exchange.";
}

// Rendering of the input slot: "n=10" for scalar function arguments, the
// Python list literal for vector arguments.
inline std::string input_render_scalar(const BigInt& n) { return "n=" + to_string(n); }

inline std::string input_render_vector(const Value& v) { return v.render(); }

inline std::string input_render_for(const Value& v) {
    return v.is_list() ? input_render_vector(v) : input_render_scalar(v.as_int());
}

}  // namespace codesim::phrases
