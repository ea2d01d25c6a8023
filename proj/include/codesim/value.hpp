#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

#include "codesim/errors.hpp"

namespace codesim {

// Arbitrary-precision signed integer. Python3 parity requires bignums: a
// repeated `*= -2` overflows 64 bits after a few dozen iterations, and GMP's
// bitwise ops use infinite two's complement exactly like Python's & and |.
using BigInt = mpz_class;

inline std::string to_string(const BigInt& v) { return v.get_str(); }

inline BigInt bigint_pow(const BigInt& base, unsigned long exp) {
    BigInt out;
    mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exp);
    return out;
}

inline bool fits_int64(const BigInt& v) { return v.fits_slong_p(); }

inline std::int64_t to_int64(const BigInt& v) { return static_cast<std::int64_t>(v.get_si()); }

// A ground truth or an extracted answer: one integer, a tuple of integers, or
// a boolean (the primality corpus returns True/False).
class Value {
  public:
    enum class Kind { Int, List, Bool };

    Value() : data_(BigInt(0)) {}

    static Value integer(BigInt v) { return Value(std::move(v)); }
    static Value integer(std::int64_t v) { return Value(BigInt(static_cast<long>(v))); }
    static Value list(std::vector<BigInt> v) { return Value(std::move(v)); }
    static Value boolean(bool v) { Value out; out.data_ = v; return out; }

    Kind kind() const { return static_cast<Kind>(data_.index()); }
    bool is_int() const { return kind() == Kind::Int; }
    bool is_list() const { return kind() == Kind::List; }
    bool is_bool() const { return kind() == Kind::Bool; }

    const BigInt& as_int() const { return std::get<BigInt>(data_); }
    const std::vector<BigInt>& as_list() const { return std::get<std::vector<BigInt>>(data_); }
    bool as_bool() const { return std::get<bool>(data_); }

    bool operator==(const Value& other) const { return data_ == other.data_; }
    bool operator!=(const Value& other) const { return !(*this == other); }

    // Python repr of the value: "6", "[19, 19, 11, 10, 1024]", "True".
    std::string render() const {
        switch (kind()) {
        case Kind::Int:
            return to_string(as_int());
        case Kind::Bool:
            return as_bool() ? "True" : "False";
        case Kind::List: {
            std::string out = "[";
            const auto& xs = as_list();
            for (std::size_t i = 0; i < xs.size(); ++i) {
                if (i) out += ", ";
                out += to_string(xs[i]);
            }
            out += "]";
            return out;
        }
        }
        return {};
    }

    nlohmann::json to_json() const {
        switch (kind()) {
        case Kind::Int:
            return int_to_json(as_int());
        case Kind::Bool:
            return as_bool();
        case Kind::List: {
            nlohmann::json arr = nlohmann::json::array();
            for (const auto& x : as_list()) arr.push_back(int_to_json(x));
            return arr;
        }
        }
        return nullptr;
    }

    static Value from_json(const nlohmann::json& j) {
        if (j.is_boolean()) return boolean(j.get<bool>());
        if (j.is_array()) {
            std::vector<BigInt> xs;
            xs.reserve(j.size());
            for (const auto& e : j) xs.push_back(json_to_int(e));
            return list(std::move(xs));
        }
        return integer(json_to_int(j));
    }

  private:
    explicit Value(BigInt v) : data_(std::move(v)) {}
    explicit Value(std::vector<BigInt> v) : data_(std::move(v)) {}

    // Keep JSON numbers exact: fall back to decimal strings outside int64.
    static nlohmann::json int_to_json(const BigInt& v) {
        if (fits_int64(v)) return to_int64(v);
        return to_string(v);
    }
    static BigInt json_to_int(const nlohmann::json& j) {
        if (j.is_number_integer()) return BigInt(static_cast<long>(j.get<std::int64_t>()));
        if (j.is_string()) return BigInt(j.get<std::string>());
        throw Error("value: expected integer or decimal string in JSON");
    }

    std::variant<BigInt, std::vector<BigInt>, bool> data_;
};

} // namespace codesim
