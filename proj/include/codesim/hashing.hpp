#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace codesim {

// FNV-1a, 64-bit. Used for instance ids, cache keys and seed derivation, so it
// must produce identical values on every platform and across runs.
inline constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ull;
inline constexpr std::uint64_t kFnvPrime = 0x100000001b3ull;

constexpr std::uint64_t fnv1a64(std::string_view data, std::uint64_t h = kFnvOffset) {
    for (unsigned char c : data) {
        h ^= c;
        h *= kFnvPrime;
    }
    return h;
}

// Accumulates heterogeneous fields into one stable hash. Every field is
// length-prefixed so that ("ab","c") and ("a","bc") cannot collide.
class HashWriter {
  public:
    HashWriter& add(std::string_view s) {
        add_u64(s.size());
        hash_ = fnv1a64(s, hash_);
        return *this;
    }
    HashWriter& add_u64(std::uint64_t v) {
        char bytes[8];
        for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xff);
        hash_ = fnv1a64(std::string_view(bytes, 8), hash_);
        return *this;
    }
    HashWriter& add_i64(std::int64_t v) { return add_u64(static_cast<std::uint64_t>(v)); }

    std::uint64_t value() const { return hash_; }

  private:
    std::uint64_t hash_ = kFnvOffset;
};

inline std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[v & 0xf];
        v >>= 4;
    }
    return out;
}

} // namespace codesim
