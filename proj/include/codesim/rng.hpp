#pragma once

#include <cstdint>
#include <vector>

#include "codesim/hashing.hpp"

namespace codesim {

// splitmix64. Chosen over std::mt19937_64 + distributions because the
// distribution results must be bit-identical across platforms and standard
// library versions; <random> distributions are implementation-defined.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform over [lo, hi], inclusive. Rejection sampling keeps it unbiased.
    std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
        std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        if (span == 0) return static_cast<std::int64_t>(next_u64()); // full range
        std::uint64_t limit = ~0ull - (~0ull % span);
        std::uint64_t v;
        do {
            v = next_u64();
        } while (v >= limit);
        return lo + static_cast<std::int64_t>(v % span);
    }

    std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform(0, static_cast<std::int64_t>(n) - 1)); }

    bool chance(double p) {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53 < p;
    }

    template <typename T>
    const T& pick(const std::vector<T>& items) {
        return items[index(items.size())];
    }

    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::swap(items[i - 1], items[index(i)]);
        }
    }

    // Independent child stream; tag keeps sibling streams decorrelated.
    Rng fork(std::string_view tag) {
        HashWriter w;
        w.add_u64(next_u64()).add(tag);
        return Rng(w.value());
    }

  private:
    std::uint64_t state_;
};

} // namespace codesim
