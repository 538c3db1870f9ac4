#pragma once

#include <cstdint>
#include <vector>

namespace simlab {

// Splittable deterministic generator. Every seeded run threads a single
// 64-bit seed through splits, so results are reproducible regardless of
// evaluation order or worker count.
class SplitRng {
public:
    explicit SplitRng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        // splitmix64
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, n). n must be positive.
    std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

    int next_int(int lo, int hi_inclusive) {
        return lo + static_cast<int>(next_below(
                        static_cast<std::uint64_t>(hi_inclusive - lo + 1)));
    }

    bool next_bool() { return (next_u64() & 1) != 0; }

    // Independent child stream; children with distinct tags never collide
    // with each other or with the parent.
    SplitRng split(std::uint64_t tag) {
        std::uint64_t z = state_ ^ (0x9e3779b97f4a7c15ULL * (tag + 0x632be59bd9b4e019ULL));
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return SplitRng(z ^ (z >> 31));
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = next_below(i);
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::uint64_t state_;
};

}  // namespace simlab
