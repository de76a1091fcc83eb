#pragma once

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). The output for a
// given (key, counter) pair is fixed, so every draw is a pure function of the
// seed, the stream id and the draw index. Version-pinned: changing anything here
// changes every synthetic series and acceptance number.

#include <array>
#include <cstdint>

namespace tempconf {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key) noexcept;

// Sequential view over the Philox stream keyed by `seed`. `stream` occupies the
// upper half of the counter so distinct streams never overlap.
class CounterRng {
public:
    using result_type = std::uint64_t;

    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept;

    std::uint64_t next_u64() noexcept;
    // Uniform on the open interval (0, 1) with 53-bit resolution.
    double uniform() noexcept;
    // Standard normal by inverse-CDF transform of uniform().
    double normal() noexcept;
    // Integer in [0, n), n > 0, by rejection (unbiased).
    std::uint64_t below(std::uint64_t n) noexcept;

    std::uint64_t draws() const noexcept { return index_; }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return ~result_type{0}; }
    result_type operator()() noexcept { return next_u64(); }

private:
    PhiloxKey key_;
    std::uint64_t stream_;
    std::uint64_t index_ = 0;  // number of u64 draws so far
    std::array<std::uint64_t, 2> block_{};
};

// Deterministic child seed for parallel workers (sweep cells, trials).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept;

}  // namespace tempconf
