#include "tempconf/random.hpp"

#include "tempconf/normal.hpp"

namespace tempconf {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

}  // namespace

PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key) noexcept {
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, ctr[0], hi0, lo0);
        mulhilo(kMul1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
      stream_(stream) {}

std::uint64_t CounterRng::next_u64() noexcept {
    const std::uint64_t slot = index_ & 1u;
    if (slot == 0) {
        const std::uint64_t block = index_ >> 1;
        const PhiloxCounter out = philox4x32_10(
            {static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32),
             static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)},
            key_);
        block_[0] = (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
        block_[1] = (static_cast<std::uint64_t>(out[3]) << 32) | out[2];
    }
    ++index_;
    return block_[slot];
}

double CounterRng::uniform() noexcept {
    // (k + 0.5) / 2^53 for k in [0, 2^53): never 0 or 1.
    const std::uint64_t k = next_u64() >> 11;
    return (static_cast<double>(k) + 0.5) * 0x1.0p-53;
}

double CounterRng::normal() noexcept { return normal_quantile(uniform()); }

std::uint64_t CounterRng::below(std::uint64_t n) noexcept {
    const std::uint64_t limit = max() - max() % n;
    std::uint64_t x;
    do {
        x = next_u64();
    } while (x >= limit);
    return x % n;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
    const PhiloxCounter out = philox4x32_10(
        {static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), 0x5eedu, 0u},
        {static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32)});
    return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

}  // namespace tempconf
