#pragma once

// Seeded generators for synthetic return series. Every generator is a pure
// function of its parameters and seed; draws come from CounterRng (Philox4x32-10)
// with the inverse-CDF normal transform.

#include "tempconf/benchmarks.hpp"
#include "tempconf/data.hpp"

#include <cstdint>
#include <vector>

namespace tempconf {

struct RegimeSegment {
    std::size_t length = 0;
    double volatility = 1.0;
    double mean = 0.0;
};

struct RegimeSpec {
    std::vector<RegimeSegment> segments;

    // Throws PreconditionError for an empty spec, zero total length or vol <= 0.
    void validate() const;
    std::size_t total_length() const noexcept;
};

ReturnSeries gen_iid_gaussian(std::size_t n, double mean, double sd, std::uint64_t seed,
                              ReturnUnits units = ReturnUnits::percent);

// r_t = sigma_t z_t, sigma_1^2 = omega / (1 - alpha - beta).
ReturnSeries gen_garch(std::size_t n, const GarchParams& params, std::uint64_t seed,
                       ReturnUnits units = ReturnUnits::percent);

ReturnSeries gen_regime_shift(const RegimeSpec& spec, std::uint64_t seed,
                              ReturnUnits units = ReturnUnits::percent);

}  // namespace tempconf
