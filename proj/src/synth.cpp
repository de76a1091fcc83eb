#include "tempconf/synth.hpp"

#include "tempconf/random.hpp"

#include <cmath>

namespace tempconf {

void RegimeSpec::validate() const {
    if (segments.empty()) throw PreconditionError("regime spec has no segments");
    if (total_length() == 0) throw PreconditionError("regime spec has zero total length");
    for (const auto& s : segments)
        if (!(s.volatility > 0.0)) throw PreconditionError("segment volatility must be positive");
}

std::size_t RegimeSpec::total_length() const noexcept {
    std::size_t n = 0;
    for (const auto& s : segments) n += s.length;
    return n;
}

ReturnSeries gen_iid_gaussian(std::size_t n, double mean, double sd, std::uint64_t seed,
                              ReturnUnits units) {
    if (n == 0) throw PreconditionError("n must be at least 1");
    if (!(sd > 0.0)) throw PreconditionError("sd must be positive");
    CounterRng rng(seed);
    std::vector<double> r(n);
    for (auto& v : r) v = mean + sd * rng.normal();
    return ReturnSeries::from_values(std::move(r), units);
}

ReturnSeries gen_garch(std::size_t n, const GarchParams& params, std::uint64_t seed,
                       ReturnUnits units) {
    params.validate();
    if (n == 0) throw PreconditionError("n must be at least 1");
    CounterRng rng(seed);
    std::vector<double> r(n);
    double var = params.unconditional_variance();
    for (std::size_t t = 0; t < n; ++t) {
        r[t] = std::sqrt(var) * rng.normal();
        var = garch_recursion(params, r[t], var);
    }
    return ReturnSeries::from_values(std::move(r), units);
}

ReturnSeries gen_regime_shift(const RegimeSpec& spec, std::uint64_t seed, ReturnUnits units) {
    spec.validate();
    CounterRng rng(seed);
    std::vector<double> r;
    r.reserve(spec.total_length());
    for (const auto& seg : spec.segments)
        for (std::size_t i = 0; i < seg.length; ++i)
            r.push_back(seg.mean + seg.volatility * rng.normal());
    return ReturnSeries::from_values(std::move(r), units);
}

}  // namespace tempconf
