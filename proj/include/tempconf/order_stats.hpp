#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tempconf {

// 1-based nearest-rank-above index ceil(p * n), clamped to [1, n]. A relative
// slack of 1e-12 absorbs representation error in p (0.95 * 100 is not exactly 95
// in binary floating point).
std::size_t rank_above(double p, std::size_t n) noexcept;

// k-th smallest value (1-based). Reorders `values`.
double select_order_statistic(std::vector<double>& values, std::size_t k);

// Order statistic at rank_above(p, n) of a copy of `values`. Throws EmptyInputError.
double empirical_quantile(std::span<const double> values, double p);

}  // namespace tempconf
