#include "tempconf/order_stats.hpp"

#include "tempconf/errors.hpp"

#include <algorithm>
#include <cmath>

namespace tempconf {

std::size_t rank_above(double p, std::size_t n) noexcept {
    if (n == 0) return 0;
    const double x = p * static_cast<double>(n);
    const double k = std::ceil(x - 1e-12 * std::max(1.0, std::fabs(x)));
    if (!(k >= 1.0)) return 1;
    if (k >= static_cast<double>(n)) return n;
    return static_cast<std::size_t>(k);
}

double select_order_statistic(std::vector<double>& values, std::size_t k) {
    if (values.empty()) throw EmptyInputError("order statistic of an empty set");
    if (k < 1 || k > values.size()) throw PreconditionError("order statistic rank out of range");
    const auto nth = values.begin() + static_cast<std::ptrdiff_t>(k - 1);
    std::nth_element(values.begin(), nth, values.end());
    return *nth;
}

double empirical_quantile(std::span<const double> values, double p) {
    std::vector<double> copy(values.begin(), values.end());
    return select_order_statistic(copy, rank_above(p, copy.size()));
}

}  // namespace tempconf
