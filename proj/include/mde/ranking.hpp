#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace mde {

/// 1-based ranks, ascending, with tied values sharing the mean of their
/// positions. Returned doubled so half ranks stay integral.
std::vector<std::int64_t> doubled_average_ranks(std::span<const double> values);

/// Same ranking as plain doubles.
std::vector<double> average_ranks(std::span<const double> values);

}  // namespace mde
