#include "mde/ranking.hpp"

#include <algorithm>
#include <numeric>

namespace mde {

std::vector<std::int64_t> doubled_average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<std::int64_t> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    // positions i..j (0-based) share rank ((i+1) + (j+1)) / 2
    const auto doubled = static_cast<std::int64_t>(i + j + 2);
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = doubled;
    i = j + 1;
  }
  return ranks;
}

std::vector<double> average_ranks(std::span<const double> values) {
  const auto doubled = doubled_average_ranks(values);
  std::vector<double> out(doubled.size());
  std::transform(doubled.begin(), doubled.end(), out.begin(),
                 [](std::int64_t r) { return static_cast<double>(r) / 2.0; });
  return out;
}

}  // namespace mde
