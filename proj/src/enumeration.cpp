#include "shapim/enumeration.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace shapim {

std::vector<double> shapley_by_permutations(std::span<const double> value_by_mask,
                                            std::size_t players) {
  if (value_by_mask.size() != (std::size_t{1} << players)) {
    throw std::invalid_argument("value table size must be 2^players");
  }
  std::vector<double> total(players, 0.0);
  std::vector<std::size_t> order(players);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::uint64_t count = 0;
  do {
    std::uint64_t mask = 0;
    for (std::size_t p : order) {
      const std::uint64_t next = mask | (std::uint64_t{1} << p);
      total[p] += value_by_mask[next] - value_by_mask[mask];
      mask = next;
    }
    ++count;
  } while (std::next_permutation(order.begin(), order.end()));
  for (double& t : total) t /= static_cast<double>(count);
  return total;
}

std::vector<double> banzhaf_by_subsets(std::span<const double> value_by_mask,
                                       std::size_t players) {
  if (value_by_mask.size() != (std::size_t{1} << players)) {
    throw std::invalid_argument("value table size must be 2^players");
  }
  std::vector<double> total(players, 0.0);
  for (std::size_t p = 0; p < players; ++p) {
    const std::uint64_t bit = std::uint64_t{1} << p;
    for (std::uint64_t mask = 0; mask < value_by_mask.size(); ++mask) {
      if (mask & bit) continue;
      total[p] += value_by_mask[mask | bit] - value_by_mask[mask];
    }
    if (players > 1) total[p] /= static_cast<double>(std::uint64_t{1} << (players - 1));
  }
  return total;
}

}  // namespace shapim
