#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace shapim {

/// Exact solution concepts for a game given as a table of coalition values,
/// indexed by bitmask over `players` players (bit i set = player i in C).
///
/// Shapley: averages marginals over all players! orderings.
/// Banzhaf: averages marginals over all 2^(players-1) coalitions of others.
std::vector<double> shapley_by_permutations(std::span<const double> value_by_mask,
                                            std::size_t players);
std::vector<double> banzhaf_by_subsets(std::span<const double> value_by_mask,
                                       std::size_t players);

}  // namespace shapim
