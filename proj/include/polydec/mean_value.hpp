#pragma once

#include <cstdint>

namespace polydec {

/// #{(a, b) in [1, N]^k x [1, N]^k : sum a_i = sum b_i, sum a_i^d = sum b_i^d}
/// by meet in the middle: sort the k-fold power-sum pairs and add squared
/// multiplicities. N <= 128 and k in {2, 3}; BudgetExceeded otherwise or when
/// k N^d does not fit in 62 bits.
std::uint64_t mean_value_count(int N, int d, int k);

}  // namespace polydec
