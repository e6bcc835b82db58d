#include "polydec/mean_value.hpp"

#include <algorithm>
#include <utility>
#include <vector>

#include "polydec/errors.hpp"

namespace polydec {

std::uint64_t mean_value_count(int N, int d, int k) {
  if (N < 1 || d < 1) throw PreconditionViolated("mean_value_count needs N >= 1, d >= 1");
  if (N > 128 || (k != 2 && k != 3)) throw BudgetExceeded("mean_value_count needs N <= 128, k in {2, 3}");
  std::vector<std::int64_t> pw(static_cast<std::size_t>(N) + 1);
  const __int128 limit = static_cast<__int128>(1) << 62;
  for (int a = 1; a <= N; ++a) {
    __int128 v = 1;
    for (int e = 0; e < d; ++e) {
      v *= a;
      if (v * k >= limit) throw BudgetExceeded("power sums overflow 62 bits");
    }
    pw[static_cast<std::size_t>(a)] = static_cast<std::int64_t>(v);
  }
  std::vector<std::pair<std::int64_t, std::int64_t>> sums{{0, 0}};
  for (int step = 0; step < k; ++step) {
    std::vector<std::pair<std::int64_t, std::int64_t>> next;
    next.reserve(sums.size() * static_cast<std::size_t>(N));
    for (const auto& [s1, sd] : sums)
      for (int a = 1; a <= N; ++a) next.emplace_back(s1 + a, sd + pw[static_cast<std::size_t>(a)]);
    sums.swap(next);
  }
  std::sort(sums.begin(), sums.end());
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < sums.size();) {
    std::size_t j = i;
    while (j < sums.size() && sums[j] == sums[i]) ++j;
    const auto m = static_cast<std::uint64_t>(j - i);
    total += m * m;
    i = j;
  }
  return total;
}

}  // namespace polydec
