#include <algorithm>
#include <vector>

#include "crnkit/machines.hpp"

namespace crnkit {

Count factorial(unsigned k) {
  Count f = 1;
  for (unsigned i = 2; i <= k; ++i) f *= i;
  return f;
}

Count lehmer_rank(const std::vector<unsigned>& perm) {
  const std::size_t k = perm.size();
  std::vector<bool> seen(k + 1, false);
  for (unsigned v : perm) {
    if (v < 1 || v > k || seen[v]) throw NotAPermutation("not a permutation of 1.." + std::to_string(k));
    seen[v] = true;
  }
  Count r = 0;
  for (std::size_t i = 0; i < k; ++i) {
    unsigned smaller = 0;
    for (std::size_t j = i + 1; j < k; ++j) smaller += perm[j] < perm[i] ? 1 : 0;
    r = r * static_cast<unsigned>(k - i) + smaller;
  }
  return r;
}

std::vector<unsigned> lehmer_unrank(const Count& r, unsigned k) {
  if (r < 0 || r >= factorial(k)) {
    throw RankOutOfRange("rank " + to_string(r) + " out of range for k = " + std::to_string(k));
  }
  std::vector<unsigned> digits(k);
  Count rest = r;
  for (unsigned i = 1; i <= k; ++i) {
    digits[k - i] = static_cast<unsigned>(rest % i);
    rest /= i;
  }
  std::vector<unsigned> pool(k);
  for (unsigned i = 0; i < k; ++i) pool[i] = i + 1;
  std::vector<unsigned> out;
  out.reserve(k);
  for (unsigned d : digits) {
    out.push_back(pool[d]);
    pool.erase(pool.begin() + d);
  }
  return out;
}

unsigned min_k_for(const Count& x) {
  unsigned k = 1;
  Count f = 1;
  while (f <= x) f *= ++k;
  return k;
}

Count encode_counts_to_m(const std::vector<unsigned>& counts) {
  Count m = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] == 0) throw ZeroCount("count " + std::to_string(i + 1) + " is zero");
    if (i > 0) m <<= 1;
    for (unsigned j = 0; j < counts[i]; ++j) m = (m << 1) | 1;
  }
  return m;
}

}  // namespace crnkit
