#pragma once

#include <bit>
#include <cstdint>
#include <type_traits>
#include <vector>

namespace cdmacap::detail {

struct NoStateVisitor {};

// Gray-code walk over the sign states with indices in [begin, end).
// The state at index i is x_j = 2 bit_j(gray(i)) - 1 with
// gray(i) = i ^ (i >> 1); stepping to index i+1 flips exactly bit
// countr_zero(i+1).
//
// fields[k] holds the full sum F_k = sum_i corr[k][i] x_i *including* the
// diagonal corr[k][k] = chips, so one flip of x_j updates every F_k
// uniformly by 2 x_j corr[j][k] (self term included).  A state counts as
// valid when x_k F_k >= min_full_field for all k; callers shift the
// self-excluded threshold up by +chips to compensate for the diagonal.
// Both inner loops are branch-free over k so -O3 can vectorize them.
//
// The optional visitor observes (index, x, F) before each validity check;
// the default instantiation compiles to a pure counting loop.
template <class Visitor = NoStateVisitor>
uint64_t enumerate_gray_range(const int32_t* corr, int users,
                              int32_t min_full_field, uint64_t begin,
                              uint64_t end, Visitor&& visit = Visitor{}) {
  if (begin >= end) return 0;
  const int n = users;
  std::vector<int32_t> x(static_cast<size_t>(n));
  std::vector<int32_t> f(static_cast<size_t>(n));

  const uint64_t g = begin ^ (begin >> 1);
  for (int j = 0; j < n; ++j) x[j] = (g >> j) & 1u ? 1 : -1;
  for (int k = 0; k < n; ++k) {
    int32_t acc = 0;
    const int32_t* row = corr + static_cast<size_t>(k) * n;
    for (int j = 0; j < n; ++j) acc += row[j] * x[j];
    f[k] = acc;
  }

  uint64_t count = 0;
  for (uint64_t idx = begin;; ++idx) {
    if constexpr (!std::is_same_v<std::decay_t<Visitor>, NoStateVisitor>) {
      visit(idx, static_cast<const int32_t*>(x.data()),
            static_cast<const int32_t*>(f.data()));
    }
    int32_t violated = 0;
    for (int k = 0; k < n; ++k) violated += (x[k] * f[k] < min_full_field);
    count += (violated == 0);

    const uint64_t next = idx + 1;
    if (next == end) break;
    const int j = std::countr_zero(next);
    const int32_t xj = -x[j];
    x[j] = xj;
    const int32_t d = 2 * xj;
    const int32_t* row = corr + static_cast<size_t>(j) * n;
    for (int k = 0; k < n; ++k) f[k] += d * row[k];
  }
  return count;
}

}  // namespace cdmacap::detail
