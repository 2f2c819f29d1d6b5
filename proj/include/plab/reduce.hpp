#pragma once

#include <cstdint>

namespace plab {

inline constexpr std::int64_t kReduceBlock = 512;
inline constexpr std::int64_t kReduceGrain = 1 << 13;

// Fixed-tree pairwise summation: ranges split at their midpoint down to
// sequential blocks of kReduceBlock terms. The tree depends only on the
// index range, never on scheduling, so results are reproducible to the bit.
template <class Term>
double pairwise_sum_serial(std::int64_t begin, std::int64_t end, const Term& term) {
  const std::int64_t n = end - begin;
  if (n <= 0) return 0.0;
  if (n <= kReduceBlock) {
    double s = 0.0;
    for (std::int64_t k = begin; k < end; ++k) s += term(k);
    return s;
  }
  const std::int64_t mid = begin + n / 2;
  return pairwise_sum_serial(begin, mid, term) +
         pairwise_sum_serial(mid, end, term);
}

namespace detail {

template <class Term>
double pairwise_sum_task(std::int64_t begin, std::int64_t end, const Term& term) {
  const std::int64_t n = end - begin;
  if (n <= kReduceGrain) return pairwise_sum_serial(begin, end, term);
  const std::int64_t mid = begin + n / 2;
  double left = 0.0;
#pragma omp task shared(left)
  left = pairwise_sum_task(begin, mid, term);
  const double right = pairwise_sum_task(mid, end, term);
#pragma omp taskwait
  return left + right;
}

}  // namespace detail

// Same tree as pairwise_sum_serial with subtrees run as OpenMP tasks above
// the grain size; bitwise equal to the serial path for any thread count.
template <class Term>
double pairwise_sum(std::int64_t begin, std::int64_t end, const Term& term) {
  if (end - begin <= kReduceGrain) return pairwise_sum_serial(begin, end, term);
  double out = 0.0;
#pragma omp parallel
#pragma omp single
  out = detail::pairwise_sum_task(begin, end, term);
  return out;
}

}  // namespace plab
