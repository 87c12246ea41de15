#pragma once

#include <cstddef>
#include <span>
#include <string>

namespace gcomp::detail {

inline double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) s += a[k] * b[k];
  return s;
}

// Sum whose result depends only on the multiset of values: the terms are
// sorted by (|x|, x) in place and accumulated in that order. Used for sums
// over set elements so that permuting the set does not change any bit.
double canonical_sum(std::span<double> terms);

// log(sum exp(x)) with max shift, accumulated with canonical_sum.
// `scratch` must have the same length as `x`.
double log_sum_exp(std::span<const double> x, std::span<double> scratch);

// Shortest round-trip decimal representation, locale independent.
std::string format_double(double v);

}  // namespace gcomp::detail
