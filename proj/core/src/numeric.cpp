#include "gcomp/numeric.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

namespace gcomp::detail {

double canonical_sum(std::span<double> terms) {
  std::sort(terms.begin(), terms.end(), [](double a, double b) {
    const double fa = std::abs(a);
    const double fb = std::abs(b);
    return fa < fb || (fa == fb && a < b);
  });
  double s = 0.0;
  for (double v : terms) s += v;
  return s;
}

double log_sum_exp(std::span<const double> x, std::span<double> scratch) {
  double mx = -std::numeric_limits<double>::infinity();
  for (double v : x) mx = std::max(mx, v);
  for (std::size_t i = 0; i < x.size(); ++i) scratch[i] = std::exp(x[i] - mx);
  return mx + std::log(canonical_sum(scratch.first(x.size())));
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace gcomp::detail
