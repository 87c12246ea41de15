#pragma once

#include <cstddef>
#include <vector>

#include "gcomp/rng.hpp"
#include "gcomp/vector_set.hpp"

namespace gcomp {

// Raw Gaussian randomness of one replication, in generation order:
// G (m x n, row-major), u2 (m), h (n), u4.
struct RawDraw {
  std::size_t m = 0;
  std::size_t n = 0;
  std::vector<double> G;
  std::vector<double> u2;
  std::vector<double> h;
  double u4 = 0.0;
};

RawDraw draw_raw(std::size_t m, std::size_t n, NormalStream& stream);

// Projected form used by every estimator:
// u1[i][j] = (G xhat_i)_j, u3[i] = h . xhat_i with xhat_i = x_i / ||x_i||.
struct ReplicationDraw {
  std::size_t l = 0;
  std::size_t m = 0;
  std::vector<double> u1;  // l x m row-major
  std::vector<double> u2;
  std::vector<double> u3;
  double u4 = 0.0;

  const double* row(std::size_t i) const { return u1.data() + i * m; }
};

ReplicationDraw project(const RawDraw& raw, const VectorSet& set);

// Generates the raw draw from `stream` and projects it onto `set`.
ReplicationDraw make_draw(const VectorSet& set, std::size_t m, NormalStream& stream);

}  // namespace gcomp
