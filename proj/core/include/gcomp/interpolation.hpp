#pragma once

#include <cstddef>
#include <vector>

#include "gcomp/draw.hpp"
#include "gcomp/model.hpp"
#include "gcomp/vector_set.hpp"

namespace gcomp {

// Per-draw kernel at interpolation parameter t:
//   v_i   = sqrt(t) u1[i] + sqrt(1-t) u2,   B_i = ||v_i||
//   logA_i = beta_i (s B_i + sqrt(1-t) u3_i)                 (Spherical)
//   logA_i = beta_i (s B_i + sqrt(t) u4 + sqrt(1-t) u3_i)    (General, Lifted)
//   logZ = log sum_i A_i,  w_i = A_i / Z.
struct InterpolationState {
  double t = 0.0;
  std::size_t l = 0;
  std::size_t m = 0;
  std::vector<double> v;  // l x m row-major
  std::vector<double> B;
  std::vector<double> logA;
  double logZ = 0.0;
  std::vector<double> w;
  std::vector<double> scratch;

  const double* vec(std::size_t i) const { return v.data() + i * m; }

  // Cosine between v_i and v_p, clamped to [-1, 1]. Throws
  // DegenerateDrawError if either norm is zero.
  double overlap(std::size_t i, std::size_t p) const;
};

// Throws DomainError if t is outside [0, 1].
InterpolationState interpolation_state(const ReplicationDraw& draw, const ModelParams& params, double t);

// Same as above, reusing the buffers of `state`.
void update_state(InterpolationState& state, const ReplicationDraw& draw, const ModelParams& params, double t);

double mixed_overlap(const ReplicationDraw& draw, double t, std::size_t i, std::size_t p);

}  // namespace gcomp
