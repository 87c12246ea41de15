#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "gcomp/model.hpp"
#include "gcomp/sampling.hpp"
#include "gcomp/vector_set.hpp"

namespace gcomp {

// Uniform grid start, start+step, ..., up to stop (inclusive within 1e-9).
std::vector<double> make_grid(double start, double stop, double step);

struct CurveResult {
  std::vector<double> t;
  std::vector<Estimate> psi_direct;
  std::vector<Estimate> dpsi_standard;  // evaluated at clamp(t, 0.01, 0.99)
  std::vector<Estimate> dpsi_computed;
  // psi(0) + composite trapezoid of the derivative estimates. Integration is
  // done per replication, so the errors include the correlation between
  // nodes induced by common random numbers.
  std::vector<Estimate> psi_from_standard;
  std::vector<Estimate> psi_from_computed;
  // Trapezoid bias bound (t - t0) * max|second difference| / 12 per route.
  std::vector<double> quad_error_standard;
  std::vector<double> quad_error_computed;
  std::size_t replications = 0;
  std::size_t skipped = 0;
};

// Both routes on one set of draws. The grid must start at 0 and be uniform
// with step <= 0.1 and end <= 1.
CurveResult integrate_curve(const VectorSet& set, const ModelParams& params, const std::vector<double>& grid,
                            const SeedPlan& plan, RunOptions options = {});

enum class Monotonicity { Decreasing, Increasing };

struct MonotonicityViolation {
  std::size_t index;  // pair (index, index + 1)
  double margin;
};

struct MonotonicityReport {
  Monotonicity expected = Monotonicity::Decreasing;
  bool pass = true;
  // Smallest over adjacent pairs of 3 * combined_se - (step against the
  // expected direction); negative means a violation.
  double worst_margin = 0.0;
  std::size_t worst_index = 0;
  std::vector<MonotonicityViolation> violations;
};

MonotonicityReport monotonicity_check(const std::vector<Estimate>& psi, Monotonicity expected);
MonotonicityReport monotonicity_check(const CurveResult& curve, Monotonicity expected);

// Largest |psi_from_standard - psi_from_computed| minus its allowance
// 3 * combined_se + both trapezoid bounds; <= 0 means consistent.
double route_consistency_excess(const CurveResult& curve);

}  // namespace gcomp
