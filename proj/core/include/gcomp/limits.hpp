#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "gcomp/sampling.hpp"
#include "gcomp/vector_set.hpp"

namespace gcomp {

enum class Direction { LhsLeqRhs, LhsGeqRhs };

struct BoundReport {
  std::string name;
  Estimate lhs;
  Estimate rhs;
  Direction direction = Direction::LhsLeqRhs;
  double margin = 0.0;       // rhs - lhs for LhsLeqRhs, lhs - rhs for LhsGeqRhs
  double combined_se = 0.0;  // sqrt(se_lhs^2 + se_rhs^2)
  bool pass = false;         // margin >= -3 * combined_se
};

BoundReport make_report(std::string name, const Estimate& lhs, const Estimate& rhs, Direction direction);

// Per-draw exponent of the large-beta limit:
//   e_i(t) = s B_i + sqrt(1-t) u3_i                              (unit form)
//   e_i(t) = ||x_i|| (s B_i + sqrt(t) u4 + sqrt(1-t) u3_i)        (general form)
// interpolated_max estimates E max_i e_i(t) / sqrt(n).
Estimate interpolated_max(const VectorSet& set, std::size_t m, int s, double t, const SeedPlan& plan, bool general,
                          RunOptions options = {});
std::vector<Estimate> interpolated_max(const VectorSet& set, std::size_t m, int s, std::span<const double> ts,
                                       const SeedPlan& plan, bool general, RunOptions options = {});

// s = +1: E max e(1)/sqrt n <= E max e(0)/sqrt n.
// s = -1: E min_i(||G x_i|| - ||x_i|| u4)/sqrt n >= E min_i(||x_i|| ||u2|| - h.x_i)/sqrt n
//         (u4 term only in the general form).
BoundReport slepian_gordon_check(const VectorSet& set, std::size_t m, int s, const SeedPlan& plan, bool general,
                                 RunOptions options = {});

// log E exp(c3s max_i e_i(t)) with e_i in the general form, computed by
// log-mean-exp with a max shift over the replications.
struct LogEstimate {
  double log_mean = 0.0;
  double log_std_error = 0.0;  // delta method: se / mean
  Estimate raw;                // E exp(...) itself
  Estimate as_estimate() const { return {log_mean, log_std_error, raw.n, raw.skipped}; }
};

// Mean of exp(x) over the values, in log space.
LogEstimate log_mean_exp(std::span<const double> x);

LogEstimate lifted_exp_functional(const VectorSet& set, std::size_t m, int s, double c3s, double t,
                                  const SeedPlan& plan, RunOptions options = {});
std::vector<LogEstimate> lifted_exp_functional(const VectorSet& set, std::size_t m, int s, double c3s,
                                               std::span<const double> ts, const SeedPlan& plan,
                                               RunOptions options = {});

// log E exp(c3s max e(1)) <= log E exp(c3s max e(0)), for either sign.
BoundReport lifted_comparison_check(const VectorSet& set, std::size_t m, int s, double c3s, const SeedPlan& plan,
                                    RunOptions options = {});

// (log(psi_star) / (beta c3) - beta c3 / 2) / sqrt(n)
double adjusted_value(double psi_star, double beta, double c3, std::size_t n);

// Unit sets only:
//   E max_i s ||G x_i||  <=  (1/c3s) log E exp(c3s max_i (s ||u2|| + h.x_i)) - c3s/2.
BoundReport chain_bound_check(const VectorSet& set, std::size_t m, int s, double c3s, const SeedPlan& plan,
                              RunOptions options = {});

}  // namespace gcomp
