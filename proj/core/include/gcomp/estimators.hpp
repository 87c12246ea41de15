#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gcomp/draw.hpp"
#include "gcomp/interpolation.hpp"
#include "gcomp/model.hpp"
#include "gcomp/sampling.hpp"
#include "gcomp/vector_set.hpp"

namespace gcomp {

enum class DerivativeRoute { Standard, Computed };

// The standard route divides by sqrt(t) and sqrt(1-t) per draw; it is only
// evaluated on [kStandardWindow, 1 - kStandardWindow].
inline constexpr double kStandardWindow = 0.01;

// Per-draw values of the interpolating functional and its t-derivative.
class DrawKernel {
 public:
  DrawKernel(const VectorSet& set, const ModelParams& params);

  const ModelParams& params() const { return params_; }
  std::size_t dim() const { return n_; }

  // logZ / (beta sqrt(n)) for Spherical/General, exp(c3 logZ) for Lifted.
  double psi(const InterpolationState& st) const;

  // Exact t-derivative of psi(st) for this draw (chain rule through B_i,
  // the sqrt(t) u4 term and the sqrt(1-t) u3 term). Requires 0 < t < 1.
  double dpsi_standard(const ReplicationDraw& draw, const InterpolationState& st, std::vector<double>& scratch) const;

  // Pairwise form after Gaussian integration by parts:
  //   -(beta / (2 sqrt n)) sum_{i,p} w_i w_p kappa_ip (1 - rho_ip)
  //   -(beta^2 c3 (1-c3) / 2) sum_{i,p} A_i A_p Z^(c3-2) kappa_ip (1 - rho_ip)   (Lifted)
  double dpsi_computed(const InterpolationState& st, std::vector<double>& scratch) const;

 private:
  ModelParams params_;
  std::size_t n_;
  std::vector<double> kappa_;
};

// Evaluates, at every grid point t, the columns
//   0: psi, 1: standard derivative at clamp(t, 0.01, 0.99), 2: computed derivative.
class CurveFunctional : public DrawFunctional {
 public:
  enum Column : std::size_t { kPsi = 0, kStandard = 1, kComputed = 2, kWidth = 3 };

  CurveFunctional(const VectorSet& set, const ModelParams& params) : kernel_(set, params) {}

  std::size_t width() const override { return kWidth; }
  void evaluate(const ReplicationDraw& draw, std::span<const double> grid, std::span<double> out) const override;

 private:
  DrawKernel kernel_;
};

Estimate psi_direct(const VectorSet& set, const ModelParams& params, double t, const SeedPlan& plan,
                    RunOptions options = {});
// Throws EndpointSingularityError outside [0.01, 0.99].
Estimate dpsi_standard(const VectorSet& set, const ModelParams& params, double t, const SeedPlan& plan,
                       RunOptions options = {});
Estimate dpsi_computed(const VectorSet& set, const ModelParams& params, double t, const SeedPlan& plan,
                       RunOptions options = {});

// Throws EndpointSingularityError when the standard route cannot be used at t.
void check_standard_window(double t);

}  // namespace gcomp
