#include "gcomp/estimators.hpp"

#include <algorithm>
#include <cmath>

#include "gcomp/errors.hpp"
#include "gcomp/numeric.hpp"

namespace gcomp {

DrawKernel::DrawKernel(const VectorSet& set, const ModelParams& params)
    : params_(params), n_(set.dim()), kappa_(kappa_matrix(set, params.variant)) {
  if (params.betas.size() != set.size()) throw ValidationError("model parameters do not match the vector set");
}

double DrawKernel::psi(const InterpolationState& st) const {
  if (params_.variant == Variant::Lifted) return std::exp(params_.c3 * st.logZ);
  return st.logZ / (params_.beta * std::sqrt(static_cast<double>(n_)));
}

double DrawKernel::dpsi_standard(const ReplicationDraw& draw, const InterpolationState& st,
                                 std::vector<double>& scratch) const {
  const double t = st.t;
  if (!(t > 0.0 && t < 1.0)) throw EndpointSingularityError("standard derivative needs 0 < t < 1");
  const std::size_t l = draw.l;
  const std::size_t m = draw.m;
  const double s = params_.s;
  const double cross = std::sqrt((1.0 - t) / t) - std::sqrt(t / (1.0 - t));
  const double u4_term = params_.has_u4() ? draw.u4 / (2.0 * std::sqrt(t)) : 0.0;
  const double u3_scale = 1.0 / (2.0 * std::sqrt(1.0 - t));
  const bool lifted = params_.variant == Variant::Lifted;
  scratch.resize(l);
  for (std::size_t i = 0; i < l; ++i) {
    if (!(st.B[i] > 0.0)) throw DegenerateDrawError("interpolated vector with zero norm");
    const double* u1 = draw.row(i);
    double acc = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double a = u1[j];
      const double b = draw.u2[j];
      acc += a * a - b * b + a * b * cross;
    }
    const double dB = acc / (2.0 * st.B[i]);
    const double dexp = s * dB + u4_term - draw.u3[i] * u3_scale;
    // d logA_i / dt = beta_i * dexp
    const double weight = lifted ? params_.betas[i] * std::exp(st.logA[i] + (params_.c3 - 1.0) * st.logZ)
                                 : st.w[i] * params_.betas[i];
    scratch[i] = weight * dexp;
  }
  const double sum = detail::canonical_sum(scratch);
  if (lifted) return params_.c3 * sum;
  return sum / (params_.beta * std::sqrt(static_cast<double>(n_)));
}

double DrawKernel::dpsi_computed(const InterpolationState& st, std::vector<double>& scratch) const {
  const std::size_t l = st.l;
  const bool lifted = params_.variant == Variant::Lifted;
  if (l < 2 || (lifted && (params_.c3 == 0.0 || params_.c3 == 1.0))) return 0.0;
  scratch.resize(l * (l - 1) / 2);
  std::size_t k = 0;
  const double zpow = 2.0 - params_.c3;
  for (std::size_t i = 0; i < l; ++i) {
    for (std::size_t p = i + 1; p < l; ++p) {
      const double kap = kappa_[i * l + p];
      const double gap = 1.0 - st.overlap(i, p);
      const double ww = lifted ? std::exp(st.logA[i] + st.logA[p] - zpow * st.logZ) : st.w[i] * st.w[p];
      scratch[k++] = ww * kap * gap;
    }
  }
  // The (i,p) and (p,i) terms coincide; the diagonal has kappa = 0.
  const double pairs = 2.0 * detail::canonical_sum(scratch);
  if (lifted) return -0.5 * params_.beta * params_.beta * params_.c3 * (1.0 - params_.c3) * pairs;
  return -0.5 * params_.beta / std::sqrt(static_cast<double>(n_)) * pairs;
}

void check_standard_window(double t) {
  if (!(t >= kStandardWindow && t <= 1.0 - kStandardWindow)) {
    throw EndpointSingularityError("standard-route derivative is not evaluated at t=" + detail::format_double(t) +
                                   " (allowed [0.01, 0.99]); use the computed route");
  }
}

void CurveFunctional::evaluate(const ReplicationDraw& draw, std::span<const double> grid,
                               std::span<double> out) const {
  InterpolationState st;
  InterpolationState clipped;
  std::vector<double> scratch;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double t = grid[k];
    update_state(st, draw, kernel_.params(), t);
    double* o = out.data() + k * kWidth;
    o[kPsi] = kernel_.psi(st);
    o[kComputed] = kernel_.dpsi_computed(st, scratch);
    const double tc = std::clamp(t, kStandardWindow, 1.0 - kStandardWindow);
    if (tc == t) {
      o[kStandard] = kernel_.dpsi_standard(draw, st, scratch);
    } else {
      update_state(clipped, draw, kernel_.params(), tc);
      o[kStandard] = kernel_.dpsi_standard(draw, clipped, scratch);
    }
  }
}

namespace {

Estimate single_point(const VectorSet& set, const ModelParams& params, double t, const SeedPlan& plan,
                      RunOptions options, std::size_t column) {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("t=" + detail::format_double(t) + " outside [0, 1]");
  const CurveFunctional f(set, params);
  const double grid[] = {t};
  return paired_run(set, params.m, plan, grid, f, options).at(0, column);
}

}  // namespace

Estimate psi_direct(const VectorSet& set, const ModelParams& params, double t, const SeedPlan& plan,
                    RunOptions options) {
  return single_point(set, params, t, plan, options, CurveFunctional::kPsi);
}

Estimate dpsi_standard(const VectorSet& set, const ModelParams& params, double t, const SeedPlan& plan,
                       RunOptions options) {
  check_standard_window(t);
  return single_point(set, params, t, plan, options, CurveFunctional::kStandard);
}

Estimate dpsi_computed(const VectorSet& set, const ModelParams& params, double t, const SeedPlan& plan,
                       RunOptions options) {
  return single_point(set, params, t, plan, options, CurveFunctional::kComputed);
}

}  // namespace gcomp
