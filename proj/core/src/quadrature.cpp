#include "gcomp/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gcomp/errors.hpp"
#include "gcomp/estimators.hpp"
#include "gcomp/numeric.hpp"

namespace gcomp {

namespace {

constexpr double kGridTol = 1e-9;

void check_grid(const std::vector<double>& g) {
  if (g.empty()) throw ValidationError("empty t-grid");
  if (g.front() != 0.0) throw ValidationError("curve grid must start at t=0");
  if (g.back() > 1.0 + kGridTol) throw ValidationError("curve grid must end at or before t=1");
  if (g.size() < 2) return;
  const double h = g[1] - g[0];
  if (!(h > 0.0) || h > 0.1 + kGridTol) throw ValidationError("curve grid step must be in (0, 0.1]");
  for (std::size_t k = 1; k < g.size(); ++k) {
    if (std::abs((g[k] - g[k - 1]) - h) > 1e-9) throw ValidationError("curve grid must be uniform");
  }
}

// Per replication: psi(t_k) from psi(0) plus the trapezoid sum of the
// derivative column `route` up to node k.
class IntegratedCurve : public DrawFunctional {
 public:
  enum Column : std::size_t { kPsi, kStandard, kComputed, kIntStandard, kIntComputed, kWidth };

  IntegratedCurve(const VectorSet& set, const ModelParams& params) : base_(set, params) {}

  std::size_t width() const override { return kWidth; }

  void evaluate(const ReplicationDraw& draw, std::span<const double> grid, std::span<double> out) const override {
    const std::size_t T = grid.size();
    std::vector<double> tmp(T * CurveFunctional::kWidth);
    base_.evaluate(draw, grid, tmp);
    double acc_s = 0.0;
    double acc_c = 0.0;
    const double psi0 = tmp[CurveFunctional::kPsi];
    for (std::size_t k = 0; k < T; ++k) {
      const double* b = tmp.data() + k * CurveFunctional::kWidth;
      double* o = out.data() + k * kWidth;
      if (k > 0) {
        const double* a = b - CurveFunctional::kWidth;
        const double h = grid[k] - grid[k - 1];
        acc_s += 0.5 * h * (a[CurveFunctional::kStandard] + b[CurveFunctional::kStandard]);
        acc_c += 0.5 * h * (a[CurveFunctional::kComputed] + b[CurveFunctional::kComputed]);
      }
      o[kPsi] = b[CurveFunctional::kPsi];
      o[kStandard] = b[CurveFunctional::kStandard];
      o[kComputed] = b[CurveFunctional::kComputed];
      o[kIntStandard] = k == 0 ? psi0 : psi0 + acc_s;
      o[kIntComputed] = k == 0 ? psi0 : psi0 + acc_c;
    }
  }

 private:
  CurveFunctional base_;
};

std::vector<double> trapezoid_bound(const std::vector<double>& t, const std::vector<Estimate>& d) {
  double worst = 0.0;
  for (std::size_t k = 1; k + 1 < d.size(); ++k) {
    worst = std::max(worst, std::abs(d[k + 1].mean - 2.0 * d[k].mean + d[k - 1].mean));
  }
  std::vector<double> out(t.size());
  for (std::size_t k = 0; k < t.size(); ++k) out[k] = (t[k] - t.front()) * worst / 12.0;
  return out;
}

}  // namespace

std::vector<double> make_grid(double start, double stop, double step) {
  if (!std::isfinite(start) || !std::isfinite(stop) || !std::isfinite(step)) throw ValidationError("non-finite t-grid");
  if (!(step > 0.0)) throw ValidationError("t-grid step must be positive");
  if (stop < start) throw ValidationError("t-grid stop is below start");
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + kGridTol)) + 1;
  std::vector<double> g(count);
  for (std::size_t k = 0; k < count; ++k) g[k] = start + static_cast<double>(k) * step;
  // Snap values like 0.30000000000000004 to the intended decimal.
  for (auto& v : g) v = std::round(v * 1e12) / 1e12;
  return g;
}

CurveResult integrate_curve(const VectorSet& set, const ModelParams& params, const std::vector<double>& grid,
                            const SeedPlan& plan, RunOptions options) {
  check_grid(grid);
  const IntegratedCurve f(set, params);
  const PairedResult run = paired_run(set, params.m, plan, grid, f, options);
  CurveResult c;
  c.t = grid;
  c.replications = plan.replications;
  c.skipped = run.skipped;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    c.psi_direct.push_back(run.at(k, IntegratedCurve::kPsi));
    c.dpsi_standard.push_back(run.at(k, IntegratedCurve::kStandard));
    c.dpsi_computed.push_back(run.at(k, IntegratedCurve::kComputed));
    c.psi_from_standard.push_back(run.at(k, IntegratedCurve::kIntStandard));
    c.psi_from_computed.push_back(run.at(k, IntegratedCurve::kIntComputed));
  }
  c.quad_error_standard = trapezoid_bound(c.t, c.dpsi_standard);
  c.quad_error_computed = trapezoid_bound(c.t, c.dpsi_computed);
  return c;
}

MonotonicityReport monotonicity_check(const std::vector<Estimate>& psi, Monotonicity expected) {
  MonotonicityReport r;
  r.expected = expected;
  r.worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < psi.size(); ++k) {
    const double step = psi[k + 1].mean - psi[k].mean;
    const double against = expected == Monotonicity::Decreasing ? step : -step;
    const double margin = 3.0 * combined_se(psi[k], psi[k + 1]) - against;
    if (margin < r.worst_margin) {
      r.worst_margin = margin;
      r.worst_index = k;
    }
    if (margin < 0.0) {
      r.pass = false;
      r.violations.push_back({k, margin});
    }
  }
  if (psi.size() < 2) r.worst_margin = 0.0;
  return r;
}

MonotonicityReport monotonicity_check(const CurveResult& curve, Monotonicity expected) {
  return monotonicity_check(curve.psi_direct, expected);
}

double route_consistency_excess(const CurveResult& c) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < c.t.size(); ++k) {
    const double diff = std::abs(c.psi_from_standard[k].mean - c.psi_from_computed[k].mean);
    const double allow = 3.0 * combined_se(c.psi_from_standard[k], c.psi_from_computed[k]) +
                         c.quad_error_standard[k] + c.quad_error_computed[k];
    worst = std::max(worst, diff - allow);
  }
  return worst;
}

}  // namespace gcomp
