#include "gcomp/limits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gcomp/errors.hpp"
#include "gcomp/numeric.hpp"

namespace gcomp {

namespace {

double norm(const double* v, std::size_t m) { return std::sqrt(detail::dot(v, v, m)); }

// max_i e_i(t) for one draw.
double max_exponent(const VectorSet& set, const ReplicationDraw& d, int s, double t, bool general) {
  const double a = std::sqrt(t);
  const double b = std::sqrt(1.0 - t);
  std::vector<double> v(d.m);
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < d.l; ++i) {
    for (std::size_t j = 0; j < d.m; ++j) v[j] = a * d.row(i)[j] + b * d.u2[j];
    double e = s * norm(v.data(), d.m) + b * d.u3[i];
    if (general) e = set.norm(i) * (e + a * d.u4);
    best = std::max(best, e);
  }
  return best;
}

void check_t(double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("t=" + detail::format_double(t) + " outside [0, 1]");
}

class MaxFunctional : public DrawFunctional {
 public:
  MaxFunctional(const VectorSet& set, int s, bool general, double scale)
      : set_(set), s_(s), general_(general), scale_(scale) {}
  std::size_t width() const override { return 1; }
  void evaluate(const ReplicationDraw& d, std::span<const double> grid, std::span<double> out) const override {
    for (std::size_t k = 0; k < grid.size(); ++k) out[k] = scale_ * max_exponent(set_, d, s_, grid[k], general_);
  }

 private:
  const VectorSet& set_;
  int s_;
  bool general_;
  double scale_;
};

// Both sides of the sign -1 comparison written with minima:
// column 0 min_i(||G x_i|| - ||x_i|| u4), column 1 min_i(||x_i|| ||u2|| - h.x_i).
class MinFormFunctional : public DrawFunctional {
 public:
  MinFormFunctional(const VectorSet& set, bool general) : set_(set), general_(general) {}
  std::size_t width() const override { return 2; }
  void evaluate(const ReplicationDraw& d, std::span<const double>, std::span<double> out) const override {
    const double rn = std::sqrt(static_cast<double>(set_.dim()));
    const double u2n = norm(d.u2.data(), d.m);
    double lhs = std::numeric_limits<double>::infinity();
    double rhs = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < d.l; ++i) {
      const double xn = general_ ? set_.norm(i) : 1.0;
      const double gx = xn * norm(d.row(i), d.m);
      const double hx = xn * d.u3[i];
      lhs = std::min(lhs, gx - (general_ ? xn * d.u4 : 0.0));
      rhs = std::min(rhs, xn * u2n - hx);
    }
    out[0] = lhs / rn;
    out[1] = rhs / rn;
  }

 private:
  const VectorSet& set_;
  bool general_;
};

// Column 0 max_i s ||G x_i||, column 1 max_i (s ||u2|| + h.x_i), unit sets.
class ChainFunctional : public DrawFunctional {
 public:
  explicit ChainFunctional(int s) : s_(s) {}
  std::size_t width() const override { return 2; }
  void evaluate(const ReplicationDraw& d, std::span<const double>, std::span<double> out) const override {
    const double u2n = norm(d.u2.data(), d.m);
    double lhs = -std::numeric_limits<double>::infinity();
    double rhs = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < d.l; ++i) {
      lhs = std::max(lhs, s_ * norm(d.row(i), d.m));
      rhs = std::max(rhs, s_ * u2n + d.u3[i]);
    }
    out[0] = lhs;
    out[1] = rhs;
  }

 private:
  int s_;
};

void check_sign(int s) {
  if (s != 1 && s != -1) throw ValidationError("sign must be +1 or -1");
}

void check_c3s(double c3s) {
  if (!(c3s > 0.0) || !std::isfinite(c3s)) throw DomainError("c3s must be a positive finite number");
}

}  // namespace

BoundReport make_report(std::string name, const Estimate& lhs, const Estimate& rhs, Direction direction) {
  BoundReport r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.direction = direction;
  r.margin = direction == Direction::LhsLeqRhs ? rhs.mean - lhs.mean : lhs.mean - rhs.mean;
  r.combined_se = combined_se(lhs, rhs);
  r.pass = r.margin >= -3.0 * r.combined_se;
  return r;
}

std::vector<Estimate> interpolated_max(const VectorSet& set, std::size_t m, int s, std::span<const double> ts,
                                       const SeedPlan& plan, bool general, RunOptions options) {
  check_sign(s);
  for (double t : ts) check_t(t);
  const MaxFunctional f(set, s, general, 1.0 / std::sqrt(static_cast<double>(set.dim())));
  const PairedResult run = paired_run(set, m, plan, ts, f, options);
  return run.estimates;
}

Estimate interpolated_max(const VectorSet& set, std::size_t m, int s, double t, const SeedPlan& plan, bool general,
                          RunOptions options) {
  const double ts[] = {t};
  return interpolated_max(set, m, s, ts, plan, general, options).front();
}

BoundReport slepian_gordon_check(const VectorSet& set, std::size_t m, int s, const SeedPlan& plan, bool general,
                                 RunOptions options) {
  check_sign(s);
  const std::string suffix = general ? " (general)" : " (unit)";
  if (s == 1) {
    const double ts[] = {1.0, 0.0};
    const auto e = interpolated_max(set, m, s, ts, plan, general, options);
    return make_report("slepian" + suffix, e[0], e[1], Direction::LhsLeqRhs);
  }
  const MinFormFunctional f(set, general);
  const double ts[] = {1.0};
  const PairedResult run = paired_run(set, m, plan, ts, f, options);
  return make_report("gordon" + suffix, run.at(0, 0), run.at(0, 1), Direction::LhsGeqRhs);
}

LogEstimate log_mean_exp(std::span<const double> x) {
  if (x.size() < 2) throw ValidationError("log-mean-exp needs at least two values");
  double shift = -std::numeric_limits<double>::infinity();
  for (double v : x) shift = std::max(shift, v);
  if (!std::isfinite(shift)) throw AggregationError("log-mean-exp: non-finite exponent");
  std::vector<double> scaled(x.size());
  for (std::size_t r = 0; r < x.size(); ++r) scaled[r] = std::exp(x[r] - shift);
  const Estimate e = aggregate(scaled);
  LogEstimate out;
  out.log_mean = shift + std::log(e.mean);
  out.log_std_error = e.std_error / e.mean;
  const double f = std::exp(shift);
  out.raw = {e.mean * f, e.std_error * f, e.n, e.skipped};
  return out;
}

std::vector<LogEstimate> lifted_exp_functional(const VectorSet& set, std::size_t m, int s, double c3s,
                                               std::span<const double> ts, const SeedPlan& plan,
                                               RunOptions options) {
  check_sign(s);
  check_c3s(c3s);
  for (double t : ts) check_t(t);
  const MaxFunctional f(set, s, true, c3s);
  const SampleMatrix sm = collect_samples(set, m, plan, ts, f, options);
  std::vector<LogEstimate> out;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    LogEstimate le = log_mean_exp(sm.column(k));
    le.raw.skipped = sm.skipped_count();
    out.push_back(le);
  }
  return out;
}

LogEstimate lifted_exp_functional(const VectorSet& set, std::size_t m, int s, double c3s, double t,
                                  const SeedPlan& plan, RunOptions options) {
  const double ts[] = {t};
  return lifted_exp_functional(set, m, s, c3s, ts, plan, options).front();
}

BoundReport lifted_comparison_check(const VectorSet& set, std::size_t m, int s, double c3s, const SeedPlan& plan,
                                    RunOptions options) {
  const double ts[] = {1.0, 0.0};
  const auto e = lifted_exp_functional(set, m, s, c3s, ts, plan, options);
  return make_report(s == 1 ? "lifted-slepian" : "lifted-gordon", e[0].as_estimate(), e[1].as_estimate(),
                     Direction::LhsLeqRhs);
}

double adjusted_value(double psi_star, double beta, double c3, std::size_t n) {
  if (!(psi_star > 0.0)) throw DomainError("adjusted value needs a positive lifted value");
  const double bc = beta * c3;
  if (bc == 0.0 || !std::isfinite(bc)) throw DomainError("adjusted value needs beta * c3 != 0");
  if (n == 0) throw DomainError("adjusted value needs n > 0");
  return (std::log(psi_star) / bc - bc / 2.0) / std::sqrt(static_cast<double>(n));
}

BoundReport chain_bound_check(const VectorSet& set, std::size_t m, int s, double c3s, const SeedPlan& plan,
                              RunOptions options) {
  check_sign(s);
  check_c3s(c3s);
  if (!set.unit_flag()) throw ValidationError("chain bound requires a unit-norm vector set");
  const ChainFunctional f(s);
  const double ts[] = {1.0};
  const SampleMatrix sm = collect_samples(set, m, plan, ts, f, options);
  const Estimate lhs = aggregate(sm.column(0));
  std::vector<double> scaled = sm.column(1);
  for (auto& v : scaled) v *= c3s;
  const LogEstimate le = log_mean_exp(scaled);
  const Estimate rhs{le.log_mean / c3s - c3s / 2.0, le.log_std_error / c3s, le.raw.n, sm.skipped_count()};
  return make_report("chain", lhs, rhs, Direction::LhsLeqRhs);
}

}  // namespace gcomp
