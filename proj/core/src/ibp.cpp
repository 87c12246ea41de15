#include "gcomp/ibp.hpp"

#include <cmath>
#include <string>

#include "gcomp/errors.hpp"
#include "gcomp/interpolation.hpp"
#include "gcomp/numeric.hpp"

namespace gcomp {

namespace {

struct Named {
  Identity id;
  std::string_view name;
};

constexpr Named kNames[] = {
    {Identity::CrossU1, "cross-u1"},   {Identity::CrossU2, "cross-u2"},   {Identity::U2Square, "u2-square"},
    {Identity::U1Square, "u1-square"}, {Identity::U3Linear, "u3-linear"}, {Identity::U4Linear, "u4-linear"},
};

class IbpFunctional : public DrawFunctional {
 public:
  IbpFunctional(const VectorSet& set, const ModelParams& params, std::span<const IbpCase> cases)
      : set_(set), params_(params), cases_(cases.begin(), cases.end()) {}

  std::size_t width() const override { return 2 * cases_.size(); }

  void evaluate(const ReplicationDraw& draw, std::span<const double> grid, std::span<double> out) const override {
    const std::size_t l = draw.l;
    const bool lifted = params_.variant == Variant::Lifted;
    const double q = lifted ? 1.0 - params_.c3 : 1.0;
    const double gamma = q;
    const double s = params_.s;
    InterpolationState st;
    std::vector<double> P(l), terms(l);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double t = grid[k];
      update_state(st, draw, params_, t);
      for (std::size_t i = 0; i < l; ++i) {
        if (!(st.B[i] > 0.0)) throw DegenerateDrawError("interpolated vector with zero norm");
        P[i] = std::exp(st.logA[i] - q * st.logZ);
      }
      const double rt = std::sqrt(t);
      const double rc = std::sqrt(1.0 - t);
      auto Q = [&](std::size_t i, std::size_t p) {
        return std::exp(st.logA[i] + st.logA[p] - (q + 1.0) * st.logZ);
      };
      // gamma * sum_p c_p beta_p Q_ip f_p, with c_p = gram(i,p) or 1.
      auto pair_sum = [&](std::size_t i, bool with_gram, auto&& f) {
        for (std::size_t p = 0; p < l; ++p) {
          const double c = with_gram ? set_.gram_unit(i, p) : 1.0;
          terms[p] = c * params_.betas[p] * Q(i, p) * f(p);
        }
        return gamma * detail::canonical_sum(terms);
      };
      double* o = out.data() + k * width();
      for (std::size_t c = 0; c < cases_.size(); ++c) {
        const auto [id, i, j] = cases_[c];
        const double Bi = st.B[i];
        const double u1 = draw.row(i)[j];
        const double u2 = draw.u2[j];
        const double vij = st.vec(i)[j];
        const double bi = params_.betas[i];
        const double slope = (bi * s - 1.0 / Bi) * (vij / Bi);
        const double Pi = P[i];
        auto vp_over_B = [&](std::size_t p) { return st.vec(p)[j] / (Bi * st.B[p]); };
        double lhs = 0.0;
        double rhs = 0.0;
        switch (id) {
          case Identity::CrossU1:
            lhs = Pi * u1 * u2 / Bi;
            rhs = Pi / Bi * slope * u2 * rt - s * u2 * rt * pair_sum(i, true, vp_over_B);
            break;
          case Identity::CrossU2:
            lhs = Pi * u1 * u2 / Bi;
            rhs = Pi / Bi * slope * u1 * rc - s * u1 * rc * pair_sum(i, false, vp_over_B);
            break;
          case Identity::U2Square:
            lhs = Pi * u2 * u2 / Bi;
            rhs = Pi / Bi * (1.0 + slope * u2 * rc) - s * u2 * rc * pair_sum(i, false, vp_over_B);
            break;
          case Identity::U1Square:
            lhs = Pi * u1 * u1 / Bi;
            rhs = Pi / Bi * (1.0 + slope * u1 * rt) - s * u1 * rt * pair_sum(i, true, vp_over_B);
            break;
          case Identity::U3Linear:
            lhs = Pi * draw.u3[i];
            rhs = bi * Pi * rc - rc * pair_sum(i, true, [](std::size_t) { return 1.0; });
            break;
          case Identity::U4Linear:
            lhs = Pi * draw.u4;
            rhs = bi * Pi * rt - rt * pair_sum(i, false, [](std::size_t) { return 1.0; });
            break;
        }
        o[2 * c] = lhs;
        o[2 * c + 1] = rhs;
      }
    }
  }

 private:
  const VectorSet& set_;
  ModelParams params_;
  std::vector<IbpCase> cases_;
};

}  // namespace

std::string_view to_string(Identity id) {
  for (const auto& n : kNames) {
    if (n.id == id) return n.name;
  }
  return "?";
}

Identity parse_identity(std::string_view name) {
  for (const auto& n : kNames) {
    if (n.name == name) return n.id;
  }
  throw ValidationError("unknown identity '" + std::string(name) + "'");
}

bool applicable(Identity id, Variant variant) { return id != Identity::U4Linear || variant != Variant::Spherical; }

std::vector<Identity> identities_for(Variant variant) {
  std::vector<Identity> out;
  for (const auto& n : kNames) {
    if (applicable(n.id, variant)) out.push_back(n.id);
  }
  return out;
}

double IbpResult::z() const {
  const double se = combined_se(lhs, rhs);
  const double d = lhs.mean - rhs.mean;
  if (se == 0.0) return d == 0.0 ? 0.0 : std::copysign(INFINITY, d);
  return d / se;
}

std::vector<IbpResult> verify_ibp(const VectorSet& set, const ModelParams& params, std::span<const double> ts,
                                  std::span<const IbpCase> cases, const SeedPlan& plan, RunOptions options) {
  for (double t : ts) {
    if (!(t > 0.0 && t < 1.0)) throw DomainError("identity check needs 0 < t < 1, got " + detail::format_double(t));
  }
  for (const auto& c : cases) {
    if (!applicable(c.id, params.variant)) {
      throw ValidationError("identity '" + std::string(to_string(c.id)) + "' does not apply to the " +
                            std::string(to_string(params.variant)) + " variant");
    }
    if (c.i >= set.size() || c.j >= params.m) throw ValidationError("identity index out of range");
  }
  const IbpFunctional f(set, params, cases);
  const PairedResult run = paired_run(set, params.m, plan, ts, f, options);
  std::vector<IbpResult> out;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    for (std::size_t c = 0; c < cases.size(); ++c) {
      out.push_back({cases[c], ts[k], run.at(k, 2 * c), run.at(k, 2 * c + 1)});
    }
  }
  return out;
}

IbpResult verify_ibp(const VectorSet& set, const ModelParams& params, double t, Identity id, std::size_t i,
                     std::size_t j, const SeedPlan& plan, RunOptions options) {
  const IbpCase c{id, i, j};
  const double ts[] = {t};
  return verify_ibp(set, params, ts, std::span<const IbpCase>(&c, 1), plan, options).front();
}

}  // namespace gcomp
