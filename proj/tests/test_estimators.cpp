#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <random>

#include "gcomp/errors.hpp"
#include "gcomp/estimators.hpp"
#include "gcomp/fixtures.hpp"
#include "gcomp/sampling.hpp"
#include "oracles.hpp"

using namespace gcomp;

namespace {

ReplicationDraw draw_for(const VectorSet& set, std::size_t m, std::uint64_t seed, std::size_t index) {
  NormalStream st(seed, index);
  return make_draw(set, m, st);
}

double psi_at(const DrawKernel& k, const ReplicationDraw& d, double t) {
  return k.psi(interpolation_state(d, k.params(), t));
}

VectorSet unit_vector_set() { return build_set(Matrix(5, 1, {0.6, 0.0, 0.0, 0.8, 0.0})); }

struct Config {
  const char* set;
  Variant variant;
  double beta;
  int s;
  double c3;
};

}  // namespace

// The standard route is the exact t-derivative of the per-draw functional, so
// a central finite difference of psi on the same draw must reproduce it.
TEST(StandardRoute, MatchesFiniteDifferencePerDraw) {
  const Config configs[] = {
      {"x_plus", Variant::Spherical, 3.0, 1, 0.0},  {"x_plus", Variant::Spherical, 10.0, -1, 0.0},
      {"x_minus", Variant::General, 3.0, 1, 0.0},   {"x_minus", Variant::General, 3.0, -1, 0.0},
      {"x_plus", Variant::Lifted, 3.0, 1, 0.1},     {"x_plus", Variant::Lifted, 1.0, -1, 2.0},
      {"x_minus", Variant::Lifted, 1.0, 1, -0.5},
  };
  std::vector<double> scratch;
  for (const auto& c : configs) {
    const VectorSet set = fixture(c.set);
    const ModelParams p = make_params(set, c.variant, 5, c.beta, c.s, c.c3);
    const DrawKernel k(set, p);
    for (std::size_t r = 0; r < 40; ++r) {
      const auto d = draw_for(set, 5, 31, r);
      for (double t : {0.05, 0.3, 0.5, 0.8, 0.97}) {
        const double h = 1e-6;
        const double fd = (psi_at(k, d, t + h) - psi_at(k, d, t - h)) / (2 * h);
        const double an = k.dpsi_standard(d, interpolation_state(d, p, t), scratch);
        EXPECT_NEAR(an, fd, 1e-5 * std::max(1.0, std::abs(fd))) << c.set << " t=" << t << " r=" << r;
      }
    }
  }
}

TEST(StandardRoute, RefusesEndpointWindow) {
  const VectorSet xp = fixture("x_plus");
  const ModelParams p = make_params(xp, Variant::Spherical, 5, 3.0, 1);
  const SeedPlan plan{1, 10};
  EXPECT_THROW(dpsi_standard(xp, p, 0.005, plan), EndpointSingularityError);
  EXPECT_THROW(dpsi_standard(xp, p, 0.995, plan), EndpointSingularityError);
  EXPECT_NO_THROW(dpsi_standard(xp, p, 0.01, plan));
  EXPECT_NO_THROW(dpsi_computed(xp, p, 0.0, plan));
  EXPECT_NO_THROW(dpsi_computed(xp, p, 1.0, plan));
}

TEST(ComputedRoute, ZeroForSingleElementAndLiftedUnitExponent) {
  std::vector<double> scratch;
  const VectorSet one = unit_vector_set();
  const ModelParams p1 = make_params(one, Variant::Spherical, 5, 4.0, 1);
  const DrawKernel k1(one, p1);
  const VectorSet xm = fixture("x_minus");
  const ModelParams p2 = make_params(xm, Variant::Lifted, 5, 2.0, -1, 1.0);
  const DrawKernel k2(xm, p2);
  for (std::size_t r = 0; r < 50; ++r) {
    const auto d1 = draw_for(one, 5, 3, r);
    const auto d2 = draw_for(xm, 5, 3, r);
    for (double t : {0.0, 0.4, 1.0}) {
      EXPECT_EQ(k1.dpsi_computed(interpolation_state(d1, p1, t), scratch), 0.0);
      EXPECT_EQ(k2.dpsi_computed(interpolation_state(d2, p2, t), scratch), 0.0);
    }
  }
}

TEST(ChiOracle, ClosedFormAgreesWithQuadrature) {
  for (std::size_t m : {1u, 2u, 5u, 9u}) {
    EXPECT_NEAR(oracle::chi_mean(m), oracle::chi_expectation(m, [](double x) { return x; }), 1e-10);
  }
  EXPECT_NEAR(oracle::chi_mean(5) / std::sqrt(5.0), 0.9515, 5e-5);
}

TEST(PsiDirect, SingleUnitVectorMatchesChiMean) {
  const VectorSet one = unit_vector_set();
  const SeedPlan plan{SeedPlan::kDefaultSeed, 20000};
  for (int s : {1, -1}) {
    const ModelParams p = make_params(one, Variant::Spherical, 5, 2.5, s);
    const double expect = s * oracle::chi_mean(5) / std::sqrt(5.0);
    for (double t : {0.0, 0.3, 0.7, 1.0}) {
      const Estimate e = psi_direct(one, p, t, plan);
      EXPECT_LE(std::abs(e.mean - expect), 3 * e.std_error) << "s=" << s << " t=" << t;
    }
    const Estimate d = dpsi_standard(one, p, 0.5, plan);
    EXPECT_LE(std::abs(d.mean), 3 * d.std_error);
  }
}

TEST(PsiDirect, ReferenceSinglePoints) {
  const VectorSet xp = fixture("x_plus");
  const VectorSet xm = fixture("x_minus");
  const SeedPlan p3{SeedPlan::kDefaultSeed, 30000};
  const SeedPlan p5{SeedPlan::kDefaultSeed, 50000};
  EXPECT_NEAR(psi_direct(xp, make_params(xp, Variant::Spherical, 5, 3, 1), 0.5, p3).mean, 1.6395, 0.02);
  EXPECT_NEAR(psi_direct(xm, make_params(xm, Variant::General, 5, 3, -1), 0.3, p5).mean, -0.5413, 0.03);
  EXPECT_NEAR(psi_direct(xp, make_params(xp, Variant::Lifted, 5, 3, 1, 0.1), 0.5, p5).mean, 3.1279, 0.03);
}

TEST(DerivativeRoutes, ReferenceSinglePoints) {
  const VectorSet xp = fixture("x_plus");
  const SeedPlan p3{SeedPlan::kDefaultSeed, 30000};
  const ModelParams plus = make_params(xp, Variant::Spherical, 5, 3, 1);
  const ModelParams minus = make_params(xp, Variant::Spherical, 5, 3, -1);
  EXPECT_NEAR(dpsi_standard(xp, plus, 0.5, p3).mean, -0.1610, 0.03);
  EXPECT_NEAR(dpsi_standard(xp, minus, 0.1, p3).mean, -0.0363, 0.03);
  EXPECT_NEAR(dpsi_computed(xp, plus, 0.5, p3).mean, -0.1613, 0.03);
  EXPECT_NEAR(dpsi_computed(xp, minus, 0.9, p3).mean, -0.4283, 0.04);
}

// Sign of the pairwise derivative holds for every single draw.
TEST(ComputedRoute, PointwiseSignOnFuzzedSets) {
  std::vector<double> scratch;
  const auto cases = oracle::fuzzed_sets(20, 99);
  for (const auto& fc : cases) {
    const VectorSet g = build_set(fc.matrix);
    const VectorSet u = build_set(normalize_columns(fc.matrix));
    struct K {
      const VectorSet* set;
      ModelParams p;
      double sign;  // expected sign of the derivative
    };
    const K kernels[] = {
        {&u, make_params(u, Variant::Spherical, fc.m, 3.0, 1), -1},
        {&u, make_params(u, Variant::Spherical, fc.m, 3.0, -1), -1},
        {&g, make_params(g, Variant::General, fc.m, 3.0, 1), -1},
        {&g, make_params(g, Variant::General, fc.m, 3.0, -1), -1},
        {&g, make_params(g, Variant::Lifted, fc.m, 3.0, 1, 0.1), -1},
        {&g, make_params(g, Variant::Lifted, fc.m, 1.0, -1, 2.0), 1},
        {&g, make_params(g, Variant::Lifted, fc.m, 1.0, 1, -0.5), 1},
    };
    for (const auto& k : kernels) {
      const DrawKernel dk(*k.set, k.p);
      for (std::size_t r = 0; r < 300; ++r) {
        const auto d = draw_for(*k.set, fc.m, 12, r);
        for (double t : {0.0, 0.2, 0.5, 0.9, 1.0}) {
          const double v = dk.dpsi_computed(interpolation_state(d, k.p, t), scratch);
          EXPECT_GE(k.sign * v, 0.0);
        }
      }
    }
  }
}

TEST(DerivativeRoutes, AgreeOnFuzzedSets) {
  const auto cases = oracle::fuzzed_sets(6, 5);
  const SeedPlan plan{SeedPlan::kDefaultSeed, 20000};
  for (const auto& fc : cases) {
    const VectorSet g = build_set(fc.matrix);
    for (Variant v : {Variant::General, Variant::Lifted}) {
      const ModelParams p = make_params(g, v, fc.m, 2.0, 1, 0.3);
      const CurveFunctional f(g, p);
      const std::vector<double> grid{0.3, 0.7};
      const PairedResult run = paired_run(g, fc.m, plan, grid, f);
      for (std::size_t k = 0; k < grid.size(); ++k) {
        const Estimate& a = run.at(k, CurveFunctional::kStandard);
        const Estimate& b = run.at(k, CurveFunctional::kComputed);
        EXPECT_LE(std::abs(a.mean - b.mean), 3 * combined_se(a, b));
      }
    }
  }
}

TEST(Estimators, PermutationInvarianceIsBitExact) {
  const Matrix raw = normalize_columns(fixture_raw("x_plus"));
  std::vector<std::size_t> perm(raw.cols);
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(4);
  std::shuffle(perm.begin(), perm.end(), rng);
  Matrix shuffled(raw.rows, raw.cols);
  for (std::size_t i = 0; i < raw.cols; ++i) {
    for (std::size_t k = 0; k < raw.rows; ++k) shuffled(k, i) = raw(k, perm[i]);
  }
  const VectorSet a = build_set(raw);
  const VectorSet b = build_set(shuffled);
  const SeedPlan plan{13, 3000};
  const std::vector<double> grid{0.0, 0.2, 0.6, 1.0};
  for (Variant v : {Variant::Spherical, Variant::General, Variant::Lifted}) {
    const ModelParams pa = make_params(a, v, 5, 3.0, -1, 0.1);
    const ModelParams pb = make_params(b, v, 5, 3.0, -1, 0.1);
    const PairedResult ra = paired_run(a, 5, plan, grid, CurveFunctional(a, pa));
    const PairedResult rb = paired_run(b, 5, plan, grid, CurveFunctional(b, pb));
    for (std::size_t c = 0; c < ra.estimates.size(); ++c) {
      EXPECT_EQ(std::memcmp(&ra.estimates[c].mean, &rb.estimates[c].mean, sizeof(double)), 0) << c;
    }
  }
}

TEST(LiftedUnitExponent, FlatAndMatchesQuadrature) {
  const VectorSet xp = fixture("x_plus");
  const SeedPlan plan{SeedPlan::kDefaultSeed, 30000};
  for (int s : {1, -1}) {
    const ModelParams p = make_params(xp, Variant::Lifted, 5, 1.0, s, 1.0);
    double expect = 0.0;
    for (double b : p.betas) expect += std::exp(b * b / 2) * oracle::chi_exp_moment(5, b * s);
    const CurveFunctional f(xp, p);
    const std::vector<double> grid{0.0, 0.1, 0.5, 0.9, 1.0};
    const PairedResult run = paired_run(xp, 5, plan, grid, f);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const Estimate& e = run.at(k, CurveFunctional::kPsi);
      EXPECT_LE(std::abs(e.mean - expect), 3 * e.std_error) << "s=" << s << " t=" << grid[k];
      EXPECT_EQ(run.at(k, CurveFunctional::kComputed).mean, 0.0);
    }
  }
}
