#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "gcomp/draw.hpp"
#include "gcomp/errors.hpp"
#include "gcomp/fixtures.hpp"
#include "gcomp/interpolation.hpp"
#include "gcomp/numeric.hpp"
#include "gcomp/sampling.hpp"
#include "oracles.hpp"

using namespace gcomp;

namespace {

ReplicationDraw draw_for(const VectorSet& set, std::size_t m, std::uint64_t seed, std::size_t index) {
  NormalStream st(seed, index);
  return make_draw(set, m, st);
}

// ||G x|| computed from the raw matrix and the raw vector.
double raw_norm_gx(const RawDraw& r, std::span<const double> x) {
  double ss = 0.0;
  for (std::size_t j = 0; j < r.m; ++j) {
    double acc = 0.0;
    for (std::size_t k = 0; k < r.n; ++k) acc += r.G[j * r.n + k] * x[k];
    ss += acc * acc;
  }
  return std::sqrt(ss);
}

}  // namespace

TEST(Draw, ProjectionIsLinearImageOfSharedG) {
  const VectorSet xp = fixture("x_plus");
  NormalStream st(11, 0);
  const RawDraw raw = draw_raw(5, 5, st);
  const ReplicationDraw d = project(raw, xp);
  ASSERT_EQ(d.l, 10u);
  // u1 of (x_0 + x_1) direction is consistent with the linear map G.
  for (std::size_t j = 0; j < 5; ++j) {
    double expect = 0.0;
    for (std::size_t k = 0; k < 5; ++k) expect += raw.G[j * 5 + k] * xp.direction(3)[k];
    EXPECT_NEAR(d.row(3)[j], expect, 1e-15);
  }
  double h3 = 0.0;
  for (std::size_t k = 0; k < 5; ++k) h3 += raw.h[k] * xp.direction(3)[k];
  EXPECT_NEAR(d.u3[3], h3, 1e-15);
  EXPECT_EQ(d.u2, raw.u2);
  EXPECT_EQ(d.u4, raw.u4);
}

TEST(Draw, GenerationOrderIsGThenU2ThenHThenU4) {
  NormalStream a(5, 9);
  const RawDraw raw = draw_raw(2, 3, a);
  NormalStream b(5, 9);
  for (double g : raw.G) EXPECT_EQ(g, b.next());
  for (double u : raw.u2) EXPECT_EQ(u, b.next());
  for (double h : raw.h) EXPECT_EQ(h, b.next());
  EXPECT_EQ(raw.u4, b.next());
}

TEST(Interpolation, SingleElementWeightIsOne) {
  const VectorSet one = build_set(Matrix(3, 1, {0.6, 0.0, 0.8}));
  const ModelParams p = make_params(one, Variant::Spherical, 4, 2.0, 1);
  for (std::size_t r = 0; r < 20; ++r) {
    const auto d = draw_for(one, 4, 1, r);
    for (double t : {0.0, 0.3, 1.0}) {
      const auto st = interpolation_state(d, p, t);
      EXPECT_EQ(st.w[0], 1.0);
    }
  }
}

TEST(Interpolation, AtZeroAllNormsEqualU2Norm) {
  const VectorSet xp = fixture("x_plus");
  const ModelParams p = make_params(xp, Variant::Spherical, 5, 3.0, 1);
  const auto d = draw_for(xp, 5, 2, 0);
  const auto st = interpolation_state(d, p, 0.0);
  const double u2n = std::sqrt(std::inner_product(d.u2.begin(), d.u2.end(), d.u2.begin(), 0.0));
  for (double b : st.B) EXPECT_EQ(b, u2n);
}

TEST(Interpolation, LogZMatchesNaiveSummation) {
  std::mt19937_64 rng(21);
  const VectorSet set = build_set(normalize_columns(oracle::random_matrix(rng, 3, 2)));
  const ModelParams p = make_params(set, Variant::Spherical, 2, 0.5, 1);
  for (std::size_t r = 0; r < 200; ++r) {
    NormalStream s(4, r);
    const RawDraw raw = draw_raw(2, 3, s);
    const ReplicationDraw d = project(raw, set);
    const double t = 0.37;
    const auto st = interpolation_state(d, p, t);
    double z = 0.0;
    for (std::size_t i = 0; i < 2; ++i) {
      double b2 = 0.0;
      for (std::size_t j = 0; j < 2; ++j) {
        double gx = 0.0;
        for (std::size_t k = 0; k < 3; ++k) gx += raw.G[j * 3 + k] * set.direction(i)[k];
        const double v = std::sqrt(t) * gx + std::sqrt(1 - t) * raw.u2[j];
        b2 += v * v;
      }
      double hx = 0.0;
      for (std::size_t k = 0; k < 3; ++k) hx += raw.h[k] * set.direction(i)[k];
      z += std::exp(0.5 * (std::sqrt(b2) + std::sqrt(1 - t) * hx));
    }
    EXPECT_NEAR(st.logZ, std::log(z), 1e-12);
  }
}

TEST(Interpolation, WeightsSumToOneAndRespectDomain) {
  const VectorSet xm = fixture("x_minus");
  const ModelParams p = make_params(xm, Variant::General, 5, 10.0, -1);
  for (std::size_t r = 0; r < 100; ++r) {
    const auto d = draw_for(xm, 5, 3, r);
    const auto st = interpolation_state(d, p, 0.5);
    double sum = 0.0;
    for (double w : st.w) {
      EXPECT_GE(w, 0.0);
      EXPECT_LE(w, 1.0);
      sum += w;
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
  const auto d = draw_for(xm, 5, 3, 0);
  EXPECT_THROW(interpolation_state(d, p, 1.5), DomainError);
  EXPECT_THROW(interpolation_state(d, p, -0.1), DomainError);
}

TEST(Interpolation, SoftmaxShiftInvariance) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g(0.0, 30.0);
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<double> x(7), y(7), s1(7), s2(7);
    for (auto& v : x) v = g(rng);
    const double c = g(rng);
    for (std::size_t i = 0; i < 7; ++i) y[i] = x[i] + c;
    const double lx = detail::log_sum_exp(x, s1);
    const double ly = detail::log_sum_exp(y, s2);
    for (std::size_t i = 0; i < 7; ++i) EXPECT_NEAR(std::exp(x[i] - lx), std::exp(y[i] - ly), 1e-12);
  }
}

TEST(Interpolation, ExponentAtOneFromRawMatrix) {
  const VectorSet xm = fixture("x_minus");
  for (Variant v : {Variant::General, Variant::Lifted}) {
    const ModelParams p = make_params(xm, v, 5, 3.0, -1, 0.1);
    for (std::size_t r = 0; r < 100; ++r) {
      NormalStream s(17, r);
      const RawDraw raw = draw_raw(5, 5, s);
      const auto st = interpolation_state(project(raw, xm), p, 1.0);
      for (std::size_t i = 0; i < xm.size(); ++i) {
        // beta_i (s ||G xhat_i|| + u4) = beta (s ||G x_i|| + ||x_i|| u4)
        const double expect = 3.0 * (-raw_norm_gx(raw, xm.vector(i)) + xm.norm(i) * raw.u4);
        EXPECT_NEAR(st.logA[i], expect, 1e-12);
      }
    }
  }
  const VectorSet xp = fixture("x_plus");
  const ModelParams p = make_params(xp, Variant::Spherical, 5, 3.0, 1);
  NormalStream s(17, 0);
  const RawDraw raw = draw_raw(5, 5, s);
  const auto st = interpolation_state(project(raw, xp), p, 1.0);
  for (std::size_t i = 0; i < xp.size(); ++i) EXPECT_NEAR(st.logA[i], 3.0 * raw_norm_gx(raw, xp.vector(i)), 1e-12);
}

TEST(MixedOverlap, DiagonalAndEndpoint) {
  const VectorSet xp = fixture("x_plus");
  const auto d = draw_for(xp, 5, 5, 0);
  for (std::size_t i = 0; i < xp.size(); ++i) {
    EXPECT_NEAR(mixed_overlap(d, 0.4, i, i), 1.0, 1e-12);
    for (std::size_t p = 0; p < xp.size(); ++p) EXPECT_EQ(mixed_overlap(d, 0.0, i, p), 1.0);
  }
}

TEST(MixedOverlap, BoundedOverManyDraws) {
  const VectorSet xm = fixture("x_minus");
  const ModelParams p = make_params(xm, Variant::General, 5, 1.0, 1);
  for (std::size_t r = 0; r < 1000; ++r) {
    const auto d = draw_for(xm, 5, 6, r);
    const double t = static_cast<double>(r % 11) / 10.0;
    const auto st = interpolation_state(d, p, t);
    for (std::size_t i = 0; i < xm.size(); ++i) {
      for (std::size_t q = 0; q < xm.size(); ++q) {
        const double rho = st.overlap(i, q);
        EXPECT_LE(std::abs(rho), 1.0);
        EXPECT_EQ(rho, mixed_overlap(d, t, i, q));
      }
    }
  }
}

TEST(MixedOverlap, ZeroNormSignalsSkip) {
  ReplicationDraw d;
  d.l = 2;
  d.m = 2;
  d.u1 = {1, 0, 0, 1};
  d.u2 = {0, 0};
  d.u3 = {0, 0};
  EXPECT_THROW(mixed_overlap(d, 0.0, 0, 1), DegenerateDrawError);
}
