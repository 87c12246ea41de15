#include "gcomp/interpolation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gcomp/errors.hpp"
#include "gcomp/numeric.hpp"

namespace gcomp {

namespace {

void check_t(double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("interpolation parameter t=" + detail::format_double(t) + " outside [0, 1]");
}

double cosine(const double* a, const double* b, std::size_t m, double na, double nb) {
  if (!(na > 0.0) || !(nb > 0.0)) throw DegenerateDrawError("interpolated vector with zero norm");
  const double r = detail::dot(a, b, m) / (na * nb);
  return std::clamp(r, -1.0, 1.0);
}

}  // namespace

double InterpolationState::overlap(std::size_t i, std::size_t p) const {
  return cosine(vec(i), vec(p), m, B[i], B[p]);
}

void update_state(InterpolationState& st, const ReplicationDraw& draw, const ModelParams& params, double t) {
  check_t(t);
  const std::size_t l = draw.l;
  const std::size_t m = draw.m;
  st.t = t;
  st.l = l;
  st.m = m;
  st.v.resize(l * m);
  st.B.resize(l);
  st.logA.resize(l);
  st.w.resize(l);
  st.scratch.resize(l);
  const double a = std::sqrt(t);
  const double b = std::sqrt(1.0 - t);
  const double s = params.s;
  const double tail = params.has_u4() ? a * draw.u4 : 0.0;
  for (std::size_t i = 0; i < l; ++i) {
    const double* u1 = draw.row(i);
    double* v = st.v.data() + i * m;
    for (std::size_t j = 0; j < m; ++j) v[j] = a * u1[j] + b * draw.u2[j];
    st.B[i] = std::sqrt(detail::dot(v, v, m));
    st.logA[i] = params.betas[i] * (s * st.B[i] + tail + b * draw.u3[i]);
  }
  st.logZ = detail::log_sum_exp(st.logA, st.scratch);
  for (std::size_t i = 0; i < l; ++i) st.w[i] = std::exp(st.logA[i] - st.logZ);
}

InterpolationState interpolation_state(const ReplicationDraw& draw, const ModelParams& params, double t) {
  InterpolationState st;
  update_state(st, draw, params, t);
  return st;
}

double mixed_overlap(const ReplicationDraw& draw, double t, std::size_t i, std::size_t p) {
  check_t(t);
  const double a = std::sqrt(t);
  const double b = std::sqrt(1.0 - t);
  std::vector<double> vi(draw.m), vp(draw.m);
  for (std::size_t j = 0; j < draw.m; ++j) {
    vi[j] = a * draw.row(i)[j] + b * draw.u2[j];
    vp[j] = a * draw.row(p)[j] + b * draw.u2[j];
  }
  return cosine(vi.data(), vp.data(), draw.m, std::sqrt(detail::dot(vi.data(), vi.data(), draw.m)),
                std::sqrt(detail::dot(vp.data(), vp.data(), draw.m)));
}

}  // namespace gcomp
