#include "gcomp/draw.hpp"

#include "gcomp/errors.hpp"
#include "gcomp/numeric.hpp"

namespace gcomp {

RawDraw draw_raw(std::size_t m, std::size_t n, NormalStream& stream) {
  RawDraw r;
  r.m = m;
  r.n = n;
  r.G.resize(m * n);
  for (auto& g : r.G) g = stream.next();
  r.u2.resize(m);
  for (auto& v : r.u2) v = stream.next();
  r.h.resize(n);
  for (auto& v : r.h) v = stream.next();
  r.u4 = stream.next();
  return r;
}

ReplicationDraw project(const RawDraw& raw, const VectorSet& set) {
  if (raw.n != set.dim()) throw ValidationError("draw dimension does not match the vector set");
  ReplicationDraw d;
  d.l = set.size();
  d.m = raw.m;
  d.u1.resize(d.l * d.m);
  d.u3.resize(d.l);
  for (std::size_t i = 0; i < d.l; ++i) {
    const double* x = set.direction(i).data();
    for (std::size_t j = 0; j < d.m; ++j) d.u1[i * d.m + j] = detail::dot(raw.G.data() + j * raw.n, x, raw.n);
    d.u3[i] = detail::dot(raw.h.data(), x, raw.n);
  }
  d.u2 = raw.u2;
  d.u4 = raw.u4;
  return d;
}

ReplicationDraw make_draw(const VectorSet& set, std::size_t m, NormalStream& stream) {
  return project(draw_raw(m, set.dim(), stream), set);
}

}  // namespace gcomp
