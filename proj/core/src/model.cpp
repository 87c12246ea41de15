#include "gcomp/model.hpp"

#include <cmath>

#include "gcomp/errors.hpp"

namespace gcomp {

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::Spherical: return "spherical";
    case Variant::General: return "general";
    case Variant::Lifted: return "lifted";
  }
  return "?";
}

Variant parse_variant(std::string_view name) {
  if (name == "spherical") return Variant::Spherical;
  if (name == "general") return Variant::General;
  if (name == "lifted") return Variant::Lifted;
  throw ValidationError("unknown variant '" + std::string(name) + "' (expected spherical, general or lifted)");
}

ModelParams make_params(const VectorSet& set, Variant variant, std::size_t m, double beta, int s, double c3) {
  if (m == 0) throw ValidationError("m must be positive");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ValidationError("beta must be a positive finite number");
  if (s != 1 && s != -1) throw ValidationError("sign must be +1 or -1");
  if (variant == Variant::Spherical && !set.unit_flag()) {
    throw ValidationError("spherical variant requires unit-norm vectors (use the general variant or normalize)");
  }
  if (variant == Variant::Lifted && !std::isfinite(c3)) throw ValidationError("c3 must be finite");
  ModelParams p;
  p.variant = variant;
  p.m = m;
  p.beta = beta;
  p.s = s;
  p.c3 = variant == Variant::Lifted ? c3 : 0.0;
  p.betas.resize(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) {
    p.betas[i] = variant == Variant::Spherical ? beta : beta * set.norm(i);
  }
  return p;
}

std::vector<double> kappa_matrix(const VectorSet& set, Variant variant) {
  const std::size_t l = set.size();
  std::vector<double> k(l * l, 0.0);
  for (std::size_t i = 0; i < l; ++i) {
    for (std::size_t p = i + 1; p < l; ++p) {
      double v = variant == Variant::Spherical ? 1.0 - set.gram_unit(i, p)
                                               : set.norm(i) * set.norm(p) - set.dot(i, p);
      if (v < 0.0) {
        if (v < -1e-12) throw ValidationError("kappa: negative pair factor (Cauchy-Schwarz violated)");
        v = 0.0;
      }
      k[i * l + p] = k[p * l + i] = v;
    }
  }
  return k;
}

}  // namespace gcomp
