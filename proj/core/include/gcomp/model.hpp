#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gcomp/vector_set.hpp"

namespace gcomp {

enum class Variant { Spherical, General, Lifted };

std::string_view to_string(Variant v);
Variant parse_variant(std::string_view name);

struct ModelParams {
  Variant variant = Variant::Spherical;
  std::size_t m = 5;
  double beta = 1.0;
  int s = 1;
  double c3 = 0.0;            // Lifted only
  std::vector<double> betas;  // beta * norm_i (beta for Spherical)

  // Exponent carries the sqrt(t) u4 term (General and Lifted).
  bool has_u4() const { return variant != Variant::Spherical; }
};

// Validates the combination against `set` and fills `betas`.
// Spherical requires a unit set; Lifted requires a finite c3.
ModelParams make_params(const VectorSet& set, Variant variant, std::size_t m, double beta, int s, double c3 = 0.0);

// Pairwise factor kappa_ip >= 0 used by the computed derivative, row-major
// l x l with zero diagonal: 1 - gram for Spherical, ||x_i|| ||x_p|| - x_i.x_p
// otherwise. Rounding residue above -1e-12 is clamped to zero.
std::vector<double> kappa_matrix(const VectorSet& set, Variant variant);

}  // namespace gcomp
