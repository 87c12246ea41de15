#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "gcomp/model.hpp"
#include "gcomp/sampling.hpp"
#include "gcomp/vector_set.hpp"

namespace gcomp {

// Gaussian integration-by-parts identities behind the derivative formulas.
// With P_i = A_i / Z^q, Q_ip = A_i A_p / Z^(q+1), gamma = q, where q = 1
// (Spherical, General) or q = 1 - c3 (Lifted), and v_p = sqrt(t) u1[p] + sqrt(1-t) u2:
//
//   CrossU1   E[P_i u1_ij u2_j / B_i], integrating over u1
//   CrossU2   E[P_i u1_ij u2_j / B_i], integrating over u2
//   U2Square  E[P_i u2_j^2 / B_i]
//   U1Square  E[P_i u1_ij^2 / B_i]
//   U3Linear  E[P_i u3_i]
//   U4Linear  E[P_i u4]               (General and Lifted only)
enum class Identity { CrossU1, CrossU2, U2Square, U1Square, U3Linear, U4Linear };

std::string_view to_string(Identity id);
Identity parse_identity(std::string_view name);
bool applicable(Identity id, Variant variant);
std::vector<Identity> identities_for(Variant variant);

struct IbpCase {
  Identity id;
  std::size_t i;  // set element, 0-based
  std::size_t j;  // coordinate, 0-based
};

struct IbpResult {
  IbpCase which;
  double t = 0.0;
  Estimate lhs;
  Estimate rhs;

  // (lhs - rhs) / sqrt(se_lhs^2 + se_rhs^2)
  double z() const;
};

// Both sides of every case at every t, on common random numbers.
// Requires 0 < t < 1 and valid indices.
std::vector<IbpResult> verify_ibp(const VectorSet& set, const ModelParams& params, std::span<const double> ts,
                                  std::span<const IbpCase> cases, const SeedPlan& plan, RunOptions options = {});

IbpResult verify_ibp(const VectorSet& set, const ModelParams& params, double t, Identity id, std::size_t i,
                     std::size_t j, const SeedPlan& plan, RunOptions options = {});

}  // namespace gcomp
