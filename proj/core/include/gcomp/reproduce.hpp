#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "gcomp/fixtures.hpp"
#include "gcomp/limits.hpp"
#include "gcomp/quadrature.hpp"
#include "gcomp/sampling.hpp"

namespace gcomp {

struct CellResult {
  double t;
  Column column;
  double expected;
  double tolerance;
  double value;
  double std_error;
  bool pass;
};

struct TableRun {
  const ReferenceTable* table = nullptr;
  SeedPlan plan;
  CurveResult curve;
  // Large-beta limit at every curve node (when the table has one).
  std::vector<Estimate> limit;
  std::vector<CellResult> cells;

  bool pass() const;
  std::size_t failures() const;
};

// Curve step used for table runs; rows sit on every other node.
inline constexpr double kTableStep = 0.05;

// Runs the table's configuration with `plan.replications` (pass the table's
// own sample count for a faithful reproduction) and compares every cell.
TableRun reproduce(const ReferenceTable& table, const SeedPlan& plan, RunOptions options = {});

// Index of the curve node at t (within 1e-9); throws if absent.
std::size_t node_index(const std::vector<double>& grid, double t);

}  // namespace gcomp
