#include "gcomp/reproduce.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "gcomp/errors.hpp"
#include "gcomp/numeric.hpp"

namespace gcomp {

bool TableRun::pass() const { return failures() == 0; }

std::size_t TableRun::failures() const {
  return static_cast<std::size_t>(std::count_if(cells.begin(), cells.end(), [](const CellResult& c) { return !c.pass; }));
}

std::size_t node_index(const std::vector<double>& grid, double t) {
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (std::abs(grid[k] - t) < 1e-9) return k;
  }
  throw ValidationError("t=" + detail::format_double(t) + " is not a grid node");
}

TableRun reproduce(const ReferenceTable& table, const SeedPlan& plan, RunOptions options) {
  const VectorSet set = fixture(table.set);
  const ModelParams params = make_params(set, table.variant, table.m, table.beta, table.s, table.c3);
  double last = 0.0;
  for (const auto& r : table.rows) last = std::max(last, r.t);
  TableRun run;
  run.table = &table;
  run.plan = plan;
  const std::vector<double> grid = make_grid(0.0, last, kTableStep);
  run.curve = integrate_curve(set, params, grid, plan, options);

  std::vector<LogEstimate> lifted_limit;
  if (table.has_limit) {
    if (table.variant == Variant::Lifted) {
      const double c3s = table.limit_c3s.value_or(table.beta * table.c3);
      lifted_limit = lifted_exp_functional(set, table.m, table.s, c3s, grid, plan, options);
      for (const auto& le : lifted_limit) run.limit.push_back(le.raw);
    } else {
      run.limit = interpolated_max(set, table.m, table.s, grid, plan, table.variant != Variant::Spherical, options);
    }
  }

  const std::size_t n = set.dim();
  const double bc = table.beta * table.c3;
  auto adjusted = [&](const Estimate& e) -> std::pair<double, double> {
    const double v = adjusted_value(e.mean, table.beta, table.c3, n);
    // d adjusted / d psi = 1 / (beta c3 psi sqrt n)
    const double se = e.std_error / (std::abs(bc) * e.mean * std::sqrt(static_cast<double>(n)));
    return {v, se};
  };

  for (const auto& row : table.rows) {
    const std::size_t k = node_index(grid, row.t);
    for (const auto& cell : row.cells) {
      double value = 0.0;
      double se = 0.0;
      auto take = [&](const Estimate& e) {
        value = e.mean;
        se = e.std_error;
      };
      switch (cell.column) {
        case Column::DpsiStandard: take(run.curve.dpsi_standard[k]); break;
        case Column::DpsiComputed: take(run.curve.dpsi_computed[k]); break;
        case Column::PsiIntStandard: take(run.curve.psi_from_standard[k]); break;
        case Column::PsiIntComputed: take(run.curve.psi_from_computed[k]); break;
        case Column::PsiDirect: take(run.curve.psi_direct[k]); break;
        case Column::Limit: take(run.limit.at(k)); break;
        case Column::AdjIntStandard: std::tie(value, se) = adjusted(run.curve.psi_from_standard[k]); break;
        case Column::AdjIntComputed: std::tie(value, se) = adjusted(run.curve.psi_from_computed[k]); break;
        case Column::AdjDirect: std::tie(value, se) = adjusted(run.curve.psi_direct[k]); break;
        case Column::AdjLimit: std::tie(value, se) = adjusted(run.limit.at(k)); break;
      }
      const bool ok = std::abs(value - cell.expected) <= cell.tolerance;
      run.cells.push_back({row.t, cell.column, cell.expected, cell.tolerance, value, se, ok});
    }
  }
  return run;
}

}  // namespace gcomp
