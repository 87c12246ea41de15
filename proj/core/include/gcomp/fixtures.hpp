#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gcomp/model.hpp"
#include "gcomp/vector_set.hpp"

namespace gcomp {

// Built-in 5 x 10 vector sets: "x_plus" (unit columns, renormalized from the
// 4-decimal printed values) and "x_minus" (general norms, used as printed).
VectorSet fixture(std::string_view name);
// The printed 4-decimal matrix, before any renormalization.
Matrix fixture_raw(std::string_view name);
std::vector<std::string> fixture_names();

enum class Column {
  DpsiStandard,
  DpsiComputed,
  PsiIntStandard,
  PsiIntComputed,
  PsiDirect,
  Limit,
  // Adjusted versions of the lifted value columns.
  AdjIntStandard,
  AdjIntComputed,
  AdjDirect,
  AdjLimit,
};

std::string_view to_string(Column c);

struct ReferenceCell {
  Column column;
  double expected;
  double tolerance;
};

struct ReferenceRow {
  double t;
  std::vector<ReferenceCell> cells;
};

struct ReferenceTable {
  std::string id;
  std::string caption;
  std::string set;  // fixture name
  Variant variant;
  std::size_t m = 5;
  double beta;
  int s;
  double c3 = 0.0;                 // Lifted only
  std::optional<double> limit_c3s;  // lifted limit column uses exp(c3s max ...)
  bool has_limit = false;
  std::size_t samples;
  std::vector<ReferenceRow> rows;
};

const ReferenceTable& reference(std::string_view id);
std::vector<std::string> reference_ids();

}  // namespace gcomp
