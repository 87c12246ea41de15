#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "gcomp/draw.hpp"
#include "gcomp/rng.hpp"
#include "gcomp/vector_set.hpp"

namespace gcomp {

struct SeedPlan {
  static constexpr std::uint64_t kDefaultSeed = 20240531;
  static constexpr std::size_t kDefaultReplications = 30000;

  std::uint64_t master_seed = kDefaultSeed;
  std::size_t replications = kDefaultReplications;
};

// Throws ValidationError unless replications >= 2.
void validate(const SeedPlan& plan);

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
  std::size_t skipped = 0;
};

// sqrt(a.se^2 + b.se^2)
double combined_se(const Estimate& a, const Estimate& b);

// Stream of replication `index`; throws DomainError if index >= N.
NormalStream replication_stream(const SeedPlan& plan, std::size_t index);

// Replications are reduced in fixed blocks of this many indices; block
// summaries are merged by a pairwise tree in index order.
inline constexpr std::size_t kAggregationBlock = 1024;

// Mean and standard error (sample sd / sqrt(n)). Throws AggregationError
// naming the first non-finite index.
Estimate aggregate(std::span<const double> values);

// A quantity evaluated on one draw at every point of a t-grid.
// Implementations must be safe to call concurrently.
class DrawFunctional {
 public:
  virtual ~DrawFunctional() = default;
  // Values per grid point.
  virtual std::size_t width() const = 0;
  // out[k * width() + c] for grid point k, column c. May throw
  // DegenerateDrawError to skip the replication.
  virtual void evaluate(const ReplicationDraw& draw, std::span<const double> grid, std::span<double> out) const = 0;
};

struct RunOptions {
  unsigned threads = 0;  // 0: default_threads()
};

// GCOMP_THREADS if set, otherwise the hardware concurrency.
unsigned default_threads();

struct PairedResult {
  std::size_t grid_size = 0;
  std::size_t width = 0;
  std::vector<Estimate> estimates;  // [k * width + c]
  std::size_t skipped = 0;

  const Estimate& at(std::size_t k, std::size_t c) const { return estimates[k * width + c]; }
};

// Each replication's draw is generated once and evaluated at every grid
// point. The result is bit-identical for any thread count.
PairedResult paired_run(const VectorSet& set, std::size_t m, const SeedPlan& plan, std::span<const double> grid,
                        const DrawFunctional& functional, RunOptions options = {});

// Raw per-replication values, row r holding grid_size * width values.
struct SampleMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;
  std::vector<unsigned char> skipped;

  double operator()(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
  // Non-skipped values of column c, in replication order.
  std::vector<double> column(std::size_t c) const;
  std::size_t skipped_count() const;
};

SampleMatrix collect_samples(const VectorSet& set, std::size_t m, const SeedPlan& plan, std::span<const double> grid,
                             const DrawFunctional& functional, RunOptions options = {});

// Throws AggregationError if more than 0.01% of replications were skipped.
void check_skip_budget(std::size_t skipped, std::size_t replications);

}  // namespace gcomp
