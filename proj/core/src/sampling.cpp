#include "gcomp/sampling.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>

#include "gcomp/errors.hpp"

namespace gcomp {

namespace {

struct Summary {
  std::size_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;
};

Summary merge(const Summary& a, const Summary& b) {
  if (a.n == 0) return b;
  if (b.n == 0) return a;
  Summary r;
  r.n = a.n + b.n;
  const double na = static_cast<double>(a.n);
  const double nb = static_cast<double>(b.n);
  const double nr = static_cast<double>(r.n);
  const double delta = b.mean - a.mean;
  r.mean = a.mean + delta * (nb / nr);
  r.m2 = a.m2 + b.m2 + delta * delta * (na * nb / nr);
  return r;
}

Summary tree_reduce(const Summary* s, std::size_t count) {
  if (count == 0) return {};
  if (count == 1) return s[0];
  const std::size_t half = count / 2;
  return merge(tree_reduce(s, half), tree_reduce(s + half, count - half));
}

// Two-pass summary of column `c` of a block laid out row-major with `stride`.
Summary block_summary(const double* values, const unsigned char* skipped, std::size_t rows, std::size_t stride,
                      std::size_t c) {
  Summary s;
  double sum = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    if (skipped && skipped[r]) continue;
    sum += values[r * stride + c];
    ++s.n;
  }
  if (s.n == 0) return s;
  s.mean = sum / static_cast<double>(s.n);
  for (std::size_t r = 0; r < rows; ++r) {
    if (skipped && skipped[r]) continue;
    const double d = values[r * stride + c] - s.mean;
    s.m2 += d * d;
  }
  return s;
}

Estimate finish(const Summary& s, std::size_t skipped) {
  Estimate e;
  e.mean = s.mean;
  e.n = s.n;
  e.skipped = skipped;
  e.std_error = s.n >= 2 ? std::sqrt(s.m2 / static_cast<double>(s.n - 1) / static_cast<double>(s.n)) : 0.0;
  return e;
}

std::size_t block_count(std::size_t n) { return (n + kAggregationBlock - 1) / kAggregationBlock; }

// Runs fn(block) for every block on `threads` workers. Rethrows the
// exception of the lowest failing block so errors do not depend on timing.
template <class Fn>
void for_each_block(std::size_t blocks, unsigned threads, Fn&& fn) {
  std::vector<std::exception_ptr> errors(blocks);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t b; (b = next.fetch_add(1)) < blocks;) {
      try {
        fn(b);
      } catch (...) {
        errors[b] = std::current_exception();
      }
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(blocks)));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// Evaluates the replications of block b into `values`/`skipped` (rows of
// `cols` values). Returns the number of skipped replications.
void evaluate_block(const VectorSet& set, std::size_t m, const SeedPlan& plan, std::span<const double> grid,
                    const DrawFunctional& f, std::size_t first, std::size_t rows, double* values,
                    unsigned char* skipped) {
  const std::size_t cols = grid.size() * f.width();
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t index = first + r;
    NormalStream stream = replication_stream(plan, index);
    const ReplicationDraw draw = make_draw(set, m, stream);
    std::span<double> out(values + r * cols, cols);
    skipped[r] = 0;
    try {
      f.evaluate(draw, grid, out);
    } catch (const DegenerateDrawError&) {
      skipped[r] = 1;
      std::fill(out.begin(), out.end(), 0.0);
      continue;
    }
    for (std::size_t c = 0; c < cols; ++c) {
      if (!std::isfinite(out[c])) {
        throw AggregationError("non-finite value at replication " + std::to_string(index) + " (column " +
                                   std::to_string(c) + ")",
                               index);
      }
    }
  }
}

}  // namespace

void validate(const SeedPlan& plan) {
  if (plan.replications < 2) throw ValidationError("sample count must be at least 2");
}

double combined_se(const Estimate& a, const Estimate& b) {
  return std::sqrt(a.std_error * a.std_error + b.std_error * b.std_error);
}

NormalStream replication_stream(const SeedPlan& plan, std::size_t index) {
  if (index >= plan.replications) {
    throw DomainError("replication index " + std::to_string(index) + " out of range [0, " +
                      std::to_string(plan.replications) + ")");
  }
  return NormalStream(plan.master_seed, index);
}

Estimate aggregate(std::span<const double> values) {
  for (std::size_t r = 0; r < values.size(); ++r) {
    if (!std::isfinite(values[r])) {
      throw AggregationError("non-finite value at replication " + std::to_string(r), r);
    }
  }
  const std::size_t blocks = block_count(values.size());
  std::vector<Summary> parts(blocks);
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t first = b * kAggregationBlock;
    const std::size_t rows = std::min(kAggregationBlock, values.size() - first);
    parts[b] = block_summary(values.data() + first, nullptr, rows, 1, 0);
  }
  return finish(tree_reduce(parts.data(), parts.size()), 0);
}

unsigned default_threads() {
  if (const char* env = std::getenv("GCOMP_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void check_skip_budget(std::size_t skipped, std::size_t replications) {
  if (static_cast<double>(skipped) > 1e-4 * static_cast<double>(replications)) {
    throw AggregationError(std::to_string(skipped) + " of " + std::to_string(replications) +
                           " replications hit a zero-norm interpolated vector (budget 0.01%)");
  }
}

PairedResult paired_run(const VectorSet& set, std::size_t m, const SeedPlan& plan, std::span<const double> grid,
                        const DrawFunctional& functional, RunOptions options) {
  validate(plan);
  const std::size_t cols = grid.size() * functional.width();
  const std::size_t blocks = block_count(plan.replications);
  std::vector<Summary> parts(blocks * cols);
  std::vector<std::size_t> block_skips(blocks, 0);
  const unsigned threads = options.threads ? options.threads : default_threads();
  for_each_block(blocks, threads, [&](std::size_t b) {
    const std::size_t first = b * kAggregationBlock;
    const std::size_t rows = std::min(kAggregationBlock, plan.replications - first);
    std::vector<double> values(rows * cols);
    std::vector<unsigned char> skipped(rows);
    evaluate_block(set, m, plan, grid, functional, first, rows, values.data(), skipped.data());
    for (std::size_t c = 0; c < cols; ++c) {
      parts[c * blocks + b] = block_summary(values.data(), skipped.data(), rows, cols, c);
    }
    block_skips[b] = static_cast<std::size_t>(std::count(skipped.begin(), skipped.end(), 1));
  });
  PairedResult res;
  res.grid_size = grid.size();
  res.width = functional.width();
  for (auto k : block_skips) res.skipped += k;
  check_skip_budget(res.skipped, plan.replications);
  res.estimates.resize(cols);
  for (std::size_t c = 0; c < cols; ++c) {
    res.estimates[c] = finish(tree_reduce(parts.data() + c * blocks, blocks), res.skipped);
  }
  return res;
}

std::vector<double> SampleMatrix::column(std::size_t c) const {
  std::vector<double> out;
  out.reserve(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!skipped[r]) out.push_back(values[r * cols + c]);
  }
  return out;
}

std::size_t SampleMatrix::skipped_count() const {
  return static_cast<std::size_t>(std::count(skipped.begin(), skipped.end(), 1));
}

SampleMatrix collect_samples(const VectorSet& set, std::size_t m, const SeedPlan& plan, std::span<const double> grid,
                             const DrawFunctional& functional, RunOptions options) {
  validate(plan);
  SampleMatrix sm;
  sm.rows = plan.replications;
  sm.cols = grid.size() * functional.width();
  sm.values.resize(sm.rows * sm.cols);
  sm.skipped.resize(sm.rows);
  const std::size_t blocks = block_count(plan.replications);
  const unsigned threads = options.threads ? options.threads : default_threads();
  for_each_block(blocks, threads, [&](std::size_t b) {
    const std::size_t first = b * kAggregationBlock;
    const std::size_t rows = std::min(kAggregationBlock, plan.replications - first);
    evaluate_block(set, m, plan, grid, functional, first, rows, sm.values.data() + first * sm.cols,
                   sm.skipped.data() + first);
  });
  check_skip_budget(sm.skipped_count(), plan.replications);
  return sm;
}

}  // namespace gcomp
