#pragma once

#include <array>
#include <cstdint>

namespace gcomp {

// Philox4x32-10 counter-based block cipher (Salmon et al., SC'11).
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter apply(Counter ctr, Key key);
};

// Standard normal variates for one (seed, stream) pair.
//
// Block b of the stream is Philox(counter = {b_lo, b_hi, stream_lo,
// stream_hi}, key = {seed_lo, seed_hi}). Each block yields two 53-bit
// uniforms u (from words 0,1) and v (from words 2,3); Box-Muller turns them
// into sqrt(-2 log(1-u)) cos(2 pi v) followed by the matching sine term.
class NormalStream {
 public:
  static constexpr const char* kGeneratorName = "philox4x32-10/box-muller";

  NormalStream(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

  double next();

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace gcomp
