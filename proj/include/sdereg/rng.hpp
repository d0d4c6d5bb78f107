#pragma once

#include <array>
#include <cstdint>

namespace sdereg {

/// Philox4x32-10 counter-based generator (Salmon et al., Random123).
/// Stateless: the output is a pure function of (counter, key).
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter ctr, Key key);
};

/// Independent substream identified by (seed, stream). Sample i of a Monte
/// Carlo run draws from stream i, so results do not depend on which worker
/// processes which sample.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();

  /// Standard normal via a 256-layer ziggurat.
  double gaussian();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int available_ = 0;
};

}  // namespace sdereg
