#include "sdereg/rng.hpp"

#include <cmath>

namespace sdereg {

Philox4x32::Counter Philox4x32::block(Counter ctr, Key key) {
  constexpr std::uint32_t kMul0 = 0xD2511F53u;
  constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
    const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream) {}

void RandomStream::refill() {
  const Philox4x32::Counter ctr{
      static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
      static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
  const Philox4x32::Key key{static_cast<std::uint32_t>(seed_),
                            static_cast<std::uint32_t>(seed_ >> 32)};
  const auto out = Philox4x32::block(ctr, key);
  buffer_[0] = (std::uint64_t{out[1]} << 32) | out[0];
  buffer_[1] = (std::uint64_t{out[3]} << 32) | out[2];
  available_ = 2;
  ++block_;
}

std::uint64_t RandomStream::next_u64() {
  if (available_ == 0) refill();
  return buffer_[--available_ == 0 ? 1 : 0];
}

double RandomStream::uniform() {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

namespace {

// Layer boundaries x[0..256] and densities f[i] = exp(-x[i]^2 / 2) of the
// 256-layer ziggurat (Marsaglia and Tsang, 2000). x[0] is the width of the
// base strip, which carries the tail beyond kTailStart.
struct Ziggurat {
  static constexpr double kTailStart = 3.6541528853610088;
  static constexpr double kLayerArea = 0.00492867323399;

  double x[257];
  double f[257];

  Ziggurat() {
    auto pdf = [](double v) { return std::exp(-0.5 * v * v); };
    x[0] = kLayerArea / pdf(kTailStart);
    x[1] = kTailStart;
    for (int i = 2; i < 256; ++i)
      x[i] = std::sqrt(-2.0 * std::log(kLayerArea / x[i - 1] + pdf(x[i - 1])));
    x[256] = 0.0;
    for (int i = 0; i <= 256; ++i) f[i] = pdf(x[i]);
  }
};

const Ziggurat& ziggurat() {
  static const Ziggurat z;
  return z;
}

}  // namespace

double RandomStream::gaussian() {
  const Ziggurat& z = ziggurat();
  for (;;) {
    const std::uint64_t bits = next_u64();
    const auto layer = static_cast<int>(bits & 0xFF);
    // Top 53 bits give a symmetric uniform on (-1, 1), disjoint from the
    // layer bits.
    const double u =
        2.0 * ((static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53) - 1.0;
    const double v = u * z.x[layer];
    if (std::abs(v) < z.x[layer + 1]) return v;
    if (layer == 0) {
      double tail, y;
      do {
        tail = -std::log(uniform()) / Ziggurat::kTailStart;
        y = -std::log(uniform());
      } while (2.0 * y < tail * tail);
      return u < 0.0 ? -(Ziggurat::kTailStart + tail)
                     : Ziggurat::kTailStart + tail;
    }
    if (z.f[layer + 1] + (z.f[layer] - z.f[layer + 1]) * uniform() <
        std::exp(-0.5 * v * v))
      return v;
  }
}

}  // namespace sdereg
