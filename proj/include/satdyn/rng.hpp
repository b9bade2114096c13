#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

namespace satdyn {

// Identifies one reproducible noise substream. Equal (seed, stream_index)
// always replays the identical sequence; distinct stream_index values never
// share counter blocks, so substreams can be consumed in parallel.
struct NoiseStream {
  std::uint64_t seed = 0;
  std::uint64_t stream_index = 0;
};

namespace detail {

// Philox4x32-10 keyed counter permutation (Salmon et al., SC 2011).
inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                               std::array<std::uint32_t, 2> key) {
  constexpr std::uint32_t mul0 = 0xD2511F53u;
  constexpr std::uint32_t mul1 = 0xCD9E8D57u;
  constexpr std::uint32_t weyl0 = 0x9E3779B9u;
  constexpr std::uint32_t weyl1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(mul0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(mul1) * ctr[2];
    ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
           static_cast<std::uint32_t>(p1),
           static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
           static_cast<std::uint32_t>(p0)};
    key[0] += weyl0;
    key[1] += weyl1;
  }
  return ctr;
}

inline constexpr std::uint32_t lo32(std::uint64_t v) { return static_cast<std::uint32_t>(v); }
inline constexpr std::uint32_t hi32(std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); }

}  // namespace detail

// Sequential view over one counter-based substream. The 128-bit counter is
// (draw_index, stream_index) and the key is the seed, so output i of stream s
// is a pure function of (seed, s, i) independent of any other stream.
class RngStream {
 public:
  explicit RngStream(NoiseStream id) : seed_(id.seed), stream_(id.stream_index) {}

  std::uint64_t next_u64() {
    const std::uint64_t block = counter_ >> 1;
    if (block != cached_block_) {
      cached_ = detail::philox4x32(
          {detail::lo32(block), detail::hi32(block), detail::lo32(stream_), detail::hi32(stream_)},
          {detail::lo32(seed_), detail::hi32(seed_)});
      cached_block_ = block;
    }
    const unsigned half = static_cast<unsigned>(counter_ & 1u);
    ++counter_;
    return (static_cast<std::uint64_t>(cached_[2 * half + 1]) << 32) | cached_[2 * half];
  }

  // Uniform on the open interval (0,1); never returns 0 or 1, so logs are safe.
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  // Gamma(shape, 1) by Marsaglia-Tsang squeeze; exact for all shape > 0.
  double gamma(double shape) {
    if (!(shape > 0.0)) throw std::domain_error("gamma: shape must be positive");
    if (shape < 1.0) {
      const double g = gamma(shape + 1.0);
      const double u = uniform();
      return g * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x;
      double v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform();
      const double x2 = x * x;
      if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
      if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  double chi_square(double nu) { return 2.0 * gamma(0.5 * nu); }

  // Student's t(nu) as normal / sqrt(chi_square(nu)/nu); valid for any real nu > 0.
  double student_t(double nu) {
    if (!(nu > 0.0)) throw std::domain_error("student_t: degrees of freedom must be positive");
    const double z = normal();
    const double c = chi_square(nu);
    return z / std::sqrt(c / nu);
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  std::uint64_t cached_block_ = ~std::uint64_t{0};
  std::array<std::uint32_t, 4> cached_{};
};

}  // namespace satdyn
