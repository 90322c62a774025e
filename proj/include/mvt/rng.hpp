#ifndef MVT_RNG_HPP
#define MVT_RNG_HPP

#include <cstdint>
#include <random>

namespace mvt {

/// Seeded pseudo-random stream. Uniform and normal variates are produced by
/// code in this class rather than std:: distributions, so a seed reproduces
/// the same sequence on every standard library.
///
/// Streams are not thread safe; hand each worker its own split().
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed);

  std::uint64_t seed() const noexcept { return seed_; }

  /// Independent child stream number `index`, a pure function of
  /// (seed, index); it does not advance this stream.
  RngStream split(std::uint64_t index) const;

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();
  /// Standard normal (Marsaglia polar method, pairs cached).
  double normal();

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// SplitMix64 finalizer; used for seed derivation.
std::uint64_t mix_seed(std::uint64_t x) noexcept;

}  // namespace mvt

#endif  // MVT_RNG_HPP
