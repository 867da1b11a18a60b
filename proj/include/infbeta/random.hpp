#ifndef INFBETA_RANDOM_HPP
#define INFBETA_RANDOM_HPP

#include <cstdint>
#include <initializer_list>
#include <random>

namespace infbeta {

// Seedable 64-bit random source. Single owner; parallel users derive
// independent substreams with `substream`.
class RandomSource {
 public:
  using result_type = std::uint64_t;

  explicit RandomSource(std::uint64_t seed);

  // Stream keyed by a seed and a list of indices, e.g. (seed, n, replication).
  // Identical keys give identical streams regardless of creation order.
  static RandomSource substream(std::uint64_t seed, std::initializer_list<std::uint64_t> keys);

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  // Uniform on the open interval (0, 1).
  double uniform_open();
  double normal();
  // Gamma(shape, 1) by Marsaglia-Tsang; shapes below one use the
  // U^{1/shape} boost.
  double gamma(double shape);

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

// SplitMix64 finalizer, exposed for key mixing.
std::uint64_t mix64(std::uint64_t x);

}  // namespace infbeta

#endif  // INFBETA_RANDOM_HPP
