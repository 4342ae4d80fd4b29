#pragma once

#include <cstdint>
#include <limits>

namespace sis {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Derives an independent seed from a parent seed and a label.
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t label) {
  return mix64(mix64(parent + 0x9e3779b97f4a7c15ULL) ^ (label * 0xd1b54a32d192ed03ULL + 1));
}

/// Random stream keyed by (master seed, replication, step). Each key yields
/// its own SplitMix64 sequence, so a draw depends only on its key and its
/// position in the stream, never on the order replications are executed.
class Substream {
 public:
  using result_type = std::uint64_t;

  Substream(std::uint64_t master_seed, std::uint64_t replication, std::uint64_t step)
      : state_(derive_seed(derive_seed(master_seed, replication), step)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Exact at the endpoints: p = 0 never succeeds, p = 1 always does.
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::uint64_t state_;
};

}  // namespace sis
