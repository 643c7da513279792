#pragma once

#include <cstdint>
#include <random>

namespace tailwalk {

/// SplitMix64 step, used to derive per-stream seeds from a master seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Derivation recorded in run manifests: stream k of master seed s is
/// mt19937_64 seeded with splitmix64 applied twice to (s XOR golden*(k+1)).
inline std::uint64_t derive_stream_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t state = master ^ (0x9E3779B97F4A7C15ULL * (stream + 1));
  (void)splitmix64(state);
  return splitmix64(state);
}

/// Deterministic random stream. All uniform doubles come from the top 53
/// bits of the engine output, so draws are identical across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t master, std::uint64_t stream)
      : engine_(derive_stream_seed(master, stream)) {}

  std::uint64_t bits() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1].
  double uniform_open_closed() { return 1.0 - uniform01(); }

  /// Uniform on (0, 1).
  double uniform_open() {
    double u;
    do {
      u = uniform01();
    } while (u == 0.0);
    return u;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace tailwalk
