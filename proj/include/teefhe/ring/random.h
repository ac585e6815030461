#ifndef TEEFHE_RING_RANDOM_H_
#define TEEFHE_RING_RANDOM_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "teefhe/ring/modulus.h"
#include "teefhe/ring/poly.h"

namespace teefhe {

// Byte source for key, mask and noise sampling. System-entropy streams read
// from the OS CSPRNG; seeded streams expand a 32-byte seed with ChaCha20 and
// are fully reproducible. A stream belongs to one thread at a time.
class RandomStream {
 public:
  enum class Kind { kSystemEntropy, kSeeded };
  using Seed = std::array<uint8_t, 32>;

  static RandomStream SystemEntropy();
  static RandomStream Seeded(const Seed& seed);
  // Convenience for tests and CLI flags: seed bytes are the little-endian
  // encoding of `value` followed by zeros.
  static RandomStream Seeded(uint64_t value);

  RandomStream(RandomStream&&) = default;
  RandomStream& operator=(RandomStream&&) = default;
  RandomStream(const RandomStream&) = delete;
  RandomStream& operator=(const RandomStream&) = delete;

  Kind kind() const { return kind_; }

  // Each call records one rng_draw trace event.
  uint64_t NextWord();
  void Fill(std::span<uint8_t> out);

  // Uniform in [0, bound) by masked rejection sampling.
  uint64_t UniformBelow(uint64_t bound);

  uint64_t words_drawn() const { return words_drawn_; }

 private:
  RandomStream(Kind kind, const Seed& seed);
  void Refill();

  Kind kind_;
  Seed key_;
  uint32_t block_counter_ = 0;
  std::array<uint8_t, 512> buffer_;
  std::size_t position_;
  uint64_t words_drawn_ = 0;
};

// Initializes libsodium once per process. Safe to call repeatedly.
void EnsureSodium();

// Default error distribution width and clipping bound.
inline constexpr double kDefaultNoiseStddev = 3.2;
inline constexpr uint32_t kDefaultNoiseBound = 20;

Poly SampleUniformPoly(RandomStream& rng, std::size_t n, const Modulus& q);

// Coefficients uniform in {-1, 0, 1}, stored canonically.
Poly SampleTernaryPoly(RandomStream& rng, std::size_t n, const Modulus& q);

// Discretized normal (sum of twelve uniforms) with the given standard
// deviation, clipped to [-bound, bound], stored canonically.
Poly SampleErrorPoly(RandomStream& rng, std::size_t n, const Modulus& q,
                     double stddev, uint32_t bound);

}  // namespace teefhe

#endif  // TEEFHE_RING_RANDOM_H_
