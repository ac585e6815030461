#ifndef TEEFHE_SHE_PARAMS_H_
#define TEEFHE_SHE_PARAMS_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "teefhe/ring/random.h"

namespace teefhe::she {

struct EncryptionParams {
  std::size_t n = 0;
  uint64_t q = 0;
  uint64_t t = 0;
  double stddev = kDefaultNoiseStddev;
  uint32_t bound = kDefaultNoiseBound;
  // Bits per relinearization digit.
  uint8_t relin_window = 16;

  bool operator==(const EncryptionParams&) const = default;

  // Throws ParameterError naming the first violated invariant.
  void Validate() const;

  uint64_t delta() const { return q / t; }
  std::size_t relin_digit_count() const;
};

inline constexpr std::size_t kMinDegree = 8;
inline constexpr std::size_t kMaxDegree = 32768;
inline constexpr uint64_t kDefaultPlainModulus = 256;

// Preset for ring degree n: q is the largest prime below 2^61 with
// q = 1 (mod 2n). Throws ParameterError for unsupported n.
EncryptionParams PresetForDegree(std::size_t n,
                                 uint64_t t = kDefaultPlainModulus);

// Degrees accepted by PresetForDegree.
std::vector<std::size_t> PresetDegrees();

}  // namespace teefhe::she

#endif  // TEEFHE_SHE_PARAMS_H_
