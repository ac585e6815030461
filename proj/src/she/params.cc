#include "teefhe/she/params.h"

#include <cmath>
#include <string>

#include "teefhe/errors.h"
#include "teefhe/ring/modulus.h"
#include "teefhe/ring/poly.h"

namespace teefhe::she {

namespace {

constexpr int kPresetModulusBits = 61;

void Require(bool ok, const std::string& what) {
  if (!ok) throw ParameterError("invalid encryption parameters: " + what);
}

}  // namespace

void EncryptionParams::Validate() const {
  Require(IsPowerOfTwo(n) && n >= kMinDegree && n <= kMaxDegree,
          "n must be a power of two in [8, 32768], got " + std::to_string(n));
  Require(q >= 2 && q < (uint64_t{1} << Modulus::kMaxBits),
          "q out of range");
  Require(IsPrime(q), "q must be prime");
  Require(q % (2 * n) == 1, "q must be 1 mod 2n");
  Require(t >= 2 && t < q, "t must satisfy 2 <= t < q");
  Require(delta() >= 2, "floor(q/t) must be at least 2");
  Require(std::isfinite(stddev) && stddev >= 0, "stddev must be >= 0");
  Require(bound >= 1, "noise bound must be >= 1");
  Require(relin_window >= 1 && relin_window <= 32,
          "relinearization window must be in [1, 32]");
}

std::size_t EncryptionParams::relin_digit_count() const {
  const std::size_t bits = Modulus(q).bit_count();
  return (bits + relin_window - 1) / relin_window;
}

EncryptionParams PresetForDegree(std::size_t n, uint64_t t) {
  Require(IsPowerOfTwo(n) && n >= kMinDegree && n <= kMaxDegree,
          "no preset for n = " + std::to_string(n));
  EncryptionParams params;
  params.n = n;
  params.q = LargestPrimeBelowPowerOfTwo(kPresetModulusBits, 2 * n);
  params.t = t;
  params.Validate();
  return params;
}

std::vector<std::size_t> PresetDegrees() {
  std::vector<std::size_t> out;
  for (std::size_t n = kMinDegree; n <= kMaxDegree; n *= 2) out.push_back(n);
  return out;
}

}  // namespace teefhe::she
