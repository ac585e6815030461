#ifndef TEEFHE_SHE_TYPES_H_
#define TEEFHE_SHE_TYPES_H_

#include <array>
#include <cstdint>
#include <vector>

#include "teefhe/ring/poly.h"
#include "teefhe/she/context.h"

namespace teefhe::she {

// Message polynomial with coefficients in [0, t).
struct Plaintext {
  Poly m;

  bool operator==(const Plaintext&) const = default;

  // Coefficients beyond `values.size()` are zero. Values are reduced mod t.
  static Plaintext FromValues(const Context& ctx,
                              const std::vector<uint64_t>& values);
  static Plaintext Constant(const Context& ctx, uint64_t value);
};

struct Ciphertext {
  std::vector<Poly> parts;
  uint64_t params_id = 0;

  std::size_t size() const { return parts.size(); }
  bool operator==(const Ciphertext&) const = default;
};

// Ternary secret s stored canonically mod q.
struct SecretKey {
  Poly s;
  bool operator==(const SecretKey&) const = default;
};

// pk0 = -(pk1 * s + e), pk1 uniform.
struct PublicKey {
  Poly pk0;
  Poly pk1;
  bool operator==(const PublicKey&) const = default;
};

// Digit j encrypts s^2 * 2^(j*w) under s.
struct EvalKeys {
  std::vector<std::array<Poly, 2>> digits;
  bool operator==(const EvalKeys&) const = default;
};

struct KeySet {
  SecretKey secret;
  PublicKey public_key;
  EvalKeys eval;
};

}  // namespace teefhe::she

#endif  // TEEFHE_SHE_TYPES_H_
