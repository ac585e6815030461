#include "teefhe/ring/poly.h"

#include <algorithm>
#include <string>

#include "teefhe/errors.h"
#include "teefhe/ring/ntt.h"

namespace teefhe {

namespace {

void CheckCompatible(const Poly& a, const Poly& b) {
  if (a.n() != b.n() || !(a.modulus() == b.modulus())) {
    throw ParameterError("polynomial operands differ in degree or modulus");
  }
}

Poly SchoolbookProduct(const Poly& a, const Poly& b) {
  const std::size_t n = a.n();
  const Modulus& q = a.modulus();
  Poly result(n, q);
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      const uint64_t term = q.Mul(a[i], b[j]);
      const std::size_t k = i + j;
      if (k < n) {
        result[k] = q.Add(result[k], term);
      } else {
        result[k - n] = q.Sub(result[k - n], term);
      }
    }
  }
  return result;
}

}  // namespace

bool IsPowerOfTwo(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

Poly::Poly(std::size_t n, const Modulus& modulus)
    : coeffs_(n, 0), modulus_(modulus) {
  if (!IsPowerOfTwo(n)) {
    throw ParameterError("polynomial length must be a power of two, got " +
                         std::to_string(n));
  }
}

Poly Poly::FromCoefficients(std::vector<uint64_t> coeffs,
                            const Modulus& modulus) {
  if (!IsPowerOfTwo(coeffs.size())) {
    throw ParameterError("polynomial length must be a power of two, got " +
                         std::to_string(coeffs.size()));
  }
  for (uint64_t c : coeffs) {
    if (c >= modulus.value()) {
      throw ParameterError("coefficient " + std::to_string(c) +
                           " not reduced modulo " +
                           std::to_string(modulus.value()));
    }
  }
  return Poly(std::move(coeffs), modulus);
}

bool Poly::IsZero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(),
                     [](uint64_t c) { return c == 0; });
}

uint64_t Poly::InfinityNorm() const {
  uint64_t norm = 0;
  for (uint64_t c : coeffs_) {
    const int64_t centered = modulus_.Centered(c);
    const uint64_t magnitude =
        static_cast<uint64_t>(centered < 0 ? -centered : centered);
    norm = std::max(norm, magnitude);
  }
  return norm;
}

Poly PolyAddMod(const Poly& a, const Poly& b) {
  CheckCompatible(a, b);
  Poly result(a.n(), a.modulus());
  for (std::size_t i = 0; i < a.n(); ++i) {
    result[i] = a.modulus().Add(a[i], b[i]);
  }
  return result;
}

Poly PolySubMod(const Poly& a, const Poly& b) {
  CheckCompatible(a, b);
  Poly result(a.n(), a.modulus());
  for (std::size_t i = 0; i < a.n(); ++i) {
    result[i] = a.modulus().Sub(a[i], b[i]);
  }
  return result;
}

Poly PolyNegateMod(const Poly& a) {
  Poly result(a.n(), a.modulus());
  for (std::size_t i = 0; i < a.n(); ++i) {
    result[i] = a.modulus().Negate(a[i]);
  }
  return result;
}

Poly PolyScalarMulMod(const Poly& a, uint64_t scalar) {
  const Modulus& q = a.modulus();
  const uint64_t s = q.Reduce(scalar);
  Poly result(a.n(), q);
  for (std::size_t i = 0; i < a.n(); ++i) result[i] = q.Mul(a[i], s);
  return result;
}

Poly PolyNegacyclicMulMod(const Poly& a, const Poly& b,
                          MulAlgorithm algorithm) {
  CheckCompatible(a, b);
  const bool ntt_ok = NttTables::Supports(a.n(), a.modulus().value());
  if (algorithm == MulAlgorithm::kNtt && !ntt_ok) {
    throw ConfigurationError("NTT requested but q != 1 mod 2n or q not prime");
  }
  if (algorithm == MulAlgorithm::kSchoolbook ||
      (algorithm == MulAlgorithm::kAuto && !ntt_ok)) {
    return SchoolbookProduct(a, b);
  }
  const auto tables = NttTables::Get(a.n(), a.modulus());
  std::vector<uint64_t> fa(a.coeffs().begin(), a.coeffs().end());
  std::vector<uint64_t> fb(b.coeffs().begin(), b.coeffs().end());
  tables->Forward(fa);
  tables->Forward(fb);
  const Modulus& q = a.modulus();
  for (std::size_t i = 0; i < fa.size(); ++i) fa[i] = q.Mul(fa[i], fb[i]);
  tables->Inverse(fa);
  return Poly::FromCoefficients(std::move(fa), q);
}

}  // namespace teefhe
