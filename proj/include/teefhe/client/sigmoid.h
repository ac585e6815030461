#ifndef TEEFHE_CLIENT_SIGMOID_H_
#define TEEFHE_CLIENT_SIGMOID_H_

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>

namespace teefhe::client {

using BigInt = boost::multiprecision::cpp_int;

// c0 + c1 x + c3 x^3.
struct SigmoidPoly3 {
  double c0 = 0.5;
  double c1 = 0;
  double c3 = 0;
  double operator()(double x) const { return c0 + x * (c1 + c3 * x * x); }
};

double Logistic(double x);

// Least-squares fit of the logistic function on [-bound, bound] over a
// uniform grid, basis {1, x, x^3}. The odd basis makes c0 exactly 1/2.
SigmoidPoly3 FitSigmoidPoly3(double bound = 8.0, std::size_t samples = 16001);

// max |poly(x) - logistic(x)| over a uniform grid.
double MaxFitError(const SigmoidPoly3& poly, double bound = 8.0,
                   std::size_t samples = 100001);

// Integer coefficients at scale s_c: C0 = s_c / 2, Ci = round(ci * s_c).
struct QuantizedSigmoid {
  int64_t c0;
  int64_t c1;
  int64_t c3;
  uint64_t scale;
};
QuantizedSigmoid Quantize(const SigmoidPoly3& poly, uint64_t scale);

// Evaluates the quantized polynomial on z, an integer holding x * sigma.
// The result holds poly(x) * scale * sigma^3:
//   C0 sigma^3 + C1 sigma^2 z + C3 z^3
// using two ciphertext multiplications and plaintext operations only.
// Backend needs Add, MulPlain(v, BigInt), AddPlain(v, BigInt), Mul.
template <class Backend>
typename Backend::Value EvalSigmoidPoly3(Backend& b,
                                         const typename Backend::Value& z,
                                         const BigInt& sigma,
                                         const QuantizedSigmoid& q) {
  const auto z2 = b.Mul(z, z);
  const auto z3 = b.Mul(z2, z);
  const auto cubic = b.MulPlain(z3, BigInt(q.c3));
  const auto linear = b.MulPlain(z, BigInt(q.c1) * sigma * sigma);
  return b.AddPlain(b.Add(cubic, linear), BigInt(q.c0) * sigma * sigma * sigma);
}

}  // namespace teefhe::client

#endif  // TEEFHE_CLIENT_SIGMOID_H_
