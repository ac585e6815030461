#include "teefhe/client/sigmoid.h"

#include <algorithm>
#include <cmath>

#include "teefhe/errors.h"

namespace teefhe::client {

double Logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

SigmoidPoly3 FitSigmoidPoly3(double bound, std::size_t samples) {
  if (samples < 3 || !(bound > 0)) {
    throw ParameterError("sigmoid fit needs a positive bound and >= 3 samples");
  }
  // Normal equations for g(x) = logistic(x) - 1/2 against {x, x^3}; the
  // constant column is orthogonal to both on a symmetric grid.
  double s2 = 0, s4 = 0, s6 = 0, g1 = 0, g3 = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double x = -bound + 2.0 * bound * static_cast<double>(i) /
                                  static_cast<double>(samples - 1);
    const double g = Logistic(x) - 0.5;
    const double x2 = x * x;
    s2 += x2;
    s4 += x2 * x2;
    s6 += x2 * x2 * x2;
    g1 += g * x;
    g3 += g * x2 * x;
  }
  const double det = s2 * s6 - s4 * s4;
  SigmoidPoly3 p;
  p.c0 = 0.5;
  p.c1 = (g1 * s6 - g3 * s4) / det;
  p.c3 = (s2 * g3 - s4 * g1) / det;
  return p;
}

double MaxFitError(const SigmoidPoly3& poly, double bound,
                   std::size_t samples) {
  double worst = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double x = -bound + 2.0 * bound * static_cast<double>(i) /
                                  static_cast<double>(samples - 1);
    worst = std::max(worst, std::fabs(poly(x) - Logistic(x)));
  }
  return worst;
}

QuantizedSigmoid Quantize(const SigmoidPoly3& poly, uint64_t scale) {
  if (scale < 2 || scale % 2 != 0) {
    throw ParameterError("sigmoid scale must be even");
  }
  const double s = static_cast<double>(scale);
  return {static_cast<int64_t>(scale / 2),
          static_cast<int64_t>(std::llround(poly.c1 * s)),
          static_cast<int64_t>(std::llround(poly.c3 * s)), scale};
}

}  // namespace teefhe::client
