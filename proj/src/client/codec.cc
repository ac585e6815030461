#include "teefhe/client/codec.h"

#include <bit>
#include <cmath>
#include <string>

#include "teefhe/errors.h"

namespace teefhe::client {

FixedPointCodec::FixedPointCodec(uint64_t scale, uint64_t t)
    : scale_(scale), t_(t) {
  if (!std::has_single_bit(scale)) {
    throw ParameterError("codec scale must be a power of two");
  }
  if (t < 2 || scale >= t / 2) {
    throw ParameterError("codec scale must be below t / 2");
  }
}

uint64_t FixedPointCodec::Encode(double x) const {
  const double scaled = std::nearbyint(x * static_cast<double>(scale_));
  const double half = static_cast<double>(t_ / 2);
  if (!(std::fabs(scaled) < half)) {
    throw ParameterError("value " + std::to_string(x) +
                         " does not fit the plaintext modulus at this scale");
  }
  const auto v = static_cast<int64_t>(scaled);
  return v >= 0 ? static_cast<uint64_t>(v)
                : t_ - static_cast<uint64_t>(-v);
}

double FixedPointCodec::Decode(uint64_t v) const {
  v %= t_;
  const int64_t centered = v > t_ / 2 ? -static_cast<int64_t>(t_ - v)
                                      : static_cast<int64_t>(v);
  return static_cast<double>(centered) / static_cast<double>(scale_);
}

}  // namespace teefhe::client
