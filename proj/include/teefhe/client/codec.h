#ifndef TEEFHE_CLIENT_CODEC_H_
#define TEEFHE_CLIENT_CODEC_H_

#include <cstdint>

namespace teefhe::client {

// Fixed-point encoding of reals into Z_t: x -> round(x * scale) mod t.
class FixedPointCodec {
 public:
  // scale must be a power of two and smaller than t / 2.
  FixedPointCodec(uint64_t scale, uint64_t t);

  // ParameterError when |x * scale| does not fit below t / 2.
  uint64_t Encode(double x) const;
  // Centered lift divided by the scale.
  double Decode(uint64_t v) const;
  // Worst-case round-trip error.
  double Resolution() const { return 0.5 / static_cast<double>(scale_); }

  uint64_t scale() const { return scale_; }
  uint64_t t() const { return t_; }

 private:
  uint64_t scale_;
  uint64_t t_;
};

}  // namespace teefhe::client

#endif  // TEEFHE_CLIENT_CODEC_H_
