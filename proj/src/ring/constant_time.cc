#include "teefhe/ring/constant_time.h"

#include "teefhe/errors.h"

namespace teefhe::ct {

void ConditionalMove(std::span<const uint64_t> source,
                     std::span<uint64_t> dest, std::size_t size,
                     uint64_t cond) {
  if (source.size() < size || dest.size() < size) {
    throw ParameterError("conditional move buffers shorter than size");
  }
  const uint64_t flag = static_cast<uint64_t>(cond != 0);
  for (std::size_t i = 0; i < size; ++i) {
    trace::Record(trace::OpKind::kLoad, static_cast<int32_t>(i));
    trace::Record(trace::OpKind::kLoad, static_cast<int32_t>(i));
    uint64_t value = dest[i];
    const uint64_t candidate = source[i];
#if defined(__x86_64__)
    __asm__ volatile(
        "cmpq $1, %[flag]\n\t"
        "cmove %[candidate], %[value]\n\t"
        : [value] "+r"(value)
        : [candidate] "r"(candidate), [flag] "r"(flag)
        : "cc");
#else
    value = Select(flag, candidate, value);
#endif
    trace::Record(trace::OpKind::kCmov);
    trace::Record(trace::OpKind::kStore, static_cast<int32_t>(i));
    dest[i] = value;
  }
}

uint64_t ExponentiateUintMod(uint64_t base, uint64_t exponent,
                             const Modulus& modulus) {
  if (base >= modulus.value()) {
    throw ParameterError("exponentiation base must be reduced");
  }
  uint64_t power = base;
  uint64_t product = 0;
  uint64_t intermediate = 1 % modulus.value();
  for (int bit = 0; bit < 64; ++bit) {
    product = MulMod(power, intermediate, modulus);
    ConditionalMove(std::span<const uint64_t>(&product, 1),
                    std::span<uint64_t>(&intermediate, 1), 1, exponent & 1);
    exponent >>= 1;
    power = MulMod(power, power, modulus);
  }
  return intermediate;
}

}  // namespace teefhe::ct
