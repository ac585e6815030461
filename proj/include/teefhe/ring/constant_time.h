#ifndef TEEFHE_RING_CONSTANT_TIME_H_
#define TEEFHE_RING_CONSTANT_TIME_H_

#include <cstddef>
#include <cstdint>
#include <span>

#include "teefhe/ring/modulus.h"
#include "teefhe/ring/trace.h"

// Branch-free word operations used on secret data inside the enclave path.
// Every helper reports its work to the trace recorder so that differential
// tests can compare executions across secrets.
namespace teefhe::ct {

// All-ones when `condition` is nonzero, zero otherwise.
inline uint64_t Mask(uint64_t condition) {
  return 0 - static_cast<uint64_t>(condition != 0);
}

inline uint64_t Select(uint64_t condition, uint64_t if_true,
                       uint64_t if_false) {
  const uint64_t m = Mask(condition);
  return (if_true & m) | (if_false & ~m);
}

// size: number of 64-bit words. Copies source[0, size) into dest[0, size)
// when cond is 1 and leaves dest untouched when cond is 0. Both buffers are
// read on every iteration regardless of cond.
void ConditionalMove(std::span<const uint64_t> source,
                     std::span<uint64_t> dest, std::size_t size,
                     uint64_t cond);

// base^exponent mod modulus by square-and-multiply over all 64 exponent bits,
// with the multiply step committed through ConditionalMove.
uint64_t ExponentiateUintMod(uint64_t base, uint64_t exponent,
                             const Modulus& modulus);

// Traced modular word operations.
inline uint64_t AddMod(uint64_t a, uint64_t b, const Modulus& q) {
  trace::Record(trace::OpKind::kAddMod);
  return q.Add(a, b);
}

inline uint64_t SubMod(uint64_t a, uint64_t b, const Modulus& q) {
  trace::Record(trace::OpKind::kSubMod);
  return q.Sub(a, b);
}

inline uint64_t MulMod(uint64_t a, uint64_t b, const Modulus& q) {
  trace::Record(trace::OpKind::kMulMod);
  return q.Mul(a, b);
}

inline uint64_t NegMod(uint64_t a, const Modulus& q) {
  trace::Record(trace::OpKind::kNegMod);
  return q.Negate(a);
}

inline uint64_t Load(std::span<const uint64_t> secret, std::size_t index) {
  trace::Record(trace::OpKind::kLoad, static_cast<int32_t>(index));
  return secret[index];
}

inline void Store(std::span<uint64_t> secret, std::size_t index,
                  uint64_t value) {
  trace::Record(trace::OpKind::kStore, static_cast<int32_t>(index));
  secret[index] = value;
}

}  // namespace teefhe::ct

#endif  // TEEFHE_RING_CONSTANT_TIME_H_
