#ifndef TEEFHE_CLIENT_RNS_H_
#define TEEFHE_CLIENT_RNS_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "teefhe/client/bootstrap_link.h"
#include "teefhe/client/runtime.h"
#include "teefhe/client/sigmoid.h"

namespace teefhe::client {

// Arithmetic backends for integer recurrences. All three expose the same
// operations so one template can run on exact integers, on magnitude
// bounds, or on encrypted residues.

// Exact integers.
class PlainBackend {
 public:
  using Value = BigInt;
  Value Add(const Value& a, const Value& b) { return a + b; }
  Value MulPlain(const Value& a, const BigInt& c) { return a * c; }
  Value AddPlain(const Value& a, const BigInt& c) { return a + c; }
  Value Mul(const Value& a, const Value& b) { return a * b; }
};

// Upper bounds on magnitudes; remembers the largest bound produced.
class BoundBackend {
 public:
  using Value = BigInt;
  Value Input(const BigInt& bound) { return Track(abs(bound)); }
  Value Add(const Value& a, const Value& b) { return Track(a + b); }
  Value MulPlain(const Value& a, const BigInt& c) { return Track(a * abs(c)); }
  Value AddPlain(const Value& a, const BigInt& c) { return Track(a + abs(c)); }
  Value Mul(const Value& a, const Value& b) { return Track(a * b); }
  const BigInt& max() const { return max_; }

 private:
  Value Track(Value v) {
    if (v > max_) max_ = v;
    return v;
  }
  BigInt max_ = 0;
};

struct RnsOptions {
  std::size_t n = 2048;
  std::vector<uint64_t> moduli;  // distinct primes, one lane each
  // Attach every lane to this server when set.
  std::optional<std::string> host;
  uint16_t port = 0;
  uint64_t seed = 1;
  bool force_bootstrap_after_multiply = false;
  // Label prefix for lane client ids.
  std::string label = "rns";
};

struct RnsStats {
  uint64_t ops = 0;
  uint64_t muls = 0;
  uint64_t bootstraps = 0;
  uint64_t estimator_resets = 0;
};

// Encrypted integers as residues in independent BFV lanes, one per plaintext
// modulus. Values are reconstructed by CRT with a centered lift, so they are
// exact while their magnitude stays below half the modulus product.
class RnsBackend {
 public:
  class Handle;
  using Value = std::shared_ptr<Handle>;

  explicit RnsBackend(RnsOptions options);
  ~RnsBackend();
  RnsBackend(const RnsBackend&) = delete;
  RnsBackend& operator=(const RnsBackend&) = delete;

  Value Input(const BigInt& v);
  Value Add(const Value& a, const Value& b);
  Value MulPlain(const Value& a, const BigInt& c);
  Value AddPlain(const Value& a, const BigInt& c);
  // Multiply and relinearize.
  Value Mul(const Value& a, const Value& b);
  BigInt Reveal(const Value& v) const;

  const BigInt& modulus_product() const { return product_; }
  std::size_t lanes() const { return lanes_.size(); }
  RnsStats stats() const;
  // The cost table shared by all lanes.
  const she::CostTable& costs() const { return costs_; }

  // Distinct primes in [min_t, max_t], largest first, until their product
  // exceeds 2^bits. ConfigurationError if the range runs out.
  static std::vector<uint64_t> ChooseModuli(int bits, uint64_t min_t = 521,
                                            uint64_t max_t = 1021);

 private:
  struct Lane;
  Value Wrap(std::vector<std::string> regs);

  RnsOptions options_;
  she::CostTable costs_;
  std::vector<std::unique_ptr<Lane>> lanes_;
  BigInt product_;
};

class RnsBackend::Handle {
 public:
  Handle(RnsBackend* owner, std::vector<std::string> regs)
      : owner_(owner), regs_(std::move(regs)) {}
  ~Handle();
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  const std::string& reg(std::size_t lane) const { return regs_[lane]; }

 private:
  RnsBackend* owner_;
  std::vector<std::string> regs_;
};

}  // namespace teefhe::client

#endif  // TEEFHE_CLIENT_RNS_H_
