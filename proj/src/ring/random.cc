#include "teefhe/ring/random.h"

#include <sodium.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>

#include "teefhe/errors.h"
#include "teefhe/ring/constant_time.h"
#include "teefhe/ring/trace.h"

namespace teefhe {

void EnsureSodium() {
  static const int status = sodium_init();
  if (status < 0) throw ConfigurationError("libsodium failed to initialize");
}

namespace {

constexpr double kTwoToMinus32 = 1.0 / 4294967296.0;

}  // namespace

RandomStream::RandomStream(Kind kind, const Seed& seed)
    : kind_(kind), key_(seed), position_(buffer_.size()) {
  EnsureSodium();
}

RandomStream RandomStream::SystemEntropy() {
  return RandomStream(Kind::kSystemEntropy, Seed{});
}

RandomStream RandomStream::Seeded(const Seed& seed) {
  return RandomStream(Kind::kSeeded, seed);
}

RandomStream RandomStream::Seeded(uint64_t value) {
  Seed seed{};
  for (int i = 0; i < 8; ++i) seed[i] = static_cast<uint8_t>(value >> (8 * i));
  return Seeded(seed);
}

void RandomStream::Refill() {
  if (kind_ == Kind::kSystemEntropy) {
    randombytes_buf(buffer_.data(), buffer_.size());
  } else {
    static constexpr std::array<uint8_t, crypto_stream_chacha20_ietf_NONCEBYTES>
        kNonce{};
    std::fill(buffer_.begin(), buffer_.end(), 0);
    crypto_stream_chacha20_ietf_xor_ic(buffer_.data(), buffer_.data(),
                                       buffer_.size(), kNonce.data(),
                                       block_counter_, key_.data());
    block_counter_ += static_cast<uint32_t>(buffer_.size() / 64);
  }
  position_ = 0;
}

uint64_t RandomStream::NextWord() {
  if (position_ + 8 > buffer_.size()) Refill();
  uint64_t word;
  std::memcpy(&word, buffer_.data() + position_, 8);
  position_ += 8;
  ++words_drawn_;
  trace::Record(trace::OpKind::kRngDraw);
  return word;
}

void RandomStream::Fill(std::span<uint8_t> out) {
  std::size_t offset = 0;
  while (offset < out.size()) {
    const uint64_t word = NextWord();
    const std::size_t take = std::min<std::size_t>(8, out.size() - offset);
    std::memcpy(out.data() + offset, &word, take);
    offset += take;
  }
}

uint64_t RandomStream::UniformBelow(uint64_t bound) {
  if (bound == 0) throw ParameterError("uniform bound must be positive");
  if (bound == 1) return 0;
  const uint64_t mask = ~uint64_t{0} >> std::countl_zero(bound - 1);
  while (true) {
    const uint64_t candidate = NextWord() & mask;
    if (candidate < bound) return candidate;
  }
}

Poly SampleUniformPoly(RandomStream& rng, std::size_t n, const Modulus& q) {
  Poly result(n, q);
  for (std::size_t i = 0; i < n; ++i) result[i] = rng.UniformBelow(q.value());
  return result;
}

Poly SampleTernaryPoly(RandomStream& rng, std::size_t n, const Modulus& q) {
  Poly result(n, q);
  for (std::size_t i = 0; i < n; ++i) {
    const uint64_t r = rng.UniformBelow(3);  // {0, 1, 2} -> {0, 1, -1}
    result[i] = ct::Select(r == 2, q.value() - 1, r);
  }
  return result;
}

Poly SampleErrorPoly(RandomStream& rng, std::size_t n, const Modulus& q,
                     double stddev, uint32_t bound) {
  if (bound < 1) throw ParameterError("noise bound must be at least 1");
  Poly result(n, q);
  const double limit = static_cast<double>(bound);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (int k = 0; k < 6; ++k) {
      const uint64_t word = rng.NextWord();
      sum += static_cast<double>(word & 0xffffffffu) * kTwoToMinus32;
      sum += static_cast<double>(word >> 32) * kTwoToMinus32;
    }
    const double sample = std::clamp(std::nearbyint((sum - 6.0) * stddev),
                                     -limit, limit);
    const int64_t v = static_cast<int64_t>(sample);
    result[i] = static_cast<uint64_t>(v) + (q.value() & ct::Mask(v < 0));
  }
  return result;
}

}  // namespace teefhe
