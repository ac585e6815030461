#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.h"
#include "teefhe/enclave/channel.h"
#include "teefhe/enclave/enclave.h"
#include "teefhe/errors.h"
#include "teefhe/ring/trace.h"
#include "teefhe/she/decryptor.h"
#include "teefhe/she/encryptor.h"
#include "teefhe/she/evaluator.h"
#include "teefhe/she/keys.h"
#include "teefhe/she/noise.h"
#include "teefhe/she/serialization.h"

namespace teefhe::enclave {
namespace {

using she::Ciphertext;
using she::Plaintext;

ClientId MakeId(uint8_t tag) {
  ClientId id{};
  id[0] = tag;
  return id;
}

// Runs the handshake and both provisioning calls; returns the session key.
channel::Key Provision(EnclaveClient& host, const ClientId& id,
                       const she::Context& ctx, const she::KeySet& keys,
                       RandomStream& rng) {
  channel::ClientHandshake hs(id, rng);
  const Bytes attest = host.BeginSession(id, hs.Hello());
  const channel::Key key = hs.Finish(attest, Enclave::Measurement());
  host.ConfigurePara(id, she::SerializeParams(ctx.params()));
  host.SetKey(id, SealKeys(key, 0, she::Serialize(ctx, keys.secret),
                           she::Serialize(ctx, keys.public_key)));
  return key;
}

TEST(ChannelTest, HandshakeAgreesAndDetectsTampering) {
  Enclave enclave;
  EnclaveClient host(enclave);
  auto rng = RandomStream::Seeded(1);
  const ClientId id = MakeId(1);
  channel::ClientHandshake hs(id, rng);
  Bytes attest = host.BeginSession(id, hs.Hello());
  ASSERT_EQ(attest.size(), kAttestBytes);
  EXPECT_NO_THROW(hs.Finish(attest, Enclave::Measurement()));

  Bytes tampered = attest;
  tampered[40] ^= 1;  // server ephemeral
  EXPECT_THROW(hs.Finish(tampered, Enclave::Measurement()), ProtocolError);
  channel::Digest wrong = Enclave::Measurement();
  wrong[0] ^= 0xFF;
  EXPECT_THROW(hs.Finish(attest, wrong), ProtocolError);
}

TEST(ChannelTest, AeadRoundTripAndForgery) {
  channel::Key key{};
  key[3] = 9;
  const Bytes msg = {1, 2, 3, 4, 5};
  const Bytes sealed = channel::Seal(key, 7, msg);
  EXPECT_EQ(sealed.size(), msg.size() + channel::kAeadTagBytes);
  EXPECT_EQ(channel::Open(key, 7, sealed), msg);
  EXPECT_FALSE(channel::Open(key, 8, sealed));
  Bytes forged = sealed;
  forged[0] ^= 1;
  EXPECT_FALSE(channel::Open(key, 7, forged));
}

TEST(EnclaveTest, ConfigureParaCachesContext) {
  Enclave enclave;
  EnclaveClient host(enclave);
  auto rng = RandomStream::Seeded(2);
  const ClientId id = MakeId(2);
  channel::ClientHandshake hs(id, rng);
  hs.Finish(host.BeginSession(id, hs.Hello()), Enclave::Measurement());
  const auto params = she::PresetForDegree(2048);
  host.ConfigurePara(id, she::SerializeParams(params));
  EXPECT_EQ(enclave.context_builds(), 1u);
  host.ConfigurePara(id, she::SerializeParams(params));
  EXPECT_EQ(enclave.context_builds(), 1u);

  auto bad = params;
  bad.q = 3329;
  EXPECT_THROW(host.ConfigurePara(id, she::SerializeParams(bad)),
               ParameterError);
  EXPECT_EQ(enclave.context_builds(), 1u);
}

TEST(EnclaveTest, CallOrderingIsEnforced) {
  Enclave enclave;
  EnclaveClient host(enclave);
  auto rng = RandomStream::Seeded(3);
  const auto ctx = she::Context::Create(she::PresetForDegree(8));
  const she::KeySet keys = she::GenerateKeys(*ctx, rng);
  const ClientId id = MakeId(3);

  // No session at all.
  EXPECT_THROW(host.ConfigurePara(id, she::SerializeParams(ctx->params())),
               ProtocolError);

  channel::ClientHandshake hs(id, rng);
  const channel::Key key =
      hs.Finish(host.BeginSession(id, hs.Hello()), Enclave::Measurement());
  const Bytes sealed = SealKeys(key, 0, she::Serialize(*ctx, keys.secret),
                                she::Serialize(*ctx, keys.public_key));
  EXPECT_THROW(host.SetKey(id, sealed), ProtocolError);

  she::Encryptor enc(ctx, keys.public_key);
  const Bytes ct = she::Serialize(*ctx, enc.Encrypt(Plaintext::Constant(*ctx, 1), rng));
  host.ConfigurePara(id, she::SerializeParams(ctx->params()));
  EXPECT_THROW(host.DecreaseNoise(id, ct), ProtocolError);

  host.SetKey(id, sealed);
  EXPECT_NO_THROW(host.DecreaseNoise(id, ct));
  // Replaying the same counter is refused.
  EXPECT_THROW(host.SetKey(id, sealed), ProtocolError);

  // Reconfiguring with other params drops the keys.
  host.ConfigurePara(id, she::SerializeParams(she::PresetForDegree(16)));
  EXPECT_THROW(host.DecreaseNoise(id, ct), ProtocolError);
}

TEST(EnclaveTest, KeysMustMatchParams) {
  Enclave enclave;
  EnclaveClient host(enclave);
  auto rng = RandomStream::Seeded(4);
  const auto small = she::Context::Create(she::PresetForDegree(1024));
  const she::KeySet keys = she::GenerateKeys(*small, rng);
  const ClientId id = MakeId(4);
  channel::ClientHandshake hs(id, rng);
  const channel::Key key =
      hs.Finish(host.BeginSession(id, hs.Hello()), Enclave::Measurement());
  host.ConfigurePara(id, she::SerializeParams(she::PresetForDegree(2048)));
  EXPECT_THROW(host.SetKey(id, SealKeys(key, 0, she::Serialize(*small, keys.secret),
                                        she::Serialize(*small, keys.public_key))),
               ParameterError);
  // A payload sealed under another key fails authentication.
  channel::Key other = key;
  other[0] ^= 1;
  EXPECT_THROW(host.SetKey(id, SealKeys(other, 1, she::Serialize(*small, keys.secret),
                                        she::Serialize(*small, keys.public_key))),
               ProtocolError);
}

TEST(EnclaveTest, DecreaseNoiseRefreshes) {
  Enclave enclave;
  EnclaveClient host(enclave);
  auto rng = RandomStream::Seeded(5);
  const auto ctx = she::Context::Create(she::PresetForDegree(1024, 256));
  const she::KeySet keys = she::GenerateKeys(*ctx, rng);
  const ClientId id = MakeId(5);
  Provision(host, id, *ctx, keys, rng);
  const she::Encryptor enc(ctx, keys.public_key);
  const she::Decryptor dec(ctx, keys.secret);
  const she::Evaluator eval(ctx);
  std::mt19937_64 gen(5);
  for (int i = 0; i < 40; ++i) {
    const auto m1 = Plaintext::FromValues(*ctx, oracle::RandomVector(gen, 1024, 256));
    const auto m2 = Plaintext::FromValues(*ctx, oracle::RandomVector(gen, 1024, 256));
    const Ciphertext noisy = eval.Relinearize(
        eval.Multiply(enc.Encrypt(m1, rng), enc.Encrypt(m2, rng)), keys.eval);
    const Plaintext expected = dec.Decrypt(noisy);
    ASSERT_GT(she::NoiseBudgetExact(dec, noisy, expected), 0);
    const Ciphertext fresh = she::DeserializeCiphertext(
        *ctx, host.DecreaseNoise(id, she::Serialize(*ctx, noisy)));
    ASSERT_EQ(dec.Decrypt(fresh), expected);
    const int control = she::NoiseBudgetExact(dec, enc.Encrypt(expected, rng));
    ASSERT_GE(she::NoiseBudgetExact(dec, fresh), control - 1);
    ASSERT_GT(she::NoiseBudgetExact(dec, fresh),
              she::NoiseBudgetExact(dec, noisy));
  }
}

TEST(EnclaveTest, DecreaseNoiseTraceIndependentOfSecrets) {
  EnclaveOptions options;
  options.rng_seed = 42;
  const auto ctx = she::Context::Create(she::PresetForDegree(8, 256));
  std::mt19937_64 gen(6);
  std::optional<trace::ExecutionTrace> reference;
  for (int i = 0; i < 100; ++i) {
    Enclave enclave(options);
    EnclaveClient host(enclave);
    auto rng = RandomStream::Seeded(100 + i);
    const she::KeySet keys = she::GenerateKeys(*ctx, rng);
    const ClientId id = MakeId(6);
    Provision(host, id, *ctx, keys, rng);
    const she::Encryptor enc(ctx, keys.public_key);
    const auto m = Plaintext::FromValues(*ctx, oracle::RandomVector(gen, 8, 256));
    const Bytes ct = she::Serialize(*ctx, enc.Encrypt(m, rng));
    const auto t = trace::Capture("decrease_noise",
                                  [&] { host.DecreaseNoise(id, ct); });
    if (!reference) {
      reference = t;
      continue;
    }
    ASSERT_TRUE(trace::Equal(*reference, t))
        << "diverges at event " << *trace::FirstDivergence(*reference, t);
  }
  std::size_t draws = 0;
  for (const auto& e : reference->events) {
    draws += e.op == trace::OpKind::kRngDraw;
  }
  EXPECT_GT(draws, 0u);
}

TEST(EnclaveTest, SessionsAreIndependent) {
  Enclave enclave;
  EnclaveClient host(enclave);
  auto rng = RandomStream::Seeded(7);
  const auto ctx = she::Context::Create(she::PresetForDegree(8, 17));
  const she::KeySet k1 = she::GenerateKeys(*ctx, rng);
  const she::KeySet k2 = she::GenerateKeys(*ctx, rng);
  Provision(host, MakeId(1), *ctx, k1, rng);
  Provision(host, MakeId(2), *ctx, k2, rng);
  EXPECT_EQ(enclave.session_count(), 2u);
  EXPECT_EQ(enclave.context_builds(), 2u);
  const she::Encryptor enc1(ctx, k1.public_key);
  const she::Decryptor dec1(ctx, k1.secret);
  const auto m = Plaintext::Constant(*ctx, 5);
  const Bytes ct = she::Serialize(*ctx, enc1.Encrypt(m, rng));
  const auto back = she::DeserializeCiphertext(*ctx, host.DecreaseNoise(MakeId(1), ct));
  EXPECT_EQ(dec1.Decrypt(back), m);
  // Client 2 holds a different key, so its refresh does not reproduce m.
  const auto wrong = she::DeserializeCiphertext(*ctx, host.DecreaseNoise(MakeId(2), ct));
  EXPECT_NE(dec1.Decrypt(wrong), m);
}

}  // namespace
}  // namespace teefhe::enclave
