#include "teefhe/enclave/channel.h"

#include <cstring>
#include <string_view>

#include <sodium.h>

#include "teefhe/errors.h"

namespace teefhe::channel {

namespace {

std::array<uint8_t, kAeadNonceBytes> NonceFor(uint64_t counter) {
  std::array<uint8_t, kAeadNonceBytes> nonce{};
  for (int i = 0; i < 8; ++i) nonce[i] = static_cast<uint8_t>(counter >> (8 * i));
  return nonce;
}

Key KeyedHash(const Key& key, std::string_view label, const Digest& data) {
  Key out;
  crypto_generichash_state state;
  crypto_generichash_init(&state, key.data(), key.size(), out.size());
  crypto_generichash_update(
      &state, reinterpret_cast<const unsigned char*>(label.data()),
      label.size());
  crypto_generichash_update(&state, data.data(), data.size());
  crypto_generichash_final(&state, out.data(), out.size());
  return out;
}

}  // namespace

KeyPair GenerateKeyPair(RandomStream& rng) {
  EnsureSodium();
  KeyPair kp;
  rng.Fill(kp.secret_key);
  crypto_scalarmult_base(kp.public_key.data(), kp.secret_key.data());
  return kp;
}

std::optional<Key> SharedSecret(const Key& own_secret, const Key& peer_public) {
  EnsureSodium();
  Key shared;
  if (crypto_scalarmult(shared.data(), own_secret.data(),
                        peer_public.data()) != 0) {
    return std::nullopt;
  }
  return shared;
}

Digest TranscriptHash(const ClientId& client_id, const Digest& client_nonce,
                      const Digest& measurement, const Key& server_public,
                      const Key& client_public) {
  EnsureSodium();
  Digest out;
  crypto_generichash_state state;
  crypto_generichash_init(&state, nullptr, 0, out.size());
  crypto_generichash_update(&state, client_id.data(), client_id.size());
  crypto_generichash_update(&state, client_nonce.data(), client_nonce.size());
  crypto_generichash_update(&state, measurement.data(), measurement.size());
  crypto_generichash_update(&state, server_public.data(), server_public.size());
  crypto_generichash_update(&state, client_public.data(), client_public.size());
  crypto_generichash_final(&state, out.data(), out.size());
  return out;
}

SessionKeys DeriveSessionKeys(const Key& shared, const Digest& transcript) {
  EnsureSodium();
  return {KeyedHash(shared, "session", transcript),
          KeyedHash(shared, "transcript-mac", transcript)};
}

Digest TranscriptMac(const Key& mac_key, const Digest& transcript) {
  EnsureSodium();
  Digest mac;
  crypto_auth_hmacsha256(mac.data(), transcript.data(), transcript.size(),
                         mac_key.data());
  return mac;
}

bool VerifyTranscriptMac(const Key& mac_key, const Digest& transcript,
                         const Digest& mac) {
  EnsureSodium();
  return crypto_auth_hmacsha256_verify(mac.data(), transcript.data(),
                                       transcript.size(), mac_key.data()) == 0;
}

Bytes Seal(const Key& key, uint64_t counter,
           std::span<const uint8_t> plaintext) {
  EnsureSodium();
  Bytes out(plaintext.size() + kAeadTagBytes);
  unsigned long long out_len = 0;
  const auto nonce = NonceFor(counter);
  crypto_aead_chacha20poly1305_ietf_encrypt(
      out.data(), &out_len, plaintext.data(), plaintext.size(), nullptr, 0,
      nullptr, nonce.data(), key.data());
  out.resize(out_len);
  return out;
}

std::optional<Bytes> Open(const Key& key, uint64_t counter,
                          std::span<const uint8_t> ciphertext) {
  EnsureSodium();
  if (ciphertext.size() < kAeadTagBytes) return std::nullopt;
  Bytes out(ciphertext.size() - kAeadTagBytes);
  unsigned long long out_len = 0;
  const auto nonce = NonceFor(counter);
  if (crypto_aead_chacha20poly1305_ietf_decrypt(
          out.data(), &out_len, nullptr, ciphertext.data(), ciphertext.size(),
          nullptr, 0, nonce.data(), key.data()) != 0) {
    return std::nullopt;
  }
  out.resize(out_len);
  return out;
}

Digest Blake2b256(std::span<const uint8_t> data) {
  EnsureSodium();
  Digest out;
  crypto_generichash(out.data(), out.size(), data.data(), data.size(), nullptr,
                     0);
  return out;
}

ClientHandshake::ClientHandshake(const ClientId& client_id, RandomStream& rng)
    : client_id_(client_id) {
  rng.Fill(nonce_);
  ephemeral_ = GenerateKeyPair(rng);
}

Bytes ClientHandshake::Hello() const {
  Bytes out(nonce_.begin(), nonce_.end());
  out.insert(out.end(), ephemeral_.public_key.begin(),
             ephemeral_.public_key.end());
  return out;
}

Key ClientHandshake::Finish(std::span<const uint8_t> attest,
                            const Digest& expected_measurement) const {
  if (attest.size() != 96) throw ProtocolError("attestation must be 96 bytes");
  Digest measurement, mac;
  Key server_public;
  std::memcpy(measurement.data(), attest.data(), 32);
  std::memcpy(server_public.data(), attest.data() + 32, 32);
  std::memcpy(mac.data(), attest.data() + 64, 32);
  if (sodium_memcmp(measurement.data(), expected_measurement.data(), 32) != 0) {
    throw ProtocolError("enclave measurement does not match the pinned value");
  }
  const auto shared = SharedSecret(ephemeral_.secret_key, server_public);
  if (!shared) throw ProtocolError("degenerate server key");
  const Digest transcript = TranscriptHash(
      client_id_, nonce_, measurement, server_public, ephemeral_.public_key);
  const SessionKeys keys = DeriveSessionKeys(*shared, transcript);
  if (!VerifyTranscriptMac(keys.mac_key, transcript, mac)) {
    throw ProtocolError("attestation transcript MAC mismatch");
  }
  return keys.session_key;
}

}  // namespace teefhe::channel
