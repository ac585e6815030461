#ifndef TEEFHE_ENCLAVE_CHANNEL_H_
#define TEEFHE_ENCLAVE_CHANNEL_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "teefhe/ring/random.h"

// Key agreement, key derivation and authenticated encryption for the
// attested provisioning channel. X25519 for agreement, BLAKE2b for hashing
// and derivation, HMAC-SHA256 for the transcript tag and
// ChaCha20-Poly1305 (IETF) as the AEAD.
namespace teefhe::channel {

using Bytes = std::vector<uint8_t>;
using Digest = std::array<uint8_t, 32>;
using Key = std::array<uint8_t, 32>;
using ClientId = std::array<uint8_t, 16>;

inline constexpr std::size_t kAeadNonceBytes = 12;
inline constexpr std::size_t kAeadTagBytes = 16;

struct KeyPair {
  Key public_key;
  Key secret_key;
};

// Secret scalar drawn from `rng`.
KeyPair GenerateKeyPair(RandomStream& rng);

// nullopt when the peer value is degenerate.
std::optional<Key> SharedSecret(const Key& own_secret, const Key& peer_public);

Digest TranscriptHash(const ClientId& client_id, const Digest& client_nonce,
                      const Digest& measurement, const Key& server_public,
                      const Key& client_public);

struct SessionKeys {
  Key session_key;
  Key mac_key;
};

SessionKeys DeriveSessionKeys(const Key& shared, const Digest& transcript);

Digest TranscriptMac(const Key& mac_key, const Digest& transcript);
bool VerifyTranscriptMac(const Key& mac_key, const Digest& transcript,
                         const Digest& mac);

// Nonce is the 64-bit message counter, little-endian, zero-padded to 12
// bytes. Output length is plaintext length + 16.
Bytes Seal(const Key& key, uint64_t counter, std::span<const uint8_t> plaintext);
// nullopt on authentication failure.
std::optional<Bytes> Open(const Key& key, uint64_t counter,
                          std::span<const uint8_t> ciphertext);

Digest Blake2b256(std::span<const uint8_t> data);

// Client half of the attestation handshake, independent of transport.
class ClientHandshake {
 public:
  ClientHandshake(const ClientId& client_id, RandomStream& rng);

  // client_nonce[32] | client_public[32]
  Bytes Hello() const;

  // Parses measurement[32] | server_public[32] | mac[32], checks the
  // measurement against the pinned value and the transcript tag, and returns
  // the session key. ProtocolError on any mismatch.
  Key Finish(std::span<const uint8_t> attest,
             const Digest& expected_measurement) const;

 private:
  ClientId client_id_;
  Digest nonce_;
  KeyPair ephemeral_;
};

}  // namespace teefhe::channel

#endif  // TEEFHE_ENCLAVE_CHANNEL_H_
