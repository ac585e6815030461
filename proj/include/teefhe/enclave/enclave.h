#ifndef TEEFHE_ENCLAVE_ENCLAVE_H_
#define TEEFHE_ENCLAVE_ENCLAVE_H_

#include <atomic>
#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <vector>

#include "teefhe/enclave/channel.h"

namespace teefhe::enclave {

using channel::Bytes;
using channel::ClientId;
using ByteView = std::span<const uint8_t>;

enum class Ecall : uint8_t {
  kBeginSession = 1,
  kConfigurePara = 2,
  kSetKey = 3,
  kDecreaseNoise = 4,
};

enum class EcallStatus : uint8_t {
  kOk = 0,
  kRejected = 1,       // arguments violate an invariant
  kOrderingError = 2,  // call arrived before its prerequisites
  kAuthFailure = 3,    // sealed payload failed authentication
  kInternal = 4,
};

// On failure `payload` carries a human-readable reason.
struct EcallResult {
  EcallStatus status;
  Bytes payload;
};

struct EnclaveOptions {
  // When set, every session draws its randomness from a stream seeded with
  // this value instead of system entropy. Used by differential trace tests.
  std::optional<uint64_t> rng_seed;
  // Fixed delay added to every call, emulating enclave transition cost.
  std::chrono::microseconds transition_delay{0};
};

// Payload layouts.
//   BeginSession  in:  client_nonce[32] | client_public[32]
//                 out: measurement[32] | server_public[32] | transcript_mac[32]
//   ConfigurePara in:  serialized EncryptionParams
//   SetKey        in:  counter u64 BE | AEAD(sk_len u32 BE | sk | pk)
//   DecreaseNoise in:  serialized Ciphertext; out: serialized Ciphertext
inline constexpr std::size_t kHelloBytes = 64;
inline constexpr std::size_t kAttestBytes = 96;

// The simulated trusted component. All traffic crosses Call() as byte
// buffers; nothing else is exposed to the host.
class Enclave {
 public:
  explicit Enclave(EnclaveOptions options = {});
  ~Enclave();
  Enclave(const Enclave&) = delete;
  Enclave& operator=(const Enclave&) = delete;

  EcallResult Call(Ecall id, const ClientId& client, ByteView payload);

  // Digest over the enclave's policy constants; clients pin this value.
  static channel::Digest Measurement();

  // Number of scheme contexts this enclave has built.
  uint64_t context_builds() const { return context_builds_.load(); }
  std::size_t session_count() const;

 private:
  struct Session;

  std::shared_ptr<Session> FindSession(const ClientId& client) const;
  EcallResult BeginSession(const ClientId& client, ByteView payload);
  EcallResult ConfigurePara(Session& session, ByteView payload);
  EcallResult SetKey(Session& session, ByteView payload);
  EcallResult DecreaseNoise(Session& session, ByteView payload);

  EnclaveOptions options_;
  mutable std::mutex sessions_mutex_;
  std::map<ClientId, std::shared_ptr<Session>> sessions_;
  std::atomic<uint64_t> context_builds_{0};
};

// Builds the SetKey payload on the client side.
Bytes SealKeys(const channel::Key& session_key, uint64_t counter,
               ByteView secret_key_bytes, ByteView public_key_bytes);

// Host-side proxy: marshals arguments, converts failures into exceptions
// (ParameterError for rejections, ProtocolError for ordering and
// authentication failures, Error otherwise).
class EnclaveClient {
 public:
  explicit EnclaveClient(Enclave& enclave) : enclave_(enclave) {}

  Bytes BeginSession(const ClientId& client, ByteView hello);
  void ConfigurePara(const ClientId& client, ByteView params);
  void SetKey(const ClientId& client, ByteView sealed_keys);
  Bytes DecreaseNoise(const ClientId& client, ByteView ciphertext);

 private:
  Bytes Invoke(Ecall id, const ClientId& client, ByteView payload);

  Enclave& enclave_;
};

}  // namespace teefhe::enclave

#endif  // TEEFHE_ENCLAVE_ENCLAVE_H_
