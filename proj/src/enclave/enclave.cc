#include "teefhe/enclave/enclave.h"

#include <cstring>
#include <string>
#include <thread>

#include "teefhe/errors.h"
#include "teefhe/she/decryptor.h"
#include "teefhe/she/encryptor.h"
#include "teefhe/she/keys.h"
#include "teefhe/she/serialization.h"

namespace teefhe::enclave {

namespace {

// Constants the measurement commits to.
constexpr std::string_view kPolicy =
    "teefhe-enclave/1;ecalls=begin_session,configure_para,set_key,"
    "decrease_noise;plaintext_slots=n+1;rng=session-stream;aead=chacha20-"
    "poly1305-ietf;kdf=blake2b;mac=hmac-sha256";

EcallResult Fail(EcallStatus status, const std::string& why) {
  return {status, Bytes(why.begin(), why.end())};
}

uint64_t ReadU64Be(ByteView b) {
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = (v << 8) | b[i];
  return v;
}

uint32_t ReadU32Be(ByteView b) {
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v = (v << 8) | b[i];
  return v;
}

}  // namespace

struct Enclave::Session {
  explicit Session(RandomStream stream) : rng(std::move(stream)) {}

  std::mutex mutex;
  RandomStream rng;
  channel::Key session_key{};
  uint64_t next_counter = 0;
  she::ContextPtr ctx;
  std::optional<she::Encryptor> encryptor;
  std::optional<she::Decryptor> decryptor;
};

Enclave::Enclave(EnclaveOptions options) : options_(options) {}
Enclave::~Enclave() = default;

channel::Digest Enclave::Measurement() {
  return channel::Blake2b256(std::span(
      reinterpret_cast<const uint8_t*>(kPolicy.data()), kPolicy.size()));
}

std::size_t Enclave::session_count() const {
  std::lock_guard lock(sessions_mutex_);
  return sessions_.size();
}

std::shared_ptr<Enclave::Session> Enclave::FindSession(
    const ClientId& client) const {
  std::lock_guard lock(sessions_mutex_);
  auto it = sessions_.find(client);
  return it == sessions_.end() ? nullptr : it->second;
}

EcallResult Enclave::Call(Ecall id, const ClientId& client, ByteView payload) {
  if (options_.transition_delay.count() > 0) {
    std::this_thread::sleep_for(options_.transition_delay);
  }
  try {
    if (id == Ecall::kBeginSession) return BeginSession(client, payload);
    const auto session = FindSession(client);
    if (!session) {
      return Fail(EcallStatus::kOrderingError, "no session for client");
    }
    std::lock_guard lock(session->mutex);
    switch (id) {
      case Ecall::kConfigurePara:
        return ConfigurePara(*session, payload);
      case Ecall::kSetKey:
        return SetKey(*session, payload);
      case Ecall::kDecreaseNoise:
        return DecreaseNoise(*session, payload);
      default:
        return Fail(EcallStatus::kRejected, "unknown ecall");
    }
  } catch (const ParameterError& e) {
    return Fail(EcallStatus::kRejected, e.what());
  } catch (const DeserializationError& e) {
    return Fail(EcallStatus::kRejected, e.what());
  } catch (const ProtocolError& e) {
    return Fail(EcallStatus::kOrderingError, e.what());
  } catch (const std::exception& e) {
    return Fail(EcallStatus::kInternal, e.what());
  }
}

EcallResult Enclave::BeginSession(const ClientId& client, ByteView payload) {
  if (payload.size() != kHelloBytes) {
    return Fail(EcallStatus::kRejected, "hello must be 64 bytes");
  }
  auto session = std::make_shared<Session>(
      options_.rng_seed ? RandomStream::Seeded(*options_.rng_seed)
                        : RandomStream::SystemEntropy());
  channel::Digest nonce;
  channel::Key client_public;
  std::memcpy(nonce.data(), payload.data(), 32);
  std::memcpy(client_public.data(), payload.data() + 32, 32);
  const channel::KeyPair server = channel::GenerateKeyPair(session->rng);
  const auto shared = channel::SharedSecret(server.secret_key, client_public);
  if (!shared) return Fail(EcallStatus::kRejected, "degenerate client key");
  const channel::Digest measurement = Measurement();
  const channel::Digest transcript = channel::TranscriptHash(
      client, nonce, measurement, server.public_key, client_public);
  const channel::SessionKeys keys =
      channel::DeriveSessionKeys(*shared, transcript);
  session->session_key = keys.session_key;
  const channel::Digest mac = channel::TranscriptMac(keys.mac_key, transcript);

  Bytes out;
  out.insert(out.end(), measurement.begin(), measurement.end());
  out.insert(out.end(), server.public_key.begin(), server.public_key.end());
  out.insert(out.end(), mac.begin(), mac.end());
  std::lock_guard lock(sessions_mutex_);
  sessions_[client] = std::move(session);
  return {EcallStatus::kOk, std::move(out)};
}

EcallResult Enclave::ConfigurePara(Session& session, ByteView payload) {
  const she::EncryptionParams params = she::DeserializeParams(payload);
  params.Validate();
  if (session.ctx && session.ctx->params() == params) {
    return {EcallStatus::kOk, {}};
  }
  session.ctx = she::Context::Create(params);
  context_builds_.fetch_add(1);
  session.encryptor.reset();
  session.decryptor.reset();
  return {EcallStatus::kOk, {}};
}

EcallResult Enclave::SetKey(Session& session, ByteView payload) {
  if (!session.ctx) throw ProtocolError("set_key before configure_para");
  if (payload.size() < 8) throw ParameterError("sealed keys too short");
  const uint64_t counter = ReadU64Be(payload);
  if (counter < session.next_counter) {
    return Fail(EcallStatus::kAuthFailure, "stale message counter");
  }
  const auto plain =
      channel::Open(session.session_key, counter, payload.subspan(8));
  if (!plain) return Fail(EcallStatus::kAuthFailure, "key payload forged");
  session.next_counter = counter + 1;
  const ByteView body(*plain);
  if (body.size() < 4) throw ParameterError("key payload too short");
  const uint32_t sk_len = ReadU32Be(body);
  if (body.size() - 4 < sk_len) throw ParameterError("key payload truncated");
  she::SecretKey sk =
      she::DeserializeSecretKey(*session.ctx, body.subspan(4, sk_len));
  she::PublicKey pk =
      she::DeserializePublicKey(*session.ctx, body.subspan(4 + sk_len));
  session.decryptor.emplace(session.ctx, std::move(sk));
  session.encryptor.emplace(session.ctx, std::move(pk));
  return {EcallStatus::kOk, {}};
}

EcallResult Enclave::DecreaseNoise(Session& session, ByteView payload) {
  if (!session.ctx || !session.decryptor || !session.encryptor) {
    throw ProtocolError("decrease_noise before keys were provisioned");
  }
  const she::Ciphertext ct = she::DeserializeCiphertext(*session.ctx, payload);
  const std::vector<uint64_t> padded = session.decryptor->DecryptPadded(ct);
  const she::Ciphertext fresh =
      session.encryptor->EncryptPadded(padded, session.rng);
  return {EcallStatus::kOk, she::Serialize(*session.ctx, fresh)};
}

Bytes SealKeys(const channel::Key& session_key, uint64_t counter,
               ByteView secret_key_bytes, ByteView public_key_bytes) {
  Bytes body;
  const auto sk_len = static_cast<uint32_t>(secret_key_bytes.size());
  for (int i = 3; i >= 0; --i) body.push_back(static_cast<uint8_t>(sk_len >> (8 * i)));
  body.insert(body.end(), secret_key_bytes.begin(), secret_key_bytes.end());
  body.insert(body.end(), public_key_bytes.begin(), public_key_bytes.end());
  Bytes out;
  for (int i = 7; i >= 0; --i) out.push_back(static_cast<uint8_t>(counter >> (8 * i)));
  const Bytes sealed = channel::Seal(session_key, counter, body);
  out.insert(out.end(), sealed.begin(), sealed.end());
  return out;
}

Bytes EnclaveClient::Invoke(Ecall id, const ClientId& client,
                            ByteView payload) {
  EcallResult r = enclave_.Call(id, client, payload);
  const std::string why(r.payload.begin(), r.payload.end());
  switch (r.status) {
    case EcallStatus::kOk:
      return std::move(r.payload);
    case EcallStatus::kRejected:
      throw ParameterError("enclave rejected call: " + why);
    case EcallStatus::kOrderingError:
    case EcallStatus::kAuthFailure:
      throw ProtocolError("enclave refused call: " + why);
    default:
      throw Error("enclave failure: " + why);
  }
}

Bytes EnclaveClient::BeginSession(const ClientId& client, ByteView hello) {
  return Invoke(Ecall::kBeginSession, client, hello);
}

void EnclaveClient::ConfigurePara(const ClientId& client, ByteView params) {
  Invoke(Ecall::kConfigurePara, client, params);
}

void EnclaveClient::SetKey(const ClientId& client, ByteView sealed_keys) {
  Invoke(Ecall::kSetKey, client, sealed_keys);
}

Bytes EnclaveClient::DecreaseNoise(const ClientId& client,
                                   ByteView ciphertext) {
  return Invoke(Ecall::kDecreaseNoise, client, ciphertext);
}

}  // namespace teefhe::enclave
