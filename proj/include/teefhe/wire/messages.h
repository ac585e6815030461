#ifndef TEEFHE_WIRE_MESSAGES_H_
#define TEEFHE_WIRE_MESSAGES_H_

#include <array>
#include <cstdint>
#include <string>
#include <variant>

#include "teefhe/enclave/channel.h"
#include "teefhe/sched/policy.h"
#include "teefhe/wire/frame.h"

namespace teefhe::wire {

using ClientId = channel::ClientId;

// client_id[16] | client_nonce[32] | client_public[32]
struct HelloMsg {
  ClientId client_id{};
  Bytes hello;  // enclave::kHelloBytes
  bool operator==(const HelloMsg&) const = default;
};

// measurement[32] | server_public[32] | transcript_mac[32]
struct AttestMsg {
  Bytes attest;  // enclave::kAttestBytes
  bool operator==(const AttestMsg&) const = default;
};

// Serialized EncryptionParams from the client; the server acknowledges with
// an empty PROVISION_PARAMS frame.
struct ProvisionParamsMsg {
  Bytes params;
  bool operator==(const ProvisionParamsMsg&) const = default;
};

// Sealed key bundle (counter | AEAD body); empty payload acknowledges.
struct ProvisionKeysMsg {
  Bytes sealed;
  bool operator==(const ProvisionKeysMsg&) const = default;
};

struct NoiseReportMsg {
  sched::NoiseReport report;
  bool operator==(const NoiseReportMsg&) const = default;
};

struct PolicyDecisionMsg {
  sched::Decision decision = sched::Decision::kDefer;
  bool operator==(const PolicyDecisionMsg&) const = default;
};

struct BootstrapDataMsg {
  Bytes ciphertext;
  bool operator==(const BootstrapDataMsg&) const = default;
};

struct BootstrapResultMsg {
  Bytes ciphertext;
  bool operator==(const BootstrapResultMsg&) const = default;
};

enum class ErrorCode : uint8_t {
  kUnknownType = 1,
  kMalformed = 2,
  kOrdering = 3,
  kAuthentication = 4,
  kRejected = 5,
  kTaskFailed = 6,
  kInternal = 7,
  kNotAdmitted = 8,
};

// code:u8 | UTF-8 message
struct ErrorMsg {
  ErrorCode code = ErrorCode::kInternal;
  std::string message;
  bool operator==(const ErrorMsg&) const = default;
};

using Message =
    std::variant<HelloMsg, AttestMsg, ProvisionParamsMsg, ProvisionKeysMsg,
                 NoiseReportMsg, PolicyDecisionMsg, BootstrapDataMsg,
                 BootstrapResultMsg, ErrorMsg>;

Frame EncodeMessage(const Message& message);

// ProtocolError for unknown types and malformed payloads.
Message DecodeMessage(const Frame& frame);

std::string_view MsgTypeName(uint8_t raw);

}  // namespace teefhe::wire

#endif  // TEEFHE_WIRE_MESSAGES_H_
