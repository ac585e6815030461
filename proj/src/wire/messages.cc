#include "teefhe/wire/messages.h"

#include <algorithm>

#include "teefhe/enclave/enclave.h"
#include "teefhe/errors.h"

namespace teefhe::wire {

namespace {

void PutU32(Bytes& out, uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) {
    out.push_back(static_cast<uint8_t>(v >> shift));
  }
}

uint32_t GetU32(const Bytes& in, std::size_t at) {
  return (uint32_t{in[at]} << 24) | (uint32_t{in[at + 1]} << 16) |
         (uint32_t{in[at + 2]} << 8) | uint32_t{in[at + 3]};
}

void ExpectSize(const Frame& f, std::size_t size, const char* what) {
  if (f.payload.size() != size) {
    throw ProtocolError(std::string(what) + " payload must be " +
                        std::to_string(size) + " bytes, got " +
                        std::to_string(f.payload.size()));
  }
}

struct Encoder {
  Frame operator()(const HelloMsg& m) const {
    if (m.hello.size() != enclave::kHelloBytes) {
      throw ProtocolError("HELLO body has the wrong size");
    }
    Bytes p(m.client_id.begin(), m.client_id.end());
    p.insert(p.end(), m.hello.begin(), m.hello.end());
    return {MsgType::kHello, std::move(p)};
  }
  Frame operator()(const AttestMsg& m) const {
    if (m.attest.size() != enclave::kAttestBytes) {
      throw ProtocolError("ATTEST body has the wrong size");
    }
    return {MsgType::kAttest, m.attest};
  }
  Frame operator()(const ProvisionParamsMsg& m) const {
    return {MsgType::kProvisionParams, m.params};
  }
  Frame operator()(const ProvisionKeysMsg& m) const {
    return {MsgType::kProvisionKeys, m.sealed};
  }
  Frame operator()(const NoiseReportMsg& m) const {
    Bytes p;
    PutU32(p, m.report.budget);
    PutU32(p, m.report.next_cost);
    return {MsgType::kNoiseReport, std::move(p)};
  }
  Frame operator()(const PolicyDecisionMsg& m) const {
    return {MsgType::kPolicyDecision, Bytes{static_cast<uint8_t>(m.decision)}};
  }
  Frame operator()(const BootstrapDataMsg& m) const {
    return {MsgType::kBootstrapData, m.ciphertext};
  }
  Frame operator()(const BootstrapResultMsg& m) const {
    return {MsgType::kBootstrapResult, m.ciphertext};
  }
  Frame operator()(const ErrorMsg& m) const {
    Bytes p{static_cast<uint8_t>(m.code)};
    p.insert(p.end(), m.message.begin(), m.message.end());
    return {MsgType::kError, std::move(p)};
  }
};

}  // namespace

Frame EncodeMessage(const Message& message) {
  return std::visit(Encoder{}, message);
}

Message DecodeMessage(const Frame& f) {
  if (!IsKnownType(f.type)) {
    throw ProtocolError("unknown message type " + std::to_string(f.type));
  }
  switch (static_cast<MsgType>(f.type)) {
    case MsgType::kHello: {
      ExpectSize(f, 16 + enclave::kHelloBytes, "HELLO");
      HelloMsg m;
      std::copy_n(f.payload.begin(), 16, m.client_id.begin());
      m.hello.assign(f.payload.begin() + 16, f.payload.end());
      return m;
    }
    case MsgType::kAttest:
      ExpectSize(f, enclave::kAttestBytes, "ATTEST");
      return AttestMsg{f.payload};
    case MsgType::kProvisionParams:
      return ProvisionParamsMsg{f.payload};
    case MsgType::kProvisionKeys:
      return ProvisionKeysMsg{f.payload};
    case MsgType::kNoiseReport:
      ExpectSize(f, 8, "NOISE_REPORT");
      return NoiseReportMsg{{GetU32(f.payload, 0), GetU32(f.payload, 4)}};
    case MsgType::kPolicyDecision:
      ExpectSize(f, 1, "POLICY_DECISION");
      if (f.payload[0] > 2) throw ProtocolError("invalid policy decision");
      return PolicyDecisionMsg{static_cast<sched::Decision>(f.payload[0])};
    case MsgType::kBootstrapData:
      return BootstrapDataMsg{f.payload};
    case MsgType::kBootstrapResult:
      return BootstrapResultMsg{f.payload};
    case MsgType::kError: {
      if (f.payload.empty()) throw ProtocolError("ERROR payload is empty");
      ErrorMsg m;
      m.code = static_cast<ErrorCode>(f.payload[0]);
      m.message.assign(f.payload.begin() + 1, f.payload.end());
      return m;
    }
  }
  throw ProtocolError("unreachable message type");
}

std::string_view MsgTypeName(uint8_t raw) {
  switch (static_cast<MsgType>(raw)) {
    case MsgType::kHello: return "HELLO";
    case MsgType::kAttest: return "ATTEST";
    case MsgType::kProvisionParams: return "PROVISION_PARAMS";
    case MsgType::kProvisionKeys: return "PROVISION_KEYS";
    case MsgType::kNoiseReport: return "NOISE_REPORT";
    case MsgType::kPolicyDecision: return "POLICY_DECISION";
    case MsgType::kBootstrapData: return "BOOTSTRAP_DATA";
    case MsgType::kBootstrapResult: return "BOOTSTRAP_RESULT";
    case MsgType::kError: return "ERROR";
  }
  return "UNKNOWN";
}

}  // namespace teefhe::wire
