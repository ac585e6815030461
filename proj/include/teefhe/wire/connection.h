#ifndef TEEFHE_WIRE_CONNECTION_H_
#define TEEFHE_WIRE_CONNECTION_H_

#include <chrono>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "teefhe/enclave/channel.h"
#include "teefhe/ring/random.h"
#include "teefhe/sched/policy.h"
#include "teefhe/wire/frame.h"
#include "teefhe/wire/messages.h"

namespace teefhe::wire {

// One frame as seen on the wire from the client's side.
struct TrafficEvent {
  bool outbound;
  uint8_t type;
  std::size_t frame_bytes;  // header included
  bool operator==(const TrafficEvent&) const = default;
};

// Blocking, framed TCP stream. Every operation honours the receive timeout;
// expiry, EOF and truncated frames raise ProtocolError.
class FrameStream {
 public:
  static std::unique_ptr<FrameStream> Connect(
      const std::string& host, uint16_t port,
      std::chrono::milliseconds timeout = std::chrono::seconds(120));
  ~FrameStream();

  void Send(const Frame& frame);
  // Writes bytes as-is, bypassing framing. Used to exercise error paths.
  void SendRaw(const Bytes& bytes);
  Frame Receive();
  void Close();

  const std::vector<TrafficEvent>& traffic() const { return traffic_; }

 private:
  struct Impl;
  explicit FrameStream(std::unique_ptr<Impl> impl);
  void ReadExact(uint8_t* out, std::size_t n);

  std::unique_ptr<Impl> impl_;
  std::vector<TrafficEvent> traffic_;
};

// Client half of the attested handshake over a frame stream: HELLO out,
// ATTEST in, measurement and transcript tag checked. Returns the session key.
channel::Key HandshakeClient(FrameStream& stream, const ClientId& client_id,
                             RandomStream& rng,
                             const channel::Digest& expected_measurement);

// Client session with a bootstrapping server. Server-side errors surface as
// ProtocolError carrying the server's message.
class ServerConnection {
 public:
  static std::unique_ptr<ServerConnection> Connect(
      const std::string& host, uint16_t port,
      std::chrono::milliseconds timeout = std::chrono::seconds(120));

  void Handshake(const ClientId& client_id, RandomStream& rng,
                 const channel::Digest& expected_measurement);
  void ProvisionParams(const Bytes& serialized_params);
  void ProvisionKeys(const Bytes& secret_key_bytes,
                     const Bytes& public_key_bytes);
  sched::Decision ReportNoise(const sched::NoiseReport& report);
  // Ships a ciphertext after an ADMIT decision and blocks until the
  // refreshed one is pushed back.
  Bytes Bootstrap(const Bytes& serialized_ciphertext);

  const ClientId& client_id() const { return client_id_; }
  FrameStream& stream() { return *stream_; }

 private:
  explicit ServerConnection(std::unique_ptr<FrameStream> stream)
      : stream_(std::move(stream)) {}
  Message Expect(MsgType type);

  std::unique_ptr<FrameStream> stream_;
  ClientId client_id_{};
  channel::Key session_key_{};
  bool attested_ = false;
  uint64_t counter_ = 0;
};

}  // namespace teefhe::wire

#endif  // TEEFHE_WIRE_CONNECTION_H_
