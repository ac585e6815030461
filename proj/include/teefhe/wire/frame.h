#ifndef TEEFHE_WIRE_FRAME_H_
#define TEEFHE_WIRE_FRAME_H_

#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <vector>

namespace teefhe::wire {

using Bytes = std::vector<uint8_t>;

enum class MsgType : uint8_t {
  kHello = 0x01,
  kAttest = 0x02,
  kProvisionParams = 0x03,
  kProvisionKeys = 0x04,
  kNoiseReport = 0x10,
  kPolicyDecision = 0x11,
  kBootstrapData = 0x12,
  kBootstrapResult = 0x13,
  kError = 0x7F,
};

bool IsKnownType(uint8_t raw);

inline constexpr std::size_t kFrameHeaderBytes = 5;
inline constexpr uint32_t kMaxPayloadBytes = 64u << 20;

// `type` is kept raw so frames with unknown codes survive decoding and can be
// answered with an ERROR instead of dropping the connection.
struct Frame {
  uint8_t type = 0;
  Bytes payload;

  Frame() = default;
  Frame(MsgType t, Bytes p) : type(static_cast<uint8_t>(t)), payload(std::move(p)) {}
  Frame(uint8_t t, Bytes p) : type(t), payload(std::move(p)) {}
  bool operator==(const Frame&) const = default;
};

// len:u32 BE | type:u8 | payload. ProtocolError if the payload is too large.
Bytes EncodeFrame(const Frame& frame);

// Parses the 5-byte header; ProtocolError when the declared length exceeds
// the cap.
struct FrameHeader {
  uint32_t length;
  uint8_t type;
};
FrameHeader ParseHeader(std::span<const uint8_t, kFrameHeaderBytes> header);

// Incremental decoder for a byte stream.
class FrameDecoder {
 public:
  // ProtocolError as soon as a header with an oversized length is seen; the
  // stream is unusable afterwards.
  void Feed(std::span<const uint8_t> data);
  std::optional<Frame> Next();
  // True when bytes of an incomplete frame are buffered. At end of stream
  // this means the peer truncated a frame.
  bool HasPartial() const { return !buffer_.empty(); }

 private:
  void Drain();

  Bytes buffer_;
  std::deque<Frame> ready_;
};

}  // namespace teefhe::wire

#endif  // TEEFHE_WIRE_FRAME_H_
