#include "teefhe/wire/frame.h"

#include <string>

#include "teefhe/errors.h"

namespace teefhe::wire {

bool IsKnownType(uint8_t raw) {
  switch (static_cast<MsgType>(raw)) {
    case MsgType::kHello:
    case MsgType::kAttest:
    case MsgType::kProvisionParams:
    case MsgType::kProvisionKeys:
    case MsgType::kNoiseReport:
    case MsgType::kPolicyDecision:
    case MsgType::kBootstrapData:
    case MsgType::kBootstrapResult:
    case MsgType::kError:
      return true;
  }
  return false;
}

Bytes EncodeFrame(const Frame& frame) {
  if (frame.payload.size() > kMaxPayloadBytes) {
    throw ProtocolError("frame payload of " +
                        std::to_string(frame.payload.size()) +
                        " bytes exceeds the 64 MiB cap");
  }
  const auto len = static_cast<uint32_t>(frame.payload.size());
  Bytes out;
  out.reserve(kFrameHeaderBytes + len);
  out.push_back(static_cast<uint8_t>(len >> 24));
  out.push_back(static_cast<uint8_t>(len >> 16));
  out.push_back(static_cast<uint8_t>(len >> 8));
  out.push_back(static_cast<uint8_t>(len));
  out.push_back(frame.type);
  out.insert(out.end(), frame.payload.begin(), frame.payload.end());
  return out;
}

FrameHeader ParseHeader(std::span<const uint8_t, kFrameHeaderBytes> header) {
  const uint32_t len = (uint32_t{header[0]} << 24) |
                       (uint32_t{header[1]} << 16) |
                       (uint32_t{header[2]} << 8) | uint32_t{header[3]};
  if (len > kMaxPayloadBytes) {
    throw ProtocolError("declared frame length " + std::to_string(len) +
                        " exceeds the 64 MiB cap");
  }
  return {len, header[4]};
}

void FrameDecoder::Feed(std::span<const uint8_t> data) {
  buffer_.insert(buffer_.end(), data.begin(), data.end());
  Drain();
}

void FrameDecoder::Drain() {
  std::size_t pos = 0;
  while (buffer_.size() - pos >= kFrameHeaderBytes) {
    const FrameHeader h = ParseHeader(
        std::span<const uint8_t, kFrameHeaderBytes>(buffer_.data() + pos,
                                                    kFrameHeaderBytes));
    if (buffer_.size() - pos - kFrameHeaderBytes < h.length) break;
    const auto begin = buffer_.begin() + static_cast<std::ptrdiff_t>(
                                             pos + kFrameHeaderBytes);
    ready_.emplace_back(h.type, Bytes(begin, begin + h.length));
    pos += kFrameHeaderBytes + h.length;
  }
  buffer_.erase(buffer_.begin(), buffer_.begin() + static_cast<std::ptrdiff_t>(pos));
}

std::optional<Frame> FrameDecoder::Next() {
  if (ready_.empty()) return std::nullopt;
  Frame f = std::move(ready_.front());
  ready_.pop_front();
  return f;
}

}  // namespace teefhe::wire
