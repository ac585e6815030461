#include "teefhe/wire/connection.h"

#include <poll.h>

#include <boost/asio.hpp>

#include "teefhe/enclave/enclave.h"
#include "teefhe/errors.h"

namespace teefhe::wire {

namespace asio = boost::asio;
using asio::ip::tcp;

struct FrameStream::Impl {
  asio::io_context io;
  tcp::socket socket{io};
  std::chrono::milliseconds timeout{0};
};

FrameStream::FrameStream(std::unique_ptr<Impl> impl) : impl_(std::move(impl)) {}
FrameStream::~FrameStream() = default;

std::unique_ptr<FrameStream> FrameStream::Connect(
    const std::string& host, uint16_t port, std::chrono::milliseconds timeout) {
  auto impl = std::make_unique<Impl>();
  impl->timeout = timeout;
  boost::system::error_code ec;
  tcp::resolver resolver(impl->io);
  auto endpoints = resolver.resolve(host, std::to_string(port), ec);
  if (!ec) asio::connect(impl->socket, endpoints, ec);
  if (ec) {
    throw ProtocolError("cannot connect to " + host + ":" +
                        std::to_string(port) + ": " + ec.message());
  }
  impl->socket.set_option(tcp::no_delay(true));
  return std::unique_ptr<FrameStream>(new FrameStream(std::move(impl)));
}

void FrameStream::SendRaw(const Bytes& bytes) {
  boost::system::error_code ec;
  asio::write(impl_->socket, asio::buffer(bytes), ec);
  if (ec) throw ProtocolError("send failed: " + ec.message());
}

void FrameStream::Send(const Frame& frame) {
  const Bytes encoded = EncodeFrame(frame);
  SendRaw(encoded);
  traffic_.push_back({true, frame.type, encoded.size()});
}

void FrameStream::ReadExact(uint8_t* out, std::size_t n) {
  std::size_t got = 0;
  while (got < n) {
    pollfd pfd{impl_->socket.native_handle(), POLLIN, 0};
    const int ready = ::poll(&pfd, 1, static_cast<int>(impl_->timeout.count()));
    if (ready == 0) throw ProtocolError("timed out waiting for the peer");
    if (ready < 0) throw ProtocolError("poll failed");
    boost::system::error_code ec;
    const std::size_t r =
        impl_->socket.read_some(asio::buffer(out + got, n - got), ec);
    if (ec == asio::error::eof) {
      throw ProtocolError(got == 0 ? "connection closed by peer"
                                   : "connection closed mid-frame");
    }
    if (ec) throw ProtocolError("receive failed: " + ec.message());
    got += r;
  }
}

Frame FrameStream::Receive() {
  std::array<uint8_t, kFrameHeaderBytes> header;
  ReadExact(header.data(), header.size());
  const FrameHeader h = ParseHeader(header);
  Frame f;
  f.type = h.type;
  f.payload.resize(h.length);
  if (h.length != 0) ReadExact(f.payload.data(), h.length);
  traffic_.push_back({false, f.type, kFrameHeaderBytes + h.length});
  return f;
}

void FrameStream::Close() {
  boost::system::error_code ec;
  impl_->socket.shutdown(tcp::socket::shutdown_both, ec);
  impl_->socket.close(ec);
}

namespace {

[[noreturn]] void ThrowServerError(const Message& m) {
  const auto& err = std::get<ErrorMsg>(m);
  throw ProtocolError("server error " +
                      std::to_string(static_cast<int>(err.code)) + ": " +
                      err.message);
}

Message ExpectOn(FrameStream& stream, MsgType type) {
  const Message m = DecodeMessage(stream.Receive());
  if (std::holds_alternative<ErrorMsg>(m)) ThrowServerError(m);
  if (EncodeMessage(m).type != static_cast<uint8_t>(type)) {
    throw ProtocolError(std::string("expected ") +
                        std::string(MsgTypeName(static_cast<uint8_t>(type))));
  }
  return m;
}

}  // namespace

channel::Key HandshakeClient(FrameStream& stream, const ClientId& client_id,
                             RandomStream& rng,
                             const channel::Digest& expected_measurement) {
  channel::ClientHandshake hs(client_id, rng);
  stream.Send(EncodeMessage(HelloMsg{client_id, hs.Hello()}));
  const auto attest = std::get<AttestMsg>(ExpectOn(stream, MsgType::kAttest));
  return hs.Finish(attest.attest, expected_measurement);
}

std::unique_ptr<ServerConnection> ServerConnection::Connect(
    const std::string& host, uint16_t port, std::chrono::milliseconds timeout) {
  return std::unique_ptr<ServerConnection>(
      new ServerConnection(FrameStream::Connect(host, port, timeout)));
}

Message ServerConnection::Expect(MsgType type) {
  return ExpectOn(*stream_, type);
}

void ServerConnection::Handshake(const ClientId& client_id, RandomStream& rng,
                                 const channel::Digest& expected_measurement) {
  session_key_ = HandshakeClient(*stream_, client_id, rng, expected_measurement);
  client_id_ = client_id;
  attested_ = true;
  counter_ = 0;
}

void ServerConnection::ProvisionParams(const Bytes& serialized_params) {
  if (!attested_) throw ProtocolError("handshake must precede provisioning");
  stream_->Send(EncodeMessage(ProvisionParamsMsg{serialized_params}));
  Expect(MsgType::kProvisionParams);
}

void ServerConnection::ProvisionKeys(const Bytes& secret_key_bytes,
                                     const Bytes& public_key_bytes) {
  if (!attested_) throw ProtocolError("handshake must precede provisioning");
  Bytes sealed = enclave::SealKeys(session_key_, counter_++, secret_key_bytes,
                                   public_key_bytes);
  stream_->Send(EncodeMessage(ProvisionKeysMsg{std::move(sealed)}));
  Expect(MsgType::kProvisionKeys);
}

sched::Decision ServerConnection::ReportNoise(const sched::NoiseReport& report) {
  stream_->Send(EncodeMessage(NoiseReportMsg{report}));
  return std::get<PolicyDecisionMsg>(Expect(MsgType::kPolicyDecision)).decision;
}

Bytes ServerConnection::Bootstrap(const Bytes& serialized_ciphertext) {
  stream_->Send(EncodeMessage(BootstrapDataMsg{serialized_ciphertext}));
  return std::get<BootstrapResultMsg>(Expect(MsgType::kBootstrapResult))
      .ciphertext;
}

}  // namespace teefhe::wire
