#include <gtest/gtest.h>

#include <random>
#include <thread>

#include "teefhe/enclave/enclave.h"
#include "teefhe/errors.h"
#include "teefhe/she/decryptor.h"
#include "teefhe/she/encryptor.h"
#include "teefhe/she/evaluator.h"
#include "teefhe/she/keys.h"
#include "teefhe/she/params.h"
#include "teefhe/she/serialization.h"
#include "teefhe/wire/connection.h"
#include "teefhe/wire/frame.h"
#include "teefhe/wire/messages.h"
#include "teefhe/wire/server.h"

namespace teefhe::wire {
namespace {

using sched::Decision;

ClientId Id(uint8_t tag) {
  ClientId id{};
  id[0] = tag;
  id[15] = 0x5A;
  return id;
}

std::vector<Message> SampleMessages() {
  Bytes hello(enclave::kHelloBytes, 7);
  Bytes attest(enclave::kAttestBytes, 9);
  return {HelloMsg{Id(3), hello},
          AttestMsg{attest},
          ProvisionParamsMsg{{1, 2, 3}},
          ProvisionKeysMsg{{4, 5}},
          NoiseReportMsg{{10, 3}},
          PolicyDecisionMsg{Decision::kAdmitMandatory},
          BootstrapDataMsg{{9, 9, 9}},
          BootstrapResultMsg{{}},
          ErrorMsg{ErrorCode::kUnknownType, "nope"}};
}

TEST(Frame, EncodesBigEndianHeader) {
  const Bytes b = EncodeFrame(Frame(MsgType::kNoiseReport, {0xAA, 0xBB}));
  EXPECT_EQ(b, (Bytes{0, 0, 0, 2, 0x10, 0xAA, 0xBB}));
}

TEST(Frame, NoiseReportPayloadLayout) {
  const Frame f = EncodeMessage(NoiseReportMsg{{10, 3}});
  EXPECT_EQ(f.type, 0x10);
  EXPECT_EQ(f.payload, (Bytes{0, 0, 0, 10, 0, 0, 0, 3}));
  EXPECT_EQ(std::get<NoiseReportMsg>(DecodeMessage(f)).report,
            (sched::NoiseReport{10, 3}));
}

TEST(Frame, MessageCodes) {
  const std::vector<uint8_t> codes = {0x01, 0x02, 0x03, 0x04, 0x10,
                                      0x11, 0x12, 0x13, 0x7F};
  const auto msgs = SampleMessages();
  for (std::size_t i = 0; i < msgs.size(); ++i) {
    EXPECT_EQ(EncodeMessage(msgs[i]).type, codes[i]);
  }
  EXPECT_EQ(EncodeMessage(PolicyDecisionMsg{Decision::kDefer}).payload,
            Bytes{0});
  EXPECT_EQ(EncodeMessage(PolicyDecisionMsg{Decision::kAdmitEager}).payload,
            Bytes{1});
}

TEST(Frame, AllMessagesRoundTrip) {
  for (const Message& m : SampleMessages()) {
    const Bytes wire = EncodeFrame(EncodeMessage(m));
    FrameDecoder dec;
    dec.Feed(wire);
    auto f = dec.Next();
    ASSERT_TRUE(f);
    EXPECT_EQ(DecodeMessage(*f), m);
    EXPECT_FALSE(dec.HasPartial());
  }
}

TEST(Frame, UnknownTypeAndMalformedPayloads) {
  EXPECT_THROW(DecodeMessage(Frame(uint8_t{0xFF}, {})), ProtocolError);
  EXPECT_THROW(DecodeMessage(Frame(MsgType::kNoiseReport, {1, 2})),
               ProtocolError);
  EXPECT_THROW(DecodeMessage(Frame(MsgType::kPolicyDecision, {3})),
               ProtocolError);
  EXPECT_THROW(DecodeMessage(Frame(MsgType::kError, {})), ProtocolError);
  EXPECT_THROW(DecodeMessage(Frame(MsgType::kHello, Bytes(10))), ProtocolError);
}

TEST(Frame, LengthCapEnforced) {
  FrameDecoder dec;
  const Bytes oversized = {0x04, 0x00, 0x00, 0x01, 0x12};
  EXPECT_THROW(dec.Feed(oversized), ProtocolError);
  const Bytes at_cap = {0x04, 0x00, 0x00, 0x00, 0x12};
  FrameDecoder ok;
  EXPECT_NO_THROW(ok.Feed(at_cap));
  EXPECT_TRUE(ok.HasPartial());
}

TEST(Frame, TruncationLeavesPartial) {
  Bytes wire = EncodeFrame(Frame(MsgType::kBootstrapData, Bytes(100, 1)));
  wire.resize(50);
  FrameDecoder dec;
  dec.Feed(wire);
  EXPECT_FALSE(dec.Next());
  EXPECT_TRUE(dec.HasPartial());
}

TEST(Frame, RandomizedFuzzRoundTrip) {
  std::mt19937_64 gen(2024);
  Bytes stream;
  std::vector<Frame> sent;
  for (int i = 0; i < 10000; ++i) {
    Frame f;
    f.type = static_cast<uint8_t>(gen());
    if (gen() % 2) {
      const auto msgs = SampleMessages();
      f = EncodeMessage(msgs[gen() % msgs.size()]);
    }
    if (gen() % 3 == 0) {
      f.payload.resize(gen() % 200);
      for (auto& b : f.payload) b = static_cast<uint8_t>(gen());
    }
    sent.push_back(f);
    const Bytes enc = EncodeFrame(f);
    stream.insert(stream.end(), enc.begin(), enc.end());
    // Decoding must either fail cleanly or be an exact inverse.
    try {
      EXPECT_EQ(EncodeMessage(DecodeMessage(f)), f);
    } catch (const ProtocolError&) {
    }
  }
  FrameDecoder dec;
  std::vector<Frame> received;
  for (std::size_t pos = 0; pos < stream.size();) {
    const std::size_t chunk = std::min<std::size_t>(1 + gen() % 700,
                                                    stream.size() - pos);
    dec.Feed(std::span(stream).subspan(pos, chunk));
    pos += chunk;
    while (auto f = dec.Next()) received.push_back(std::move(*f));
  }
  EXPECT_EQ(received, sent);
  EXPECT_FALSE(dec.HasPartial());
}

TEST(Frame, GarbageNeverCrashes) {
  std::mt19937_64 gen(5);
  for (int i = 0; i < 2000; ++i) {
    Bytes junk(gen() % 64);
    for (auto& b : junk) b = static_cast<uint8_t>(gen());
    FrameDecoder dec;
    try {
      dec.Feed(junk);
      while (auto f = dec.Next()) {
        try {
          DecodeMessage(*f);
        } catch (const ProtocolError&) {
        }
      }
    } catch (const ProtocolError&) {
    }
  }
}

// A provisioned client session used by the server tests.
struct Session {
  std::unique_ptr<ServerConnection> conn;
  she::ContextPtr ctx;
  she::KeySet keys;
};

Session OpenSession(uint16_t port, const ClientId& id, uint64_t seed,
                    std::size_t n = 1024) {
  auto rng = RandomStream::Seeded(seed);
  auto ctx = she::Context::Create(she::PresetForDegree(n));
  auto keys = she::GenerateKeys(*ctx, rng);
  Session s{nullptr, ctx, std::move(keys)};
  s.conn = ServerConnection::Connect("127.0.0.1", port);
  s.conn->Handshake(id, rng, enclave::Enclave::Measurement());
  s.conn->ProvisionParams(she::SerializeParams(s.ctx->params()));
  s.conn->ProvisionKeys(she::Serialize(*s.ctx, s.keys.secret),
                        she::Serialize(*s.ctx, s.keys.public_key));
  return s;
}

ServerConfig TestConfig(std::size_t pool = 1) {
  ServerConfig c;
  c.scheduler.pool_size = pool;
  c.scheduler.eager_threshold = 10;
  return c;
}

TEST(Server, BootstrapRoundTripPreservesPlaintext) {
  BootstrapServer server(TestConfig());
  server.Start();
  Session s = OpenSession(server.port(), Id(1), 11);
  auto rng = RandomStream::Seeded(12);
  she::Encryptor enc(s.ctx, s.keys.public_key);
  she::Decryptor dec(s.ctx, s.keys.secret);
  const auto pt = she::Plaintext::FromValues(*s.ctx, {5, 6, 7});
  const auto ct = enc.Encrypt(pt, rng);

  EXPECT_EQ(s.conn->ReportNoise({40, 3}), Decision::kDefer);
  EXPECT_EQ(s.conn->ReportNoise({8, 3}), Decision::kAdmitEager);
  EXPECT_EQ(s.conn->ReportNoise({2, 3}), Decision::kAdmitMandatory);
  const Bytes out = s.conn->Bootstrap(she::Serialize(*s.ctx, ct));
  const auto refreshed = she::DeserializeCiphertext(*s.ctx, out);
  EXPECT_EQ(dec.Decrypt(refreshed).m, pt.m);
  EXPECT_EQ(server.scheduler().CompletedTasks().size(), 1u);
}

TEST(Server, UnknownTypeAnsweredWithErrorAndConnectionSurvives) {
  BootstrapServer server(TestConfig());
  server.Start();
  Session s = OpenSession(server.port(), Id(2), 21);
  s.conn->stream().Send(Frame(uint8_t{0xFF}, {1, 2, 3}));
  const Message m = DecodeMessage(s.conn->stream().Receive());
  ASSERT_TRUE(std::holds_alternative<ErrorMsg>(m));
  EXPECT_EQ(std::get<ErrorMsg>(m).code, ErrorCode::kUnknownType);
  EXPECT_EQ(s.conn->ReportNoise({40, 3}), Decision::kDefer);
}

TEST(Server, OversizedFrameClosesConnection) {
  BootstrapServer server(TestConfig());
  server.Start();
  auto stream = FrameStream::Connect("127.0.0.1", server.port(),
                                     std::chrono::seconds(10));
  stream->SendRaw({0x7F, 0xFF, 0xFF, 0xFF, 0x12});
  const Message m = DecodeMessage(stream->Receive());
  EXPECT_EQ(std::get<ErrorMsg>(m).code, ErrorCode::kMalformed);
  EXPECT_THROW(stream->Receive(), ProtocolError);
}

TEST(Server, BootstrapWithoutAdmissionRejected) {
  BootstrapServer server(TestConfig());
  server.Start();
  Session s = OpenSession(server.port(), Id(3), 31);
  EXPECT_THROW(s.conn->Bootstrap({1, 2, 3}), ProtocolError);
  EXPECT_EQ(s.conn->ReportNoise({40, 3}), Decision::kDefer);
}

TEST(Server, ProvisioningBeforeHelloRejected) {
  BootstrapServer server(TestConfig());
  server.Start();
  auto stream = FrameStream::Connect("127.0.0.1", server.port());
  stream->Send(EncodeMessage(NoiseReportMsg{{1, 1}}));
  EXPECT_EQ(std::get<ErrorMsg>(DecodeMessage(stream->Receive())).code,
            ErrorCode::kOrdering);
}

TEST(Server, WrongMeasurementAbortsBeforeProvisioning) {
  BootstrapServer server(TestConfig());
  server.Start();
  auto conn = ServerConnection::Connect("127.0.0.1", server.port());
  auto rng = RandomStream::Seeded(4);
  channel::Digest pinned = enclave::Enclave::Measurement();
  pinned[5] ^= 1;
  EXPECT_THROW(conn->Handshake(Id(4), rng, pinned), ProtocolError);
  EXPECT_THROW(conn->ProvisionParams({}), ProtocolError);
}

TEST(Server, ForgedKeysRejected) {
  BootstrapServer server(TestConfig());
  server.Start();
  auto conn = ServerConnection::Connect("127.0.0.1", server.port());
  auto rng = RandomStream::Seeded(5);
  conn->Handshake(Id(5), rng, enclave::Enclave::Measurement());
  auto ctx = she::Context::Create(she::PresetForDegree(1024));
  conn->ProvisionParams(she::SerializeParams(ctx->params()));
  Bytes sealed(200, 0);
  conn->stream().Send(EncodeMessage(ProvisionKeysMsg{sealed}));
  EXPECT_EQ(std::get<ErrorMsg>(DecodeMessage(conn->stream().Receive())).code,
            ErrorCode::kAuthentication);
}

TEST(Server, ThirtyTwoConcurrentConnections) {
  BootstrapServer server(TestConfig(2));
  server.Start();
  constexpr int kClients = 32;
  std::vector<Session> sessions;
  for (int i = 0; i < kClients; ++i) {
    sessions.push_back(OpenSession(server.port(), Id(static_cast<uint8_t>(i)),
                                   100 + i, 8));
  }
  EXPECT_GE(server.open_connections(), std::size_t{kClients});
  std::vector<std::thread> threads;
  std::atomic<int> ok{0};
  for (int i = 0; i < kClients; ++i) {
    threads.emplace_back([&, i] {
      Session& s = sessions[i];
      auto rng = RandomStream::Seeded(500 + i);
      she::Encryptor enc(s.ctx, s.keys.public_key);
      she::Decryptor dec(s.ctx, s.keys.secret);
      const auto pt = she::Plaintext::FromValues(
          *s.ctx, {static_cast<uint64_t>(i)});
      const auto ct = enc.Encrypt(pt, rng);
      if (s.conn->ReportNoise({0, 1}) != Decision::kAdmitMandatory) return;
      const Bytes out = s.conn->Bootstrap(she::Serialize(*s.ctx, ct));
      if (dec.Decrypt(she::DeserializeCiphertext(*s.ctx, out)).m == pt.m) ++ok;
    });
  }
  for (auto& t : threads) t.join();
  EXPECT_EQ(ok.load(), kClients);
  EXPECT_GE(server.peak_connections(), std::size_t{kClients});
}

TEST(Server, KeyProvisioningLengthIndependentOfKey) {
  BootstrapServer server(TestConfig());
  server.Start();
  Session a = OpenSession(server.port(), Id(40), 1);
  Session b = OpenSession(server.port(), Id(41), 2);
  auto lengths = [](const Session& s) {
    std::vector<std::size_t> out;
    for (const auto& e : s.conn->stream().traffic()) out.push_back(e.frame_bytes);
    return out;
  };
  EXPECT_EQ(lengths(a), lengths(b));
}

}  // namespace
}  // namespace teefhe::wire
