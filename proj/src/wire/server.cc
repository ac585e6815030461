#include "teefhe/wire/server.h"

#include <atomic>
#include <deque>
#include <mutex>
#include <set>
#include <thread>

#include <boost/asio.hpp>

#include "teefhe/errors.h"
#include "teefhe/wire/frame.h"
#include "teefhe/wire/messages.h"

namespace teefhe::wire {

namespace asio = boost::asio;
using asio::ip::tcp;

namespace {

ErrorCode CodeFor(enclave::EcallStatus status) {
  switch (status) {
    case enclave::EcallStatus::kRejected: return ErrorCode::kRejected;
    case enclave::EcallStatus::kOrderingError: return ErrorCode::kOrdering;
    case enclave::EcallStatus::kAuthFailure: return ErrorCode::kAuthentication;
    default: return ErrorCode::kInternal;
  }
}

}  // namespace

class Connection;

struct BootstrapServer::Impl {
  explicit Impl(ServerConfig cfg)
      : config(std::move(cfg)),
        enclave(config.enclave),
        scheduler(config.scheduler,
                  [this](const sched::ClientId& id, const Bytes& in) {
                    enclave::EnclaveClient client(enclave);
                    return client.DecreaseNoise(id, in);
                  }),
        acceptor(io),
        poll_timer(io),
        signals(io) {}

  void Accept();
  void ArmPollTimer();
  void PollDataMap();

  ServerConfig config;
  enclave::Enclave enclave;
  sched::Scheduler scheduler;
  asio::io_context io;
  tcp::acceptor acceptor;
  asio::steady_timer poll_timer;
  asio::signal_set signals;
  asio::thread_pool provisioning{1};
  std::thread service;
  bool timer_armed = false;
  std::set<std::shared_ptr<Connection>> awaiting;  // service thread only
  std::atomic<std::size_t> open{0};
  std::atomic<std::size_t> peak{0};
  std::mutex stop_mutex;
  bool stopped = false;
  std::atomic<bool> started{false};
};

// One client connection; every member is touched only on the service thread.
class Connection : public std::enable_shared_from_this<Connection> {
 public:
  Connection(BootstrapServer::Impl& server, tcp::socket socket)
      : server_(server), socket_(std::move(socket)) {}

  void Start() {
    const std::size_t now = ++server_.open;
    std::size_t prev = server_.peak.load();
    while (now > prev && !server_.peak.compare_exchange_weak(prev, now)) {}
    ReadHeader();
  }

  const sched::ClientId& client_id() const { return client_id_; }
  bool closed() const { return closed_; }

  void Send(const Message& m) {
    if (closed_) return;
    const bool idle = writes_.empty();
    writes_.push_back(EncodeFrame(EncodeMessage(m)));
    if (idle) WriteNext();
  }

  void SendError(ErrorCode code, const std::string& why) {
    Send(ErrorMsg{code, why});
  }

  // Called by the poll timer once the data map has a result for us.
  void Deliver(sched::PollResult result) {
    awaiting_ = false;
    if (result.state == sched::PollResult::State::kFinished) {
      Send(BootstrapResultMsg{std::move(result.payload)});
    } else {
      SendError(ErrorCode::kTaskFailed, result.error);
    }
  }

 private:
  void ReadHeader() {
    auto self = shared_from_this();
    asio::async_read(socket_, asio::buffer(header_),
                     [self](boost::system::error_code ec, std::size_t) {
                       if (ec) return self->Close();
                       self->OnHeader();
                     });
  }

  void OnHeader() {
    FrameHeader h;
    try {
      h = ParseHeader(header_);
    } catch (const ProtocolError& e) {
      close_after_write_ = true;
      SendError(ErrorCode::kMalformed, e.what());
      return;
    }
    frame_.type = h.type;
    frame_.payload.assign(h.length, 0);
    if (h.length == 0) return Dispatch();
    auto self = shared_from_this();
    asio::async_read(socket_, asio::buffer(frame_.payload),
                     [self](boost::system::error_code ec, std::size_t) {
                       if (ec) return self->Close();
                       self->Dispatch();
                     });
  }

  // Handles one frame, then resumes reading. Provisioning calls resume from
  // their completion handler so frames stay strictly ordered.
  void Dispatch() {
    if (!IsKnownType(frame_.type)) {
      SendError(ErrorCode::kUnknownType,
                "unknown message type " + std::to_string(frame_.type));
      return ReadHeader();
    }
    Message m;
    try {
      m = DecodeMessage(frame_);
    } catch (const ProtocolError& e) {
      SendError(ErrorCode::kMalformed, e.what());
      return ReadHeader();
    }
    if (auto* hello = std::get_if<HelloMsg>(&m)) {
      return Provision(enclave::Ecall::kBeginSession, hello->client_id,
                       std::move(hello->hello), MsgType::kAttest);
    }
    if (!has_id_) {
      SendError(ErrorCode::kOrdering, "HELLO must come first");
      return ReadHeader();
    }
    if (auto* p = std::get_if<ProvisionParamsMsg>(&m)) {
      return Provision(enclave::Ecall::kConfigurePara, client_id_,
                       std::move(p->params), MsgType::kProvisionParams);
    }
    if (auto* k = std::get_if<ProvisionKeysMsg>(&m)) {
      return Provision(enclave::Ecall::kSetKey, client_id_,
                       std::move(k->sealed), MsgType::kProvisionKeys);
    }
    if (auto* r = std::get_if<NoiseReportMsg>(&m)) {
      OnNoiseReport(r->report);
    } else if (auto* d = std::get_if<BootstrapDataMsg>(&m)) {
      OnBootstrapData(std::move(d->ciphertext));
    } else {
      SendError(ErrorCode::kOrdering,
                std::string("unexpected ") +
                    std::string(MsgTypeName(frame_.type)) + " from client");
    }
    ReadHeader();
  }

  void Provision(enclave::Ecall call, const sched::ClientId& id, Bytes payload,
                 MsgType reply) {
    auto self = shared_from_this();
    asio::post(server_.provisioning, [self, call, id, reply,
                                      payload = std::move(payload)] {
      enclave::EcallResult r = self->server_.enclave.Call(call, id, payload);
      asio::post(self->server_.io, [self, call, id, reply, r = std::move(r)] {
        self->OnProvisioned(call, id, reply, r);
      });
    });
  }

  void OnProvisioned(enclave::Ecall call, const sched::ClientId& id,
                     MsgType reply, const enclave::EcallResult& r) {
    if (r.status != enclave::EcallStatus::kOk) {
      SendError(CodeFor(r.status),
                std::string(r.payload.begin(), r.payload.end()));
    } else if (call == enclave::Ecall::kBeginSession) {
      ReleaseReservation();
      client_id_ = id;
      has_id_ = true;
      Send(AttestMsg{r.payload});
    } else {
      // Provisioning steps are acknowledged with an empty frame of the
      // request's own type.
      Send(reply == MsgType::kProvisionParams ? Message{ProvisionParamsMsg{}}
                                              : Message{ProvisionKeysMsg{}});
    }
    ReadHeader();
  }

  void OnNoiseReport(const sched::NoiseReport& report) {
    if (awaiting_) {
      SendError(ErrorCode::kOrdering, "a bootstrap is already in flight");
      return;
    }
    ReleaseReservation();
    const sched::Decision d = server_.scheduler.Admit(client_id_, report);
    admitted_ = d != sched::Decision::kDefer;
    Send(PolicyDecisionMsg{d});
  }

  void OnBootstrapData(Bytes ciphertext) {
    if (!admitted_) {
      SendError(ErrorCode::kNotAdmitted,
                "BOOTSTRAP_DATA requires a prior admit decision");
      return;
    }
    admitted_ = false;
    try {
      server_.scheduler.Submit(client_id_, std::move(ciphertext));
    } catch (const Error& e) {
      SendError(ErrorCode::kRejected, e.what());
      return;
    }
    awaiting_ = true;
    server_.awaiting.insert(shared_from_this());
    server_.ArmPollTimer();
  }

  void ReleaseReservation() {
    if (admitted_) server_.scheduler.CancelReservation(client_id_);
    admitted_ = false;
  }

  void WriteNext() {
    auto self = shared_from_this();
    asio::async_write(socket_, asio::buffer(writes_.front()),
                      [self](boost::system::error_code ec, std::size_t) {
                        if (ec) return self->Close();
                        self->writes_.pop_front();
                        if (!self->writes_.empty()) {
                          self->WriteNext();
                        } else if (self->close_after_write_) {
                          self->Close();
                        }
                      });
  }

  void Close() {
    if (closed_) return;
    closed_ = true;
    ReleaseReservation();
    boost::system::error_code ec;
    socket_.shutdown(tcp::socket::shutdown_both, ec);
    socket_.close(ec);
    --server_.open;
  }

  BootstrapServer::Impl& server_;
  tcp::socket socket_;
  std::array<uint8_t, kFrameHeaderBytes> header_{};
  Frame frame_;
  std::deque<Bytes> writes_;
  sched::ClientId client_id_{};
  bool has_id_ = false;
  bool admitted_ = false;
  bool awaiting_ = false;
  bool closed_ = false;
  bool close_after_write_ = false;
};

void BootstrapServer::Impl::Accept() {
  acceptor.async_accept([this](boost::system::error_code ec, tcp::socket s) {
    if (ec) return;  // acceptor closed
    boost::system::error_code ignored;
    s.set_option(tcp::no_delay(true), ignored);
    std::make_shared<Connection>(*this, std::move(s))->Start();
    Accept();
  });
}

void BootstrapServer::Impl::ArmPollTimer() {
  if (timer_armed || awaiting.empty()) return;
  timer_armed = true;
  poll_timer.expires_after(config.scheduler.poll_interval);
  poll_timer.async_wait([this](boost::system::error_code ec) {
    timer_armed = false;
    if (ec) return;
    PollDataMap();
    ArmPollTimer();
  });
}

void BootstrapServer::Impl::PollDataMap() {
  for (auto it = awaiting.begin(); it != awaiting.end();) {
    sched::PollResult r = scheduler.Poll((*it)->client_id());
    if (r.state == sched::PollResult::State::kPending) {
      ++it;
      continue;
    }
    (*it)->Deliver(std::move(r));
    it = awaiting.erase(it);
  }
}

BootstrapServer::BootstrapServer(ServerConfig config)
    : impl_(std::make_unique<Impl>(std::move(config))) {}

BootstrapServer::~BootstrapServer() { Stop(); }

void BootstrapServer::Start() {
  boost::system::error_code ec;
  const auto address = asio::ip::make_address(impl_->config.host, ec);
  if (ec) throw ConfigurationError("bad listen address " + impl_->config.host);
  const tcp::endpoint endpoint(address, impl_->config.port);
  impl_->acceptor.open(endpoint.protocol(), ec);
  if (!ec) impl_->acceptor.set_option(tcp::acceptor::reuse_address(true), ec);
  if (!ec) impl_->acceptor.bind(endpoint, ec);
  if (!ec) impl_->acceptor.listen(asio::socket_base::max_listen_connections, ec);
  if (ec) {
    throw ConfigurationError("cannot listen on " + impl_->config.host + ":" +
                             std::to_string(impl_->config.port) + ": " +
                             ec.message());
  }
  if (impl_->config.handle_signals) {
    impl_->signals.add(SIGINT);
    impl_->signals.add(SIGTERM);
    impl_->signals.async_wait(
        [this](boost::system::error_code, int) { impl_->io.stop(); });
  }
  impl_->Accept();
  impl_->started = true;
  impl_->service = std::thread([this] { impl_->io.run(); });
}

void BootstrapServer::Wait() {
  if (impl_->service.joinable()) impl_->service.join();
}

void BootstrapServer::Stop() {
  std::lock_guard lock(impl_->stop_mutex);
  if (impl_->stopped) return;
  impl_->stopped = true;
  impl_->io.stop();
  if (impl_->service.joinable()) impl_->service.join();
  impl_->provisioning.join();
  impl_->scheduler.Shutdown();
}

uint16_t BootstrapServer::port() const {
  boost::system::error_code ec;
  return impl_->acceptor.local_endpoint(ec).port();
}

std::size_t BootstrapServer::open_connections() const { return impl_->open; }
std::size_t BootstrapServer::peak_connections() const { return impl_->peak; }
enclave::Enclave& BootstrapServer::enclave() { return impl_->enclave; }
sched::Scheduler& BootstrapServer::scheduler() { return impl_->scheduler; }

}  // namespace teefhe::wire
