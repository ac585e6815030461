#ifndef TEEFHE_WIRE_SERVER_H_
#define TEEFHE_WIRE_SERVER_H_

#include <cstdint>
#include <memory>
#include <string>

#include "teefhe/enclave/enclave.h"
#include "teefhe/sched/scheduler.h"

namespace teefhe::wire {

struct ServerConfig {
  std::string host = "127.0.0.1";
  uint16_t port = 0;  // 0 picks a free port
  sched::SchedulerConfig scheduler;
  enclave::EnclaveOptions enclave;
  // Stop on SIGINT/SIGTERM. Only the command-line server wants this.
  bool handle_signals = false;
};

// Bootstrapping server: one service thread runs all socket I/O and the
// data-map polling timer, the scheduler owns its dispatcher and worker pool,
// and a separate provisioning thread performs the handshake and key-setup
// enclave calls so the service thread never runs cryptography.
class BootstrapServer {
 public:
  explicit BootstrapServer(ServerConfig config);
  ~BootstrapServer();
  BootstrapServer(const BootstrapServer&) = delete;
  BootstrapServer& operator=(const BootstrapServer&) = delete;

  // Binds and starts serving. Throws ConfigurationError if binding fails.
  void Start();
  void Stop();
  // Blocks until Stop() is called or a handled signal arrives.
  void Wait();

  uint16_t port() const;
  std::size_t open_connections() const;
  std::size_t peak_connections() const;
  enclave::Enclave& enclave();
  sched::Scheduler& scheduler();

  struct Impl;

 private:
  std::unique_ptr<Impl> impl_;
};

}  // namespace teefhe::wire

#endif  // TEEFHE_WIRE_SERVER_H_
