#ifndef TEEFHE_CLIENT_BOOTSTRAP_LINK_H_
#define TEEFHE_CLIENT_BOOTSTRAP_LINK_H_

#include <memory>
#include <string>

#include "teefhe/ring/random.h"
#include "teefhe/sched/policy.h"
#include "teefhe/she/types.h"
#include "teefhe/wire/connection.h"

namespace teefhe::client {

// The client's view of a bootstrapping service.
class BootstrapLink {
 public:
  virtual ~BootstrapLink() = default;
  virtual sched::Decision Report(const sched::NoiseReport& report) = 0;
  // Only valid right after an ADMIT decision.
  virtual she::Ciphertext Refresh(const she::Ciphertext& ct) = 0;
};

// Talks to a BootstrapServer over an already provisioned connection.
class RemoteBootstrapLink : public BootstrapLink {
 public:
  RemoteBootstrapLink(std::unique_ptr<wire::ServerConnection> connection,
                      she::ContextPtr ctx);

  sched::Decision Report(const sched::NoiseReport& report) override;
  she::Ciphertext Refresh(const she::Ciphertext& ct) override;

  wire::ServerConnection& connection() { return *connection_; }

 private:
  std::unique_ptr<wire::ServerConnection> connection_;
  she::ContextPtr ctx_;
};

// Connects, runs the attested handshake against the pinned enclave
// measurement and provisions parameters and keys.
std::unique_ptr<wire::ServerConnection> ConnectAndProvision(
    const std::string& host, uint16_t port, const wire::ClientId& client_id,
    const she::Context& ctx, const she::KeySet& keys, RandomStream& rng);

// Convenience wrapper returning a ready link.
std::unique_ptr<RemoteBootstrapLink> OpenRemoteLink(
    const std::string& host, uint16_t port, const wire::ClientId& client_id,
    const she::ContextPtr& ctx, const she::KeySet& keys, RandomStream& rng);

// Deterministic 16-byte client id derived from a label.
wire::ClientId ClientIdFromLabel(const std::string& label);

}  // namespace teefhe::client

#endif  // TEEFHE_CLIENT_BOOTSTRAP_LINK_H_
