#include "teefhe/client/bootstrap_link.h"

#include <algorithm>

#include "teefhe/enclave/enclave.h"
#include "teefhe/she/serialization.h"

namespace teefhe::client {

RemoteBootstrapLink::RemoteBootstrapLink(
    std::unique_ptr<wire::ServerConnection> connection, she::ContextPtr ctx)
    : connection_(std::move(connection)), ctx_(std::move(ctx)) {}

sched::Decision RemoteBootstrapLink::Report(const sched::NoiseReport& report) {
  return connection_->ReportNoise(report);
}

she::Ciphertext RemoteBootstrapLink::Refresh(const she::Ciphertext& ct) {
  const wire::Bytes out = connection_->Bootstrap(she::Serialize(*ctx_, ct));
  return she::DeserializeCiphertext(*ctx_, out);
}

std::unique_ptr<wire::ServerConnection> ConnectAndProvision(
    const std::string& host, uint16_t port, const wire::ClientId& client_id,
    const she::Context& ctx, const she::KeySet& keys, RandomStream& rng) {
  auto conn = wire::ServerConnection::Connect(host, port);
  conn->Handshake(client_id, rng, enclave::Enclave::Measurement());
  conn->ProvisionParams(she::SerializeParams(ctx.params()));
  conn->ProvisionKeys(she::Serialize(ctx, keys.secret),
                      she::Serialize(ctx, keys.public_key));
  return conn;
}

std::unique_ptr<RemoteBootstrapLink> OpenRemoteLink(
    const std::string& host, uint16_t port, const wire::ClientId& client_id,
    const she::ContextPtr& ctx, const she::KeySet& keys, RandomStream& rng) {
  return std::make_unique<RemoteBootstrapLink>(
      ConnectAndProvision(host, port, client_id, *ctx, keys, rng), ctx);
}

wire::ClientId ClientIdFromLabel(const std::string& label) {
  const channel::Digest d = channel::Blake2b256(
      std::span(reinterpret_cast<const uint8_t*>(label.data()), label.size()));
  wire::ClientId id{};
  std::copy_n(d.begin(), id.size(), id.begin());
  return id;
}

}  // namespace teefhe::client
