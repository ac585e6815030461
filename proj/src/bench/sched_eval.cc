#include "teefhe/bench/sched_eval.h"

#include <barrier>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "teefhe/client/bootstrap_link.h"
#include "teefhe/errors.h"
#include "teefhe/she/encryptor.h"
#include "teefhe/she/keys.h"
#include "teefhe/she/params.h"
#include "teefhe/she/serialization.h"
#include "teefhe/wire/server.h"

namespace teefhe::bench {

SchedEvalResult RunSchedEval(const SchedEvalOptions& o) {
  if (o.clients == 0 || o.pool == 0 || o.iters == 0) {
    throw ParameterError("clients, pool and iters must be positive");
  }
  const auto ctx = she::Context::Create(she::PresetForDegree(o.n));
  auto key_rng = RandomStream::Seeded(o.seed);
  // All synthetic clients share one key set; only the ids differ. The
  // scheduler never looks inside ciphertexts, so this does not change the
  // queueing behaviour being measured.
  const she::KeySet keys = she::GenerateKeys(*ctx, key_rng);
  const she::Encryptor enc(ctx, keys.public_key);
  const she::Bytes payload =
      she::Serialize(*ctx, enc.Encrypt(she::Plaintext::Constant(*ctx, 1), key_rng));

  wire::ServerConfig config;
  config.scheduler.pool_size = o.pool;
  config.enclave.transition_delay = o.transition_delay;
  config.enclave.rng_seed = o.seed;
  wire::BootstrapServer server(config);
  server.Start();

  std::barrier start_line(static_cast<std::ptrdiff_t>(o.clients));
  std::mutex error_mu;
  std::exception_ptr first_error;
  std::vector<std::thread> threads;
  for (std::size_t c = 0; c < o.clients; ++c) {
    threads.emplace_back([&, c] {
      std::unique_ptr<wire::ServerConnection> conn;
      try {
        auto rng = RandomStream::Seeded(o.seed * 1000 + c + 1);
        conn = client::ConnectAndProvision(
            "127.0.0.1", server.port(),
            client::ClientIdFromLabel("sched-eval-" + std::to_string(c)), *ctx,
            keys, rng);
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!first_error) first_error = std::current_exception();
      }
      start_line.arrive_and_wait();
      if (!conn) return;
      try {
        for (std::size_t i = 0; i < o.iters; ++i) {
          // Zero budget left: always mandatory.
          const sched::Decision d = conn->ReportNoise({0, 1});
          if (d != sched::Decision::kAdmitMandatory) {
            throw ProtocolError("expected a mandatory admission");
          }
          conn->Bootstrap(payload);
        }
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();

  SchedEvalResult result;
  result.records = server.scheduler().CompletedTasks();
  result.peak_connections = server.peak_connections();
  server.Stop();
  if (first_error) std::rethrow_exception(first_error);
  result.stats = sched::ComputeWaitingStats(result.records);
  return result;
}

std::vector<SweepPoint> SweepSchedEval(const SchedEvalOptions& base,
                                       const std::vector<std::size_t>& clients,
                                       const std::vector<std::size_t>& pools) {
  std::vector<SweepPoint> points;
  for (std::size_t c : clients) {
    for (std::size_t p : pools) {
      SchedEvalOptions o = base;
      o.clients = c;
      o.pool = p;
      points.push_back({c, p, RunSchedEval(o).stats.aggregate});
    }
  }
  return points;
}

void WriteSweepCsv(std::ostream& out, const std::vector<SweepPoint>& points) {
  out << "clients,pool,tasks,mean_wait_ns,p50_wait_ns,p95_wait_ns,max_wait_ns\n";
  for (const SweepPoint& p : points) {
    out << p.clients << ',' << p.pool << ',' << p.wait.count << ','
        << static_cast<int64_t>(p.wait.mean_ns) << ','
        << static_cast<int64_t>(p.wait.p50_ns) << ','
        << static_cast<int64_t>(p.wait.p95_ns) << ','
        << static_cast<int64_t>(p.wait.max_ns) << '\n';
  }
}

}  // namespace teefhe::bench
