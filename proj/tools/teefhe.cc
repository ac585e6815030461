// Command-line front end: key generation, benchmarks, the bootstrapping
// server, program execution, the logistic-regression demo and the scheduler
// evaluation.
//
// Exit codes: 0 ok, 1 usage, 2 runtime failure, 3 a self-check failed.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "teefhe/bench/bench_ops.h"
#include "teefhe/bench/sched_eval.h"
#include "teefhe/client/bootstrap_link.h"
#include "teefhe/client/logistic_regression.h"
#include "teefhe/client/program.h"
#include "teefhe/client/runtime.h"
#include "teefhe/errors.h"
#include "teefhe/she/keys.h"
#include "teefhe/she/params.h"
#include "teefhe/she/serialization.h"
#include "teefhe/wire/server.h"

namespace {

namespace fs = std::filesystem;
using namespace teefhe;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitVerify = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::size_t n = 0;  // 0 means the subcommand default
  std::string preset;
  int trials = 30;
  std::string host = "127.0.0.1";
  std::optional<uint16_t> port;
  std::size_t pool = 2;
  std::size_t clients = 8;
  std::size_t iters = 0;
  uint64_t seed = 1;
  std::string out;
  std::string program;
  std::string keys;
  bool check = false;
  bool sweep = false;
};

// Writes through `out` when a path is given, otherwise to stdout.
template <class Fn>
void Emit(const std::string& path, Fn&& write) {
  if (path.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream file(path);
  if (!file) throw Error("cannot open " + path + " for writing");
  write(file);
  if (!file) throw Error("failed writing " + path);
}

she::Bytes ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  return she::Bytes(std::istreambuf_iterator<char>(in), {});
}

void WriteFile(const fs::path& path, const she::Bytes& bytes) {
  std::ofstream out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("cannot write " + path.string());
}

struct LoadedKeys {
  she::ContextPtr ctx;
  std::unique_ptr<she::KeySet> keys;
};

LoadedKeys LoadKeys(const fs::path& dir) {
  LoadedKeys k;
  k.ctx = she::Context::Create(she::DeserializeParams(ReadFile(dir / "params.bin")));
  k.keys = std::make_unique<she::KeySet>(she::KeySet{
      she::DeserializeSecretKey(*k.ctx, ReadFile(dir / "secret.key")),
      she::DeserializePublicKey(*k.ctx, ReadFile(dir / "public.key")),
      she::DeserializeEvalKeys(*k.ctx, ReadFile(dir / "eval.key"))});
  return k;
}

std::vector<std::size_t> DegreesFor(const Options& o) {
  if (o.n != 0) return {o.n};
  if (o.preset.empty() || o.preset == "desk") return {1024, 2048, 4096};
  if (o.preset == "small") return {1024};
  if (o.preset == "table") return {2048, 4096, 8192, 16384, 32768};
  throw UsageError("unknown preset '" + o.preset + "' (desk, small, table)");
}

int Keygen(const Options& o) {
  if (o.keys.empty()) throw UsageError("keygen needs --keys <dir>");
  const std::size_t n = o.n ? o.n : 2048;
  const auto ctx = she::Context::Create(she::PresetForDegree(n));
  auto rng = RandomStream::Seeded(o.seed);
  const she::KeySet keys = she::GenerateKeys(*ctx, rng);
  const fs::path dir(o.keys);
  fs::create_directories(dir);
  WriteFile(dir / "params.bin", she::SerializeParams(ctx->params()));
  WriteFile(dir / "secret.key", she::Serialize(*ctx, keys.secret));
  WriteFile(dir / "public.key", she::Serialize(*ctx, keys.public_key));
  WriteFile(dir / "eval.key", she::Serialize(*ctx, keys.eval));
  std::cout << "keys for n=" << n << " q=" << ctx->q().value()
            << " t=" << ctx->t().value() << " written to " << dir.string()
            << "\n";
  return kExitOk;
}

int BenchOpsCmd(const Options& o) {
  bench::BenchOptions b;
  b.degrees = DegreesFor(o);
  b.trials = o.trials;
  b.seed = o.seed;
  const auto records = bench::BenchOps(b);
  Emit(o.out, [&](std::ostream& s) { bench::WriteBenchCsv(s, records); });
  if (!o.check) return kExitOk;
  const auto problems = bench::CheckBenchShape(records);
  for (const auto& p : problems) std::cerr << "check failed: " << p << "\n";
  return problems.empty() ? kExitOk : kExitVerify;
}

int RunServer(const Options& o) {
  wire::ServerConfig config;
  config.host = o.host;
  config.port = o.port.value_or(7700);
  config.scheduler.pool_size = o.pool;
  config.handle_signals = true;
  wire::BootstrapServer server(config);
  server.Start();
  std::cout << "listening on " << o.host << ":" << server.port() << " with "
            << o.pool << " workers" << std::endl;
  server.Wait();
  server.Stop();
  return kExitOk;
}

// Either connects to --host/--port or brings up a local server for the run.
struct Endpoint {
  std::unique_ptr<wire::BootstrapServer> local;
  std::string host;
  uint16_t port = 0;
};

Endpoint OpenEndpoint(const Options& o) {
  Endpoint e;
  if (o.port) {
    e.host = o.host;
    e.port = *o.port;
    return e;
  }
  wire::ServerConfig config;
  config.scheduler.pool_size = o.pool;
  e.local = std::make_unique<wire::BootstrapServer>(config);
  e.local->Start();
  e.host = "127.0.0.1";
  e.port = e.local->port();
  return e;
}

void PrintVector(std::ostream& out, const std::vector<uint64_t>& v) {
  std::size_t last = v.size();
  while (last > 1 && v[last - 1] == 0) --last;
  for (std::size_t i = 0; i < last; ++i) out << (i ? "," : "") << v[i];
}

int RunClient(const Options& o) {
  if (o.program.empty()) throw UsageError("run-client needs --program <file>");
  const client::Program program = client::LoadProgram(o.program);
  LoadedKeys k;
  if (!o.keys.empty()) {
    k = LoadKeys(o.keys);
  } else {
    k.ctx = she::Context::Create(she::PresetForDegree(o.n ? o.n : 1024));
    auto key_rng = RandomStream::Seeded(o.seed);
    k.keys = std::make_unique<she::KeySet>(she::GenerateKeys(*k.ctx, key_rng));
  }
  Endpoint endpoint = OpenEndpoint(o);
  auto rng = RandomStream::Seeded(o.seed + 1);
  auto link = client::OpenRemoteLink(
      endpoint.host, endpoint.port,
      client::ClientIdFromLabel("cli-" + std::to_string(o.seed)), k.ctx,
      *k.keys, rng);
  client::RuntimeOptions ro;
  ro.seed = o.seed;
  client::HomomorphicRuntime runtime(k.ctx, *k.keys, ro, link.get());
  const client::RunResult result = client::RunProgram(program, runtime);
  if (endpoint.local) endpoint.local->Stop();

  const auto expected =
      client::ShadowExecute(program, k.ctx->n(), k.ctx->t().value());
  for (std::size_t i = 0; i < result.outputs.size(); ++i) {
    std::cout << "output " << i << ": ";
    PrintVector(std::cout, result.outputs[i]);
    std::cout << "\n";
  }
  std::cerr << "instructions=" << result.report.instr_count
            << " multiplies=" << result.report.mul_count
            << " bootstraps=" << result.report.bootstrap_count << "\n";
  if (!o.out.empty()) {
    Emit(o.out, [&](std::ostream& s) { client::WriteRunReportCsv(s, result.report); });
  }
  if (result.outputs != expected) {
    std::cerr << "check failed: outputs differ from plaintext evaluation\n";
    return kExitVerify;
  }
  return kExitOk;
}

int LrDemo(const Options& o) {
  const client::Dataset data = client::SynthesizeDataset(500, 5, o.seed);
  client::LrConfig config;
  config.iterations = static_cast<int>(o.iters ? o.iters : 3);
  const client::LrResult plain = client::TrainLrPlain(data, config);
  const std::vector<double> reference = client::TrainLrFloat(data, config);

  Endpoint endpoint = OpenEndpoint(o);
  client::EncryptedLrOptions eo;
  eo.n = o.n ? o.n : 2048;
  eo.host = endpoint.host;
  eo.port = endpoint.port;
  eo.seed = o.seed;
  const client::EncryptedLrReport report =
      client::TrainLrEncrypted(data, config, eo);
  if (endpoint.local) endpoint.local->Stop();

  const double deviation = client::MaxDeviation(report.result.weights, plain.weights);
  const double tolerance = 2.0 / static_cast<double>(report.result.scale);
  std::cout << std::setprecision(10);
  for (std::size_t j = 0; j < plain.weights.size(); ++j) {
    std::cout << "w" << j << " encrypted=" << report.result.weights[j]
              << " plain=" << plain.weights[j] << " float=" << reference[j]
              << "\n";
  }
  std::cout << "lanes=" << report.lanes << " bits=" << report.required_bits
            << " multiplies=" << report.stats.muls
            << " bootstraps=" << report.stats.bootstraps
            << " seconds=" << static_cast<double>(report.wall_ns) / 1e9
            << " max_deviation=" << deviation << "\n";
  if (!o.out.empty()) {
    Emit(o.out, [&](std::ostream& s) {
      s << std::setprecision(17) << "j,encrypted,plain,float\n";
      for (std::size_t j = 0; j < plain.weights.size(); ++j) {
        s << j << ',' << report.result.weights[j] << ',' << plain.weights[j]
          << ',' << reference[j] << '\n';
      }
    });
  }
  if (deviation > tolerance || report.stats.bootstraps == 0) {
    std::cerr << "check failed: deviation " << deviation << " or no bootstraps\n";
    return kExitVerify;
  }
  return kExitOk;
}

int SchedEval(const Options& o) {
  bench::SchedEvalOptions so;
  so.clients = o.clients;
  so.pool = o.pool;
  so.iters = o.iters ? o.iters : 5;
  so.n = o.n ? o.n : 1024;
  so.seed = o.seed;
  if (o.sweep) {
    const auto points = bench::SweepSchedEval(
        so, {4, 8, 12, 16, 20, 24, 28}, {1, 4});
    Emit(o.out, [&](std::ostream& s) { bench::WriteSweepCsv(s, points); });
    return kExitOk;
  }
  const bench::SchedEvalResult r = bench::RunSchedEval(so);
  Emit(o.out, [&](std::ostream& s) { sched::WriteTaskCsv(s, r.records); });
  std::cerr << "tasks=" << r.stats.aggregate.count << " mean_wait_ms="
            << r.stats.aggregate.mean_ns / 1e6
            << " p95_wait_ms=" << r.stats.aggregate.p95_ns / 1e6 << "\n";
  return r.stats.aggregate.mean_ns > 0 ? kExitOk : kExitVerify;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"teefhe: homomorphic evaluation with enclave-assisted bootstrapping"};
  app.require_subcommand(1);
  Options o;

  auto add_seed = [&](CLI::App* cmd) {
    cmd->add_option("--seed", o.seed, "Deterministic seed (TEEFHE_SEED overrides)");
  };
  auto add_n = [&](CLI::App* cmd) {
    cmd->add_option("--n", o.n, "Ring degree");
  };
  auto add_remote = [&](CLI::App* cmd) {
    cmd->add_option("--host", o.host, "Server host");
    cmd->add_option("--port", o.port,
                    "Server port; without it a local server is started");
    cmd->add_option("--pool", o.pool, "Workers for a local server");
  };

  auto* keygen = app.add_subcommand("keygen", "Generate and store a key set");
  add_n(keygen);
  add_seed(keygen);
  keygen->add_option("--keys", o.keys, "Output directory")->required();

  auto* bench_ops = app.add_subcommand("bench-ops", "Time the basic operations");
  add_n(bench_ops);
  bench_ops->add_option("--preset", o.preset, "Degree set: desk, small or table");
  bench_ops->add_option("--trials", o.trials, "Trials per operation (>= 30)");
  bench_ops->add_option("--out", o.out, "CSV path (default stdout)");
  bench_ops->add_flag("--check", o.check, "Exit 3 if the expected orderings fail");
  add_seed(bench_ops);

  auto* server = app.add_subcommand("run-server", "Serve bootstrapping requests");
  server->add_option("--host", o.host, "Bind address");
  server->add_option("--port", o.port, "Port (default 7700)");
  server->add_option("--pool", o.pool, "Worker threads");

  auto* run_client = app.add_subcommand("run-client", "Execute a program file");
  run_client->add_option("--program", o.program, "Program file")->required();
  run_client->add_option("--keys", o.keys, "Key directory from keygen");
  run_client->add_option("--out", o.out, "Run report CSV");
  add_n(run_client);
  add_remote(run_client);
  add_seed(run_client);

  auto* lr = app.add_subcommand("lr-demo", "Encrypted logistic-regression training");
  add_n(lr);
  lr->add_option("--iters", o.iters, "Gradient iterations (default 3)");
  lr->add_option("--out", o.out, "Weights CSV");
  add_remote(lr);
  add_seed(lr);

  auto* sched_eval = app.add_subcommand("sched-eval", "Measure scheduler waiting time");
  add_n(sched_eval);
  sched_eval->add_option("--clients", o.clients, "Concurrent clients");
  sched_eval->add_option("--pool", o.pool, "Worker threads");
  sched_eval->add_option("--iters", o.iters, "Bootstraps per client (default 5)");
  sched_eval->add_option("--out", o.out, "CSV path (default stdout)");
  sched_eval->add_flag("--sweep", o.sweep, "Sweep 4..28 clients at pool 1 and 4");
  add_seed(sched_eval);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (const char* env = std::getenv("TEEFHE_SEED")) {
    try {
      std::size_t used = 0;
      o.seed = std::stoull(env, &used);
      if (used != std::string(env).size()) throw std::invalid_argument(env);
    } catch (const std::exception&) {
      std::cerr << "TEEFHE_SEED must be an unsigned integer\n";
      return kExitUsage;
    }
  }

  try {
    if (*keygen) return Keygen(o);
    if (*bench_ops) return BenchOpsCmd(o);
    if (*server) return RunServer(o);
    if (*run_client) return RunClient(o);
    if (*lr) return LrDemo(o);
    if (*sched_eval) return SchedEval(o);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParameterError& e) {
    std::cerr << "invalid parameter: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
