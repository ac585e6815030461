#include "teefhe/bench/bench_ops.h"

#include <algorithm>
#include <bit>
#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <sstream>

#include "teefhe/enclave/channel.h"
#include "teefhe/enclave/enclave.h"
#include "teefhe/errors.h"
#include "teefhe/she/decryptor.h"
#include "teefhe/she/encryptor.h"
#include "teefhe/she/evaluator.h"
#include "teefhe/she/keys.h"
#include "teefhe/she/params.h"
#include "teefhe/she/serialization.h"

namespace teefhe::bench {

namespace {

using Clock = std::chrono::steady_clock;

// Per-operation average over one trial: the operation is repeated until
// min_trial_ns has elapsed.
double TimeTrial(const std::function<void()>& fn, int64_t min_trial_ns) {
  int64_t reps = 0;
  int64_t elapsed = 0;
  const auto start = Clock::now();
  do {
    fn();
    ++reps;
    elapsed = std::chrono::duration_cast<std::chrono::nanoseconds>(
                  Clock::now() - start)
                  .count();
  } while (elapsed < min_trial_ns);
  return static_cast<double>(elapsed) / static_cast<double>(reps);
}

BenchRecord Summarize(const std::string& op, std::size_t n, int q_bits,
                      std::vector<double> samples) {
  std::sort(samples.begin(), samples.end());
  BenchRecord r;
  r.op = op;
  r.n = n;
  r.q_bits = q_bits;
  r.trials = static_cast<int>(samples.size());
  r.mean_ns = std::accumulate(samples.begin(), samples.end(), 0.0) /
              static_cast<double>(samples.size());
  const std::size_t k = samples.size();
  r.median_ns = k % 2 ? samples[k / 2] : (samples[k / 2 - 1] + samples[k / 2]) / 2;
  r.p95_ns = samples[std::min(k - 1, (k * 95 + 99) / 100 - 1)];
  return r;
}

// Everything one ring degree needs, built before any timing starts.
struct DegreeState {
  she::ContextPtr ctx;
  std::unique_ptr<she::KeySet> keys;
  std::unique_ptr<she::Encryptor> enc;
  std::unique_ptr<she::Decryptor> dec;
  std::unique_ptr<she::Evaluator> eval;
  std::unique_ptr<she::Plaintext> pt;
  std::vector<she::Ciphertext> cts;  // a, b, a*b
  enclave::ClientId id{};
  she::Bytes wire_ct;
  int q_bits = 0;
};

}  // namespace

std::vector<BenchRecord> BenchOps(const BenchOptions& o) {
  if (o.trials < 30) throw ParameterError("benchmarks need at least 30 trials");
  enclave::Enclave enclave;
  enclave::EnclaveClient host(enclave);
  auto rng = RandomStream::Seeded(o.seed);

  std::vector<DegreeState> states;
  for (std::size_t n : o.degrees) {
    DegreeState st;
    st.ctx = she::Context::Create(she::PresetForDegree(n));
    st.keys = std::make_unique<she::KeySet>(she::GenerateKeys(*st.ctx, rng));
    st.enc = std::make_unique<she::Encryptor>(st.ctx, st.keys->public_key);
    st.dec = std::make_unique<she::Decryptor>(st.ctx, st.keys->secret);
    st.eval = std::make_unique<she::Evaluator>(st.ctx);
    st.q_bits = std::bit_width(st.ctx->q().value());
    std::vector<uint64_t> values(n);
    for (auto& v : values) v = rng.UniformBelow(st.ctx->t().value());
    st.pt = std::make_unique<she::Plaintext>(she::Plaintext::FromValues(*st.ctx, values));
    st.cts.push_back(st.enc->Encrypt(*st.pt, rng));
    st.cts.push_back(st.enc->Encrypt(*st.pt, rng));
    st.cts.push_back(st.eval->Multiply(st.cts[0], st.cts[1]));

    st.id[0] = static_cast<uint8_t>(std::countr_zero(n));
    channel::ClientHandshake hs(st.id, rng);
    const channel::Key key = hs.Finish(host.BeginSession(st.id, hs.Hello()),
                                       enclave::Enclave::Measurement());
    host.ConfigurePara(st.id, she::SerializeParams(st.ctx->params()));
    host.SetKey(st.id, enclave::SealKeys(key, 0, she::Serialize(*st.ctx, st.keys->secret),
                                         she::Serialize(*st.ctx, st.keys->public_key)));
    st.wire_ct = she::Serialize(*st.ctx, st.cts[0]);
    states.push_back(std::move(st));
  }

  // Results go through a sink so the work cannot be optimized away.
  volatile uint64_t sink = 0;
  auto op_fn = [&](std::size_t op, DegreeState& st) -> std::function<void()> {
    switch (op) {
      case 0: return [&] { sink = sink + st.enc->Encrypt(*st.pt, rng).parts[0][0]; };
      case 1: return [&] { sink = sink + st.dec->Decrypt(st.cts[0]).m[0]; };
      case 2: return [&] { sink = sink + st.eval->Add(st.cts[0], st.cts[1]).parts[0][0]; };
      case 3:
        return [&] { sink = sink + st.eval->Multiply(st.cts[0], st.cts[1]).parts[0][0]; };
      case 4:
        return [&] {
          sink = sink + st.eval->Relinearize(st.cts[2], st.keys->eval).parts[0][0];
        };
      default:
        return [&] { sink = sink + host.DecreaseNoise(st.id, st.wire_ct).size(); };
    }
  };

  // Trials are interleaved across all (operation, degree) cells so that a
  // transient slowdown of the machine is spread over every cell instead of
  // landing on whichever one happened to be running.
  const std::size_t ops = kBenchOps.size();
  std::vector<std::vector<double>> samples(states.size() * ops);
  std::vector<std::function<void()>> fns;
  for (auto& st : states) {
    for (std::size_t op = 0; op < ops; ++op) fns.push_back(op_fn(op, st));
  }
  for (auto& fn : fns) fn();  // warm caches and lazily built tables
  for (int trial = 0; trial < o.trials; ++trial) {
    for (std::size_t cell = 0; cell < fns.size(); ++cell) {
      samples[cell].push_back(TimeTrial(fns[cell], o.min_trial_ns));
    }
  }

  std::vector<BenchRecord> out;
  for (std::size_t d = 0; d < states.size(); ++d) {
    for (std::size_t op = 0; op < ops; ++op) {
      out.push_back(Summarize(kBenchOps[op], o.degrees[d], states[d].q_bits,
                              std::move(samples[d * ops + op])));
    }
  }
  return out;
}

void WriteBenchCsv(std::ostream& out, const std::vector<BenchRecord>& records) {
  out << "op,n,q_bits,mean_ns,median_ns,p95_ns,trials\n";
  for (const BenchRecord& r : records) {
    out << r.op << ',' << r.n << ',' << r.q_bits << ','
        << static_cast<int64_t>(r.mean_ns) << ','
        << static_cast<int64_t>(r.median_ns) << ','
        << static_cast<int64_t>(r.p95_ns) << ',' << r.trials << '\n';
  }
}

std::vector<std::string> CheckBenchShape(const std::vector<BenchRecord>& records) {
  std::map<std::pair<std::string, std::size_t>, double> mean;
  std::vector<std::size_t> degrees;
  for (const BenchRecord& r : records) {
    mean[{r.op, r.n}] = r.mean_ns;
    if (std::find(degrees.begin(), degrees.end(), r.n) == degrees.end()) {
      degrees.push_back(r.n);
    }
  }
  std::sort(degrees.begin(), degrees.end());
  std::vector<std::string> problems;
  auto get = [&](const std::string& op, std::size_t n) {
    auto it = mean.find({op, n});
    if (it == mean.end()) {
      problems.push_back("missing " + op + " at n=" + std::to_string(n));
      return 0.0;
    }
    return it->second;
  };
  for (const std::string& op : kBenchOps) {
    for (std::size_t i = 1; i < degrees.size(); ++i) {
      if (!(get(op, degrees[i - 1]) < get(op, degrees[i]))) {
        problems.push_back(op + " does not grow from n=" +
                           std::to_string(degrees[i - 1]) + " to n=" +
                           std::to_string(degrees[i]));
      }
    }
  }
  for (std::size_t n : degrees) {
    const std::string at = " at n=" + std::to_string(n);
    if (!(get("addition", n) < get("decryption", n))) {
      problems.push_back("addition not faster than decryption" + at);
    }
    if (!(get("decryption", n) < get("multiplication", n))) {
      problems.push_back("decryption not faster than multiplication" + at);
    }
    const double base = get("decryption", n) + get("encryption", n);
    const double recrypt = get("recrypt-bootstrap", n);
    if (!(recrypt <= 4 * base && base <= 4 * recrypt)) {
      problems.push_back("recrypt-bootstrap not within 4x of decrypt+encrypt" + at);
    }
  }
  return problems;
}

}  // namespace teefhe::bench
