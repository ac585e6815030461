#ifndef TEEFHE_BENCH_BENCH_OPS_H_
#define TEEFHE_BENCH_BENCH_OPS_H_

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace teefhe::bench {

// Operation names in CSV order.
inline const std::vector<std::string> kBenchOps = {
    "encryption",      "decryption",       "addition",
    "multiplication",  "relinearization",  "recrypt-bootstrap"};

struct BenchRecord {
  std::string op;
  std::size_t n = 0;
  int q_bits = 0;
  double mean_ns = 0;
  double median_ns = 0;
  double p95_ns = 0;
  int trials = 0;
};

struct BenchOptions {
  std::vector<std::size_t> degrees{1024, 2048, 4096};
  int trials = 30;
  // Each trial repeats the operation until at least this long has passed
  // and reports the per-operation average, which keeps clock granularity
  // and scheduler jitter out of fast operations.
  int64_t min_trial_ns = 200'000;
  uint64_t seed = 1;
};

// Single-threaded. recrypt-bootstrap is the enclave DecreaseNoise call on a
// serialized ciphertext, end to end through the byte-buffer boundary.
// ParameterError when trials < 30.
std::vector<BenchRecord> BenchOps(const BenchOptions& options);

// Header `op,n,q_bits,mean_ns,median_ns,p95_ns,trials`.
void WriteBenchCsv(std::ostream& out, const std::vector<BenchRecord>& records);

// Orderings expected of any run: per-op mean strictly increasing in n,
// addition < decryption < multiplication at each n, recrypt within 4x of
// decryption + encryption. Returns one message per violation.
std::vector<std::string> CheckBenchShape(const std::vector<BenchRecord>& records);

}  // namespace teefhe::bench

#endif  // TEEFHE_BENCH_BENCH_OPS_H_
