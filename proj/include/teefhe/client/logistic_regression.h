#ifndef TEEFHE_CLIENT_LOGISTIC_REGRESSION_H_
#define TEEFHE_CLIENT_LOGISTIC_REGRESSION_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "teefhe/client/rns.h"
#include "teefhe/client/sigmoid.h"

namespace teefhe::client {

// Rows of binary covariates with binary labels.
struct Dataset {
  std::size_t d = 0;
  std::vector<std::vector<uint8_t>> x;
  std::vector<uint8_t> y;
};

// Covariates are fair coin flips; labels are drawn from a planted logistic
// model with intercept -0.5 and alternating-sign slopes.
Dataset SynthesizeDataset(std::size_t rows = 500, std::size_t d = 5,
                          uint64_t seed = 7);

struct LrConfig {
  int iterations = 3;
  double learning_rate = 1.0;
  int coeff_scale_bits = 10;  // sigmoid coefficient scale s_c
  int step_scale_bits = 10;   // learning-rate scale s_e
  // Integer starting weights, intercept first (d + 1 entries). Empty means
  // all zero.
  std::vector<int64_t> initial_weights;
};

// Rows sharing a covariate vector, aggregated. The covariate vectors and
// counts are public; label sums are private to the data owner.
struct RowGroup {
  std::vector<uint8_t> x;  // intercept first
  uint64_t count = 0;
  uint64_t label_sum = 0;
};

// Everything both trainers share: the quantized sigmoid, the quantized step
// H = round(eta * s_e / N) and the row groups.
struct LrModel {
  std::size_t d = 0;
  std::size_t rows = 0;
  QuantizedSigmoid sigmoid{};
  BigInt step_scale = 0;
  BigInt step = 0;
  std::vector<RowGroup> groups;
};

LrModel BuildLrModel(const Dataset& data, const LrConfig& config);

// Weights as integer numerators over a common public scale:
// w_j = numerators[j] / scale.
struct LrResult {
  std::vector<BigInt> numerators;
  BigInt scale = 1;
  std::vector<double> weights;
};

// Balanced pairwise sum of a non-empty list.
template <class Backend>
typename Backend::Value TreeSum(Backend& b,
                                std::vector<typename Backend::Value> terms) {
  while (terms.size() > 1) {
    std::vector<typename Backend::Value> next;
    for (std::size_t i = 0; i + 1 < terms.size(); i += 2) {
      next.push_back(b.Add(terms[i], terms[i + 1]));
    }
    if (terms.size() % 2) next.push_back(terms.back());
    terms = std::move(next);
  }
  return terms.front();
}

// Batch gradient descent w <- w + (H / s_e) X^T (y - sigma~(X w)) in exact
// integers. With W_k holding w * Sigma_k:
//   z_g      = sum_j x_gj W_j                        (scale Sigma)
//   S_g      = C0 Sigma^3 + C1 Sigma^2 z + C3 z^3    (scale s_c Sigma^3)
//   R_g      = s_c Sigma^3 Y_g - N_g S_g
//   W_j'     = s_e s_c Sigma^2 W_j + H sum_g x_gj R_g
//   Sigma'   = s_e s_c Sigma^3
// Returns the final numerators; `sigma` receives the final scale.
template <class Backend>
std::vector<typename Backend::Value> RunLrRecurrence(
    Backend& b, const LrModel& m, int iterations,
    std::vector<typename Backend::Value> w,
    const std::vector<typename Backend::Value>& label_sums, BigInt& sigma) {
  using Value = typename Backend::Value;
  sigma = 1;
  const BigInt sc = m.sigmoid.scale;
  for (int k = 0; k < iterations; ++k) {
    const BigInt sigma2 = sigma * sigma;
    const BigInt sigma3 = sigma2 * sigma;
    std::vector<Value> residual;
    for (std::size_t g = 0; g < m.groups.size(); ++g) {
      std::vector<Value> terms;
      for (std::size_t j = 0; j <= m.d; ++j) {
        if (m.groups[g].x[j]) terms.push_back(w[j]);
      }
      const Value z = TreeSum(b, terms);
      const Value s = EvalSigmoidPoly3(b, z, sigma, m.sigmoid);
      residual.push_back(
          b.Add(b.MulPlain(label_sums[g], sc * sigma3),
                b.MulPlain(s, -BigInt(m.groups[g].count))));
    }
    for (std::size_t j = 0; j <= m.d; ++j) {
      Value next = b.MulPlain(w[j], m.step_scale * sc * sigma2);
      std::vector<Value> terms;
      for (std::size_t g = 0; g < m.groups.size(); ++g) {
        if (m.groups[g].x[j]) terms.push_back(residual[g]);
      }
      if (!terms.empty() && m.step != 0) {
        next = b.Add(next, b.MulPlain(TreeSum(b, terms), m.step));
      }
      w[j] = next;
    }
    sigma = m.step_scale * sc * sigma3;
  }
  return w;
}

// Reference trainer on exact integers.
LrResult TrainLrPlain(const Dataset& data, const LrConfig& config);

// Same recurrence in double precision with the unquantized polynomial; a
// sanity reference, not an oracle.
std::vector<double> TrainLrFloat(const Dataset& data, const LrConfig& config);

// Bits needed so that every intermediate value of the recurrence fits,
// computed from public shape information only (labels bounded by counts).
int LrRequiredBits(const Dataset& data, const LrConfig& config);

struct EncryptedLrOptions {
  std::size_t n = 2048;
  std::optional<std::string> host;
  uint16_t port = 0;
  uint64_t seed = 1;
  bool force_bootstrap_after_multiply = false;
};

struct EncryptedLrReport {
  LrResult result;
  std::size_t lanes = 0;
  int required_bits = 0;
  RnsStats stats;
  int64_t wall_ns = 0;
};

// Encrypts the starting weights and the per-group label sums, runs the
// recurrence on RNS lanes and decrypts the weights.
EncryptedLrReport TrainLrEncrypted(const Dataset& data, const LrConfig& config,
                                   const EncryptedLrOptions& options);

// max_j |a_j - b_j|.
double MaxDeviation(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace teefhe::client

#endif  // TEEFHE_CLIENT_LOGISTIC_REGRESSION_H_
