#include "teefhe/client/logistic_regression.h"

#include <chrono>
#include <cmath>
#include <map>
#include <random>

#include "teefhe/errors.h"

namespace teefhe::client {

namespace {

std::vector<BigInt> InitialWeights(const LrConfig& config, std::size_t d) {
  if (config.initial_weights.empty()) return std::vector<BigInt>(d + 1, 0);
  if (config.initial_weights.size() != d + 1) {
    throw ParameterError("initial weights need d + 1 entries");
  }
  return {config.initial_weights.begin(), config.initial_weights.end()};
}

std::vector<double> ToDoubles(const std::vector<BigInt>& num,
                              const BigInt& scale) {
  std::vector<double> out;
  const double s = scale.convert_to<double>();
  for (const BigInt& v : num) out.push_back(v.convert_to<double>() / s);
  return out;
}

}  // namespace

Dataset SynthesizeDataset(std::size_t rows, std::size_t d, uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::vector<double> planted{-0.5};
  for (std::size_t j = 0; j < d; ++j) {
    planted.push_back((j % 2 ? -1.0 : 1.0) * (0.5 + 0.25 * static_cast<double>(j)));
  }
  Dataset data;
  data.d = d;
  std::bernoulli_distribution coin(0.5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t i = 0; i < rows; ++i) {
    std::vector<uint8_t> x(d);
    double z = planted[0];
    for (std::size_t j = 0; j < d; ++j) {
      x[j] = coin(gen) ? 1 : 0;
      z += planted[j + 1] * x[j];
    }
    data.y.push_back(unit(gen) < Logistic(z) ? 1 : 0);
    data.x.push_back(std::move(x));
  }
  return data;
}

LrModel BuildLrModel(const Dataset& data, const LrConfig& config) {
  if (data.x.empty() || data.x.size() != data.y.size()) {
    throw ParameterError("dataset must have matching, non-empty rows and labels");
  }
  if (config.iterations < 0) throw ParameterError("iterations must be >= 0");
  if (config.learning_rate < 0) throw ParameterError("learning rate must be >= 0");
  LrModel m;
  m.d = data.d;
  m.rows = data.x.size();
  const uint64_t sc = uint64_t{1} << config.coeff_scale_bits;
  m.sigmoid = Quantize(FitSigmoidPoly3(), sc);
  m.step_scale = BigInt(1) << config.step_scale_bits;
  m.step = static_cast<int64_t>(std::llround(
      config.learning_rate * std::ldexp(1.0, config.step_scale_bits) /
      static_cast<double>(m.rows)));
  std::map<std::vector<uint8_t>, RowGroup> groups;
  for (std::size_t i = 0; i < data.x.size(); ++i) {
    if (data.x[i].size() != data.d) throw ParameterError("ragged dataset row");
    std::vector<uint8_t> key{1};
    key.insert(key.end(), data.x[i].begin(), data.x[i].end());
    RowGroup& g = groups[key];
    g.x = key;
    ++g.count;
    g.label_sum += data.y[i];
  }
  for (auto& [key, g] : groups) m.groups.push_back(g);
  return m;
}

LrResult TrainLrPlain(const Dataset& data, const LrConfig& config) {
  const LrModel m = BuildLrModel(data, config);
  PlainBackend b;
  std::vector<BigInt> labels;
  for (const RowGroup& g : m.groups) labels.push_back(g.label_sum);
  LrResult r;
  r.numerators = RunLrRecurrence(b, m, config.iterations,
                                 InitialWeights(config, m.d), labels, r.scale);
  r.weights = ToDoubles(r.numerators, r.scale);
  return r;
}

std::vector<double> TrainLrFloat(const Dataset& data, const LrConfig& config) {
  const LrModel m = BuildLrModel(data, config);
  const SigmoidPoly3 poly = FitSigmoidPoly3();
  std::vector<double> w;
  for (const BigInt& v : InitialWeights(config, m.d)) w.push_back(v.convert_to<double>());
  const double rate = config.learning_rate / static_cast<double>(m.rows);
  for (int k = 0; k < config.iterations; ++k) {
    std::vector<double> grad(m.d + 1, 0.0);
    for (const RowGroup& g : m.groups) {
      double z = 0;
      for (std::size_t j = 0; j <= m.d; ++j) z += g.x[j] * w[j];
      const double r = static_cast<double>(g.label_sum) -
                       static_cast<double>(g.count) * poly(z);
      for (std::size_t j = 0; j <= m.d; ++j) grad[j] += g.x[j] * r;
    }
    for (std::size_t j = 0; j <= m.d; ++j) w[j] += rate * grad[j];
  }
  return w;
}

int LrRequiredBits(const Dataset& data, const LrConfig& config) {
  const LrModel m = BuildLrModel(data, config);
  BoundBackend b;
  std::vector<BigInt> labels, weights;
  for (const RowGroup& g : m.groups) labels.push_back(b.Input(g.count));
  for (const BigInt& v : InitialWeights(config, m.d)) weights.push_back(b.Input(v));
  BigInt sigma;
  RunLrRecurrence(b, m, config.iterations, weights, labels, sigma);
  // Room for the sign plus one spare bit.
  return static_cast<int>(msb(b.max() + 1)) + 3;
}

EncryptedLrReport TrainLrEncrypted(const Dataset& data, const LrConfig& config,
                                   const EncryptedLrOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const LrModel m = BuildLrModel(data, config);
  EncryptedLrReport report;
  report.required_bits = LrRequiredBits(data, config);

  RnsOptions ro;
  ro.n = options.n;
  ro.moduli = RnsBackend::ChooseModuli(report.required_bits);
  ro.host = options.host;
  ro.port = options.port;
  ro.seed = options.seed;
  ro.force_bootstrap_after_multiply = options.force_bootstrap_after_multiply;
  ro.label = "lr/" + std::to_string(options.seed);
  RnsBackend b(ro);
  report.lanes = b.lanes();

  // Data owner side: encrypt starting weights and per-group label sums.
  std::vector<RnsBackend::Value> weights, labels;
  for (const BigInt& v : InitialWeights(config, m.d)) weights.push_back(b.Input(v));
  for (const RowGroup& g : m.groups) labels.push_back(b.Input(g.label_sum));

  BigInt sigma;
  const auto out =
      RunLrRecurrence(b, m, config.iterations, weights, labels, sigma);
  report.result.scale = sigma;
  for (const auto& v : out) report.result.numerators.push_back(b.Reveal(v));
  report.result.weights = ToDoubles(report.result.numerators, sigma);
  report.stats = b.stats();
  report.wall_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  return report;
}

double MaxDeviation(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw ParameterError("weight vectors differ in length");
  double worst = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::fabs(a[i] - b[i]));
  }
  return worst;
}

}  // namespace teefhe::client
