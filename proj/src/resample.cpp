#include "npci/resample.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "npci/error.hpp"
#include "npci/parallel.hpp"

namespace npci {
namespace {

const double kSqrt5 = std::sqrt(5.0);

StatisticValue column_statistics(const Eigen::MatrixXd& re,
                                 const Eigen::MatrixXd& im, Index b) {
  const Index m = re.rows();
  double sum_sq = 0.0;
  double max_sq = 0.0;
  for (Index j = 0; j < m; ++j) {
    double sq = re(j, b) * re(j, b);
    if (im.size() != 0) sq += im(j, b) * im(j, b);
    sum_sq += sq;
    max_sq = std::max(max_sq, sq);
  }
  return {sum_sq / static_cast<double>(m), std::sqrt(max_sq)};
}

void validate(const BootstrapConfig& config, Index n) {
  if (config.replications < 1) {
    throw Error(ErrorKind::kInvalidConfig, "bootstrap replications must be >= 1");
  }
  if (config.scheme == BootstrapScheme::kBlockMultiplier) {
    const Index len = block_length(config.block_a, n);
    if (len < 1 || len > n) {
      throw Error(ErrorKind::kInvalidConfig,
                  "block length " + std::to_string(len) +
                      " outside [1, n] for n = " + std::to_string(n));
    }
  }
}

}  // namespace

const double Mammen::kLow = (1.0 - kSqrt5) / 2.0;
const double Mammen::kHigh = (1.0 + kSqrt5) / 2.0;
const double Mammen::kProbLow = (1.0 + kSqrt5) / (2.0 * kSqrt5);
const double Mammen::kProbHigh = (-1.0 + kSqrt5) / (2.0 * kSqrt5);

Eigen::VectorXd mammen_weights(Index n, RngStream& stream) {
  if (n < 1) throw Error(ErrorKind::kInvalidArgument, "mammen_weights: n < 1");
  std::bernoulli_distribution high(Mammen::kProbHigh);
  Eigen::VectorXd v(n);
  for (Index t = 0; t < n; ++t) v[t] = high(stream) ? Mammen::kHigh : Mammen::kLow;
  return v;
}

Index block_length(double a, Index n) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw Error(ErrorKind::kInvalidConfig, "block constant a must be positive");
  }
  return static_cast<Index>(
      std::floor(a * std::pow(static_cast<double>(n), 0.25)));
}

Eigen::VectorXd block_weights(Index n, Index block_len, RngStream& stream) {
  if (block_len < 1 || block_len > n) {
    throw Error(ErrorKind::kInvalidArgument,
                "block length " + std::to_string(block_len) +
                    " outside [1, " + std::to_string(n) + "]");
  }
  const Index blocks = n - block_len + 1;
  const double scale = 1.0 / std::sqrt(static_cast<double>(block_len));
  std::normal_distribution<double> normal;
  Eigen::VectorXd zeta(blocks);
  for (Index t = 0; t < blocks; ++t) zeta[t] = normal(stream) * scale;
  return block_sum(zeta, n);
}

Eigen::VectorXd block_sum(const Eigen::VectorXd& zeta, Index n) {
  const Index blocks = zeta.size();
  const Index block_len = n - blocks + 1;
  if (blocks < 1 || block_len < 1) {
    throw Error(ErrorKind::kInvalidArgument, "block_sum: need 1 <= zeta.size() <= n");
  }
  Eigen::VectorXd v(n);
  for (Index s = 0; s < n; ++s) {
    const Index first = std::max<Index>(0, s - block_len + 1);
    const Index last = std::min(s, blocks - 1);
    double acc = 0.0;
    for (Index t = first; t <= last; ++t) acc += zeta[t];
    v[s] = acc;
  }
  return v;
}

StatisticValue multiplier_replicate(const ResidualMatrix& e,
                                    const Eigen::VectorXd& v) {
  if (v.size() != e.num_obs()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "multiplier vector has length " + std::to_string(v.size()) +
                    ", expected " + std::to_string(e.num_obs()));
  }
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(e.num_obs()));
  Eigen::MatrixXd re = (e.re * v) * inv_sqrt_n;
  Eigen::MatrixXd im;
  if (e.is_complex()) im = (e.im * v) * inv_sqrt_n;
  return column_statistics(re, im, 0);
}

StatisticValue block_multiplier_replicate(const ResidualMatrix& e,
                                          Index block_len, RngStream& stream) {
  return multiplier_replicate(e, block_weights(e.num_obs(), block_len, stream));
}

double bootstrap_p_value(std::span<const double> draws, double observed) {
  if (draws.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "p-value of zero bootstrap draws");
  }
  const auto hits = std::count_if(draws.begin(), draws.end(),
                                  [&](double d) { return d >= observed; });
  return static_cast<double>(hits) / static_cast<double>(draws.size());
}

double empirical_quantile(std::vector<double> draws, double q) {
  if (draws.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "quantile of zero draws");
  }
  const auto b = static_cast<double>(draws.size());
  auto rank = static_cast<size_t>(std::ceil(q * b));
  rank = std::clamp<size_t>(rank, 1, draws.size());
  std::nth_element(draws.begin(), draws.begin() + static_cast<long>(rank - 1),
                   draws.end());
  return draws[rank - 1];
}

BootstrapDraws bootstrap_draws(const ResidualMatrix& e,
                               const BootstrapConfig& config) {
  const Index n = e.num_obs();
  validate(config, n);
  const int reps = config.replications;
  const bool block = config.scheme == BootstrapScheme::kBlockMultiplier;
  const Index len = block ? block_length(config.block_a, n) : 1;

  Eigen::MatrixXd weights(n, reps);
#pragma omp parallel for num_threads(::npci::num_threads()) schedule(static) if (reps * n > 65536)
  for (int b = 0; b < reps; ++b) {
    RngStream stream = make_stream(config.seed, {static_cast<std::uint64_t>(b)});
    weights.col(b) = block ? block_weights(n, len, stream)
                           : mammen_weights(n, stream);
  }

  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
  Eigen::MatrixXd re = e.re * weights;
  re *= inv_sqrt_n;
  Eigen::MatrixXd im;
  if (e.is_complex()) {
    im = e.im * weights;
    im *= inv_sqrt_n;
  }

  BootstrapDraws out;
  out.cvm.resize(static_cast<size_t>(reps));
  out.ks.resize(static_cast<size_t>(reps));
  for (int b = 0; b < reps; ++b) {
    const StatisticValue s = column_statistics(re, im, b);
    out.cvm[static_cast<size_t>(b)] = s.cvm;
    out.ks[static_cast<size_t>(b)] = s.ks;
  }
  return out;
}

TestResult bootstrap_test(const TimeSeriesSample& sample,
                          const TestConfig& config) {
  sample.validate();
  if (!(config.alpha > 0.0 && config.alpha < 1.0)) {
    throw Error(ErrorKind::kInvalidConfig, "alpha must lie in (0, 1)");
  }
  validate(config.bootstrap, sample.size());

  TestResult result;
  result.config = config;
  result.config.kernel.dim = static_cast<int>(sample.dim_w());
  result.n = sample.size();
  result.bandwidth = bandwidth(config.bandwidth, sample);
  if (config.bootstrap.scheme == BootstrapScheme::kBlockMultiplier) {
    result.block_length = block_length(config.bootstrap.block_a, sample.size());
  }

  const SampleProcess process(sample, result.bandwidth, config.weight);
  result.statistic = statistics(process.process_values());
  const BootstrapDraws draws =
      bootstrap_draws(process.residuals(), config.bootstrap);

  result.p_cvm = bootstrap_p_value(draws.cvm, result.statistic.cvm);
  result.p_ks = bootstrap_p_value(draws.ks, result.statistic.ks);
  for (size_t i = 0; i < kReportedQuantiles.size(); ++i) {
    result.cvm_quantiles[i] = empirical_quantile(draws.cvm, kReportedQuantiles[i]);
    result.ks_quantiles[i] = empirical_quantile(draws.ks, kReportedQuantiles[i]);
  }
  result.reject_cvm = result.p_cvm < config.alpha;
  result.reject_ks = result.p_ks < config.alpha;
  return result;
}

}  // namespace npci
