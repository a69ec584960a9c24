#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "npci/ciprocess.hpp"
#include "npci/rng.hpp"
#include "npci/smoothing.hpp"
#include "npci/teststats.hpp"

namespace npci {

// Two-point multiplier distribution with mean 0 and variance 1:
//   P(v = (1 - sqrt5)/2) = (1 + sqrt5)/(2 sqrt5)
//   P(v = (1 + sqrt5)/2) = (sqrt5 - 1)/(2 sqrt5)
struct Mammen {
  static const double kLow;
  static const double kHigh;
  static const double kProbLow;
  static const double kProbHigh;
};

Eigen::VectorXd mammen_weights(Index n, RngStream& stream);

enum class BootstrapScheme { kMultiplier, kBlockMultiplier };

struct BootstrapConfig {
  BootstrapScheme scheme = BootstrapScheme::kMultiplier;
  int replications = 200;
  double block_a = 2.0;
  std::uint64_t seed = 0;
};

// L = floor(a n^{1/4}).
Index block_length(double a, Index n);

// Per-observation weights of one block-multiplier draw: with
// zeta_1..zeta_{n-L+1} i.i.d. N(0, 1/L), v_s sums zeta_t over the blocks
// {t, ..., t+L-1} that contain s.
Eigen::VectorXd block_weights(Index n, Index block_len, RngStream& stream);

// The deterministic half of block_weights: v_s = sum of zeta_t over the
// n - L + 1 blocks covering s, where L = n - zeta.size() + 1.
Eigen::VectorXd block_sum(const Eigen::VectorXd& zeta, Index n);

// Statistics of S*(gamma_j) = n^{-1/2} sum_t e_t(gamma_j) v_t.
StatisticValue multiplier_replicate(const ResidualMatrix& e,
                                    const Eigen::VectorXd& v);

StatisticValue block_multiplier_replicate(const ResidualMatrix& e,
                                          Index block_len, RngStream& stream);

// B^{-1} #{b : draws_b >= observed}.
double bootstrap_p_value(std::span<const double> draws, double observed);

// Empirical quantile: the ceil(q B)-th smallest draw.
double empirical_quantile(std::vector<double> draws, double q);

inline constexpr std::array<double, 3> kReportedQuantiles = {0.90, 0.95, 0.99};

struct TestConfig {
  KernelSpec kernel;  // dim is taken from the sample
  BandwidthRule bandwidth = BandwidthRule::fixed(1.0);
  WeightFamily weight;
  BootstrapConfig bootstrap;
  double alpha = 0.05;
};

struct TestResult {
  StatisticValue statistic;
  double p_cvm = 1.0;
  double p_ks = 1.0;
  std::array<double, 3> cvm_quantiles{};
  std::array<double, 3> ks_quantiles{};
  Index n = 0;
  double bandwidth = 0.0;
  Index block_length = 0;  // 0 for the plain multiplier scheme
  bool reject_cvm = false;  // p < alpha
  bool reject_ks = false;
  TestConfig config;
};

// Observed statistics at the sample points, then B multiplier (or block
// multiplier) draws over one precomputed residual matrix. Replication b draws
// from the stream derived from (seed, b), so the result does not depend on
// the number of worker threads.
TestResult bootstrap_test(const TimeSeriesSample& sample,
                          const TestConfig& config);

// The B bootstrap statistics themselves, as consumed by bootstrap_test.
struct BootstrapDraws {
  std::vector<double> cvm;
  std::vector<double> ks;
};

BootstrapDraws bootstrap_draws(const ResidualMatrix& e,
                               const BootstrapConfig& config);

}  // namespace npci
