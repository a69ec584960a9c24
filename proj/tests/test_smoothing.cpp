#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "npci/error.hpp"
#include "npci/smoothing.hpp"
#include "oracles.hpp"

namespace npci {
namespace {

constexpr double kInvSqrt2Pi = 0.398942280401432677939946;
constexpr double kInv2Pi = 0.159154943091895335768884;
constexpr double kGaussAtOne = 0.241970724519143349797830;

TimeSeriesSample column_sample(std::vector<double> w) {
  TimeSeriesSample x;
  const Index n = static_cast<Index>(w.size());
  x.w.resize(n, 1);
  x.y.resize(n, 1);
  x.z.resize(n, 1);
  for (Index t = 0; t < n; ++t) {
    x.w(t, 0) = w[static_cast<size_t>(t)];
    x.y(t, 0) = static_cast<double>(t);
    x.z(t, 0) = static_cast<double>(t);
  }
  return x;
}

TEST(KernelEval, StandardNormalAtZero) {
  const std::vector<double> u = {0.0};
  EXPECT_NEAR(kernel_eval({KernelFamily::kGaussian, 1}, u), kInvSqrt2Pi, 1e-15);
}

TEST(KernelEval, ProductInTwoDimensions) {
  const std::vector<double> u = {0.0, 0.0};
  EXPECT_NEAR(kernel_eval({KernelFamily::kGaussian, 2}, u), kInv2Pi, 1e-15);
  EXPECT_NEAR(kernel_at_zero({KernelFamily::kGaussian, 2}), kInv2Pi, 1e-15);
}

TEST(KernelEval, UnitArgument) {
  const std::vector<double> u = {1.0};
  EXPECT_NEAR(kernel_eval({KernelFamily::kGaussian, 1}, u), kGaussAtOne, 1e-15);
}

TEST(KernelEval, DimensionMismatchThrows) {
  const std::vector<double> u = {0.0, 1.0};
  try {
    kernel_eval({KernelFamily::kGaussian, 1}, u);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDimensionMismatch);
  }
}

TEST(KernelEval, FarTailFlushesToZero) {
  const std::vector<double> u = {100.0};
  EXPECT_EQ(kernel_eval({KernelFamily::kGaussian, 1}, u), 0.0);
}

TEST(Bandwidth, FixedRuleAtHundred) {
  const auto x = column_sample(std::vector<double>(100, 0.0));
  EXPECT_NEAR(bandwidth(BandwidthRule::fixed(1.0), x),
              0.268269579527972574769880, 1e-14);
  EXPECT_NEAR(bandwidth(BandwidthRule::fixed(0.5), x),
              0.134134789763986287384940, 1e-14);
}

TEST(Bandwidth, DataDrivenConstantSeriesThrows) {
  const auto x = column_sample(std::vector<double>(50, 3.0));
  try {
    bandwidth(BandwidthRule::data_driven(), x);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDegenerateBandwidth);
  }
}

TEST(Bandwidth, DataDrivenMatchesSilvermanForm) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal(2.0, 3.0);
  std::vector<double> w(80);
  for (double& v : w) v = normal(rng);
  double mean = 0.0;
  for (double v : w) mean += v;
  mean /= 80.0;
  double ss = 0.0;
  for (double v : w) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / 79.0);
  const double expected = 1.06 * sd * std::pow(80.0, -1.0 / 3.5);
  EXPECT_NEAR(bandwidth(BandwidthRule::data_driven(), column_sample(w)),
              expected, 1e-13);
}

TEST(Bandwidth, RejectsNonPositiveConstant) {
  const auto x = column_sample({0.0, 1.0, 2.0});
  EXPECT_THROW(bandwidth(BandwidthRule::fixed(0.0), x), Error);
  EXPECT_THROW(bandwidth(BandwidthRule::fixed(-1.0), x), Error);
}

TEST(KernelWeightMatrix, IdenticalRows) {
  RowMatrix w = RowMatrix::Zero(2, 1);
  const Eigen::MatrixXd m = kernel_weight_matrix(w, 1.0, {KernelFamily::kGaussian, 1});
  for (Index t = 0; t < 2; ++t) {
    for (Index s = 0; s < 2; ++s) EXPECT_NEAR(m(t, s), kInvSqrt2Pi, 1e-15);
  }
}

TEST(KernelWeightMatrix, DistantPointsUnderflow) {
  RowMatrix w(2, 1);
  w << 0.0, 100.0;
  const Eigen::MatrixXd m = kernel_weight_matrix(w, 1.0, {KernelFamily::kGaussian, 1});
  EXPECT_EQ(m(0, 1), 0.0);
  EXPECT_EQ(m(1, 0), 0.0);
}

TEST(KernelWeightMatrix, MatchesBruteForceKernel) {
  std::mt19937_64 rng(5);
  for (Index dw : {1, 2, 3}) {
    const auto x = oracle::random_sample(rng, 25, dw, 1, 1);
    const double h = 0.7;
    const Eigen::MatrixXd m =
        kernel_weight_matrix(x.w, h, {KernelFamily::kGaussian, static_cast<int>(dw)});
    for (Index t = 0; t < 25; ++t) {
      for (Index s = 0; s < 25; ++s) {
        const double ref = oracle::product_kernel(x.w, t, s, h);
        EXPECT_NEAR(m(t, s), ref, 1e-14 * std::max(1.0, ref));
      }
    }
  }
}

TEST(SmoothingProperty, KernelMatrixIsExactlySymmetricWithPeakDiagonal) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> band(0.05, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    const Index dw = 1 + trial % 3;
    const Index n = 2 + trial;
    const auto x = oracle::random_sample(rng, n, dw, 1, 1);
    const KernelSpec spec{KernelFamily::kGaussian, static_cast<int>(dw)};
    const Eigen::MatrixXd m = kernel_weight_matrix(x.w, band(rng), spec);
    for (Index t = 0; t < n; ++t) {
      EXPECT_EQ(m(t, t), kernel_at_zero(spec));
      for (Index s = 0; s < n; ++s) {
        ASSERT_EQ(m(t, s), m(s, t));
        ASSERT_GE(m(t, s), 0.0);
        ASSERT_LE(m(t, s), m(t, t));
      }
    }
  }
}

TEST(LooDensity, TwoIdenticalPoints) {
  RowMatrix w = RowMatrix::Zero(2, 1);
  const auto m = kernel_weight_matrix(w, 1.0, {KernelFamily::kGaussian, 1});
  EXPECT_NEAR(loo_density(m, 1.0, 1, 1), kInvSqrt2Pi, 1e-15);
  EXPECT_NEAR(loo_density(m, 1.0, 1, 0), kInvSqrt2Pi, 1e-15);
}

TEST(LooDensity, ThreeIdenticalPoints) {
  RowMatrix w = RowMatrix::Constant(3, 1, 4.2);
  const auto m = kernel_weight_matrix(w, 1.0, {KernelFamily::kGaussian, 1});
  for (Index t = 0; t < 3; ++t) {
    EXPECT_NEAR(loo_density(m, 1.0, 1, t), kInvSqrt2Pi, 1e-15);
  }
}

TEST(SmoothingProperty, DensityFollowsBandwidthScaling) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const Index dw = 1 + trial % 2;
    const auto x = oracle::random_sample(rng, 30, dw, 1, 1);
    const KernelSpec spec{KernelFamily::kGaussian, static_cast<int>(dw)};
    for (double h : {0.3, 0.6, 1.2}) {
      const auto m = kernel_weight_matrix(x.w, h, spec);
      for (Index t = 0; t < x.size(); ++t) {
        const double got = loo_density(m, h, static_cast<int>(dw), t);
        ASSERT_GE(got, 0.0);
        ASSERT_NEAR(got, oracle::density(x, h, t), 1e-13);
      }
    }
  }
}

TEST(SmoothingProperty, DensityExcludesOwnObservation) {
  std::mt19937_64 rng(29);
  auto x = oracle::random_sample(rng, 20, 1, 1, 1);
  const KernelSpec spec{KernelFamily::kGaussian, 1};
  const double h = 0.5;
  // Moving every other point far away leaves only the self term near W_0,
  // which must not count.
  for (Index s = 1; s < x.size(); ++s) x.w(s, 0) += 1e4;
  const auto m = kernel_weight_matrix(x.w, h, spec);
  EXPECT_EQ(loo_density(m, h, 1, 0), 0.0);
}

TEST(LooCondCdf, AllOnesAndAllZeros) {
  RowMatrix w(4, 1);
  w << 0.0, 0.3, 0.5, 1.0;
  const auto m = kernel_weight_matrix(w, 1.0, {KernelFamily::kGaussian, 1});
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(4);
  const Eigen::VectorXd zeros = Eigen::VectorXd::Zero(4);
  for (Index t = 0; t < 4; ++t) {
    EXPECT_DOUBLE_EQ(loo_cond_cdf(m, ones, t), 1.0);
    EXPECT_EQ(loo_cond_cdf(m, zeros, t), 0.0);
  }
}

TEST(LooCondCdf, SingleNeighbourAboveThreshold) {
  // Z = (0, 1), z = 0.5: at the second observation the only neighbour has
  // Z = 0 <= 0.5, at the first it has Z = 1 > 0.5.
  RowMatrix w = RowMatrix::Zero(2, 1);
  const auto m = kernel_weight_matrix(w, 1.0, {KernelFamily::kGaussian, 1});
  Eigen::VectorXd ind(2);
  ind << 1.0, 0.0;  // 1(Z_s <= 0.5)
  EXPECT_EQ(loo_cond_cdf(m, ind, 0), 0.0);
  EXPECT_EQ(loo_cond_cdf(m, ind, 1), 1.0);
}

TEST(LooCondCdf, IsolatedPointThrows) {
  RowMatrix w(3, 1);
  w << 0.0, 0.01, 500.0;
  const auto m = kernel_weight_matrix(w, 0.01, {KernelFamily::kGaussian, 1});
  const Eigen::VectorXd ind = Eigen::VectorXd::Ones(3);
  try {
    loo_cond_cdf(m, ind, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDegenerateNeighborhood);
  }
  EXPECT_NO_THROW(loo_cond_cdf(m, ind, 0));
}

TEST(SmoothingProperty, CondCdfIgnoresOwnIndicator) {
  std::mt19937_64 rng(31);
  const auto x = oracle::random_sample(rng, 15, 1, 1, 1);
  const auto m = kernel_weight_matrix(x.w, 0.8, {KernelFamily::kGaussian, 1});
  Eigen::VectorXd ind(15);
  for (Index s = 0; s < 15; ++s) ind[s] = (s % 3 == 0) ? 1.0 : 0.0;
  for (Index t = 0; t < 15; ++t) {
    Eigen::VectorXd flipped = ind;
    flipped[t] = 1.0 - flipped[t];
    EXPECT_EQ(loo_cond_cdf(m, ind, t), loo_cond_cdf(m, flipped, t));
  }
}

// Indicator columns 1(Z_s <= z) for a grid of z values, evaluated with the
// library's leave-one-out CDF and its batched numerators.
TEST(SmoothingProperty, CondCdfMonotoneAndBounded) {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> band(0.2, 1.5);
  for (int trial = 0; trial < 40; ++trial) {
    const Index dz = 1 + trial % 2;
    const Index n = 5 + trial;
    const auto x = oracle::random_sample(rng, n, 1 + trial % 3, 1, dz, trial % 4 == 0);
    const double h = band(rng);
    const KernelSpec spec{KernelFamily::kGaussian, static_cast<int>(x.dim_w())};
    LooSmoother smoother(kernel_weight_matrix(x.w, h, spec), h,
                         static_cast<int>(x.dim_w()));

    // Points increasing along a chain: the sample minimum minus one, every
    // sample row shifted up componentwise, and the sample maximum.
    const Eigen::RowVectorXd lo = x.z.colwise().minCoeff().array() - 1.0;
    const Eigen::RowVectorXd hi = x.z.colwise().maxCoeff();
    const int steps = 12;
    RowMatrix points(steps + 1, dz);
    for (int k = 0; k <= steps; ++k) {
      points.row(k) = lo + (hi - lo) * (static_cast<double>(k) / steps);
    }
    points.row(steps) = hi;
    const Eigen::MatrixXd num = smoother.numerators(x.z, points);
    for (Index t = 0; t < n; ++t) {
      const double mass = smoother.mass()[t];
      double prev = -1.0;
      for (int k = 0; k <= steps; ++k) {
        const double f = num(t, k) / mass;
        ASSERT_GE(f, 0.0);
        ASSERT_LE(f, 1.0 + 1e-15);
        ASSERT_GE(f, prev - 1e-15);
        prev = f;
      }
      EXPECT_EQ(num(t, 0), 0.0);
      EXPECT_NEAR(num(t, steps) / mass, 1.0, 1e-14);

      Eigen::VectorXd ind(n);
      for (int k : {0, steps / 2, steps}) {
        for (Index s = 0; s < n; ++s) {
          ind[s] = all_leq(x.z.row(s), points.row(k)) ? 1.0 : 0.0;
        }
        ASSERT_NEAR(loo_cond_cdf(smoother.weights(), ind, t), num(t, k) / mass,
                    1e-13);
      }
    }
  }
}

TEST(LooSmoother, NumeratorsMatchDirectSums) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    const Index dv = 1 + trial % 2;
    const Index n = 3 + 2 * trial;
    const auto x = oracle::random_sample(rng, n, 1 + trial % 2, 1, dv, trial % 3 == 0);
    const double h = 0.9;
    const int dw = static_cast<int>(x.dim_w());
    LooSmoother smoother(kernel_weight_matrix(x.w, h, {KernelFamily::kGaussian, dw}),
                         h, dw);
    const Eigen::MatrixXd num = smoother.numerators(x.z, x.z);
    for (Index t = 0; t < n; ++t) {
      double mass = 0.0;
      for (Index s = 0; s < n; ++s) {
        if (s != t) mass += oracle::product_kernel(x.w, t, s, h);
      }
      ASSERT_NEAR(smoother.mass()[t], mass, 1e-13);
      for (Index j = 0; j < n; ++j) {
        double ref = 0.0;
        for (Index s = 0; s < n; ++s) {
          if (s != t && oracle::leq(x.z, s, x.z.row(j))) {
            ref += oracle::product_kernel(x.w, t, s, h);
          }
        }
        ASSERT_NEAR(num(t, j), ref, 1e-13);
      }
    }
    EXPECT_NEAR(smoother.normalizer(), (n - 1) * std::pow(h, dw), 1e-12);
  }
}

TEST(LooSmoother, ZeroMassIsReported) {
  RowMatrix w(3, 1);
  w << 0.0, 0.0, 1e6;
  LooSmoother smoother(kernel_weight_matrix(w, 1.0, {KernelFamily::kGaussian, 1}),
                       1.0, 1);
  try {
    smoother.require_positive_mass();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDegenerateNeighborhood);
  }
}

}  // namespace
}  // namespace npci
