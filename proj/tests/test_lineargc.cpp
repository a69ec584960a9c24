#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "npci/dgp.hpp"
#include "npci/error.hpp"
#include "npci/lineargc.hpp"

namespace npci {
namespace {

Eigen::MatrixXd with_intercept(const Eigen::MatrixXd& x) {
  Eigen::MatrixXd d(x.rows(), x.cols() + 1);
  d.col(0).setOnes();
  d.rightCols(x.cols()) = x;
  return d;
}

// (X'X)^{-1} [sum_t e_t^2 x_t x_t'] (X'X)^{-1}, accumulated term by term.
Eigen::MatrixXd white_by_hand(const Eigen::MatrixXd& x, const Eigen::VectorXd& e) {
  const Index k = x.cols();
  Eigen::MatrixXd xtx = Eigen::MatrixXd::Zero(k, k);
  Eigen::MatrixXd meat = Eigen::MatrixXd::Zero(k, k);
  for (Index t = 0; t < x.rows(); ++t) {
    for (Index a = 0; a < k; ++a) {
      for (Index b = 0; b < k; ++b) {
        xtx(a, b) += x(t, a) * x(t, b);
        meat(a, b) += e[t] * e[t] * x(t, a) * x(t, b);
      }
    }
  }
  const Eigen::MatrixXd inv = xtx.inverse();
  return inv * meat * inv;
}

TEST(OlsFit, ExactLine) {
  Eigen::MatrixXd x(5, 1);
  x << 0, 1, 2, 3, 4;
  const Eigen::VectorXd y = 2.0 * x.col(0);
  const OlsFit fit = ols_fit(with_intercept(x), y);
  EXPECT_NEAR(fit.coefficients[0], 0.0, 1e-14);
  EXPECT_NEAR(fit.coefficients[1], 2.0, 1e-14);
  EXPECT_LT(fit.residuals.cwiseAbs().maxCoeff(), 1e-13);
}

TEST(OlsFit, InterceptOnlyIsMean) {
  Eigen::VectorXd y(4);
  y << 1.0, 4.0, 2.0, 9.0;
  const OlsFit fit = ols_fit(Eigen::MatrixXd::Ones(4, 1), y);
  EXPECT_NEAR(fit.coefficients[0], 4.0, 1e-14);
}

TEST(OlsFit, DuplicatedColumnIsSingular) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd x(20, 2);
  for (Index t = 0; t < 20; ++t) x(t, 0) = x(t, 1) = normal(rng);
  Eigen::VectorXd y = Eigen::VectorXd::Ones(20);
  try {
    ols_fit(with_intercept(x), y);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kSingularDesign);
  }
}

TEST(OlsFit, ResidualsOrthogonalToDesign) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd x(50, 3);
  Eigen::VectorXd y(50);
  for (Index t = 0; t < 50; ++t) {
    for (Index c = 0; c < 3; ++c) x(t, c) = normal(rng);
    y[t] = normal(rng);
  }
  const Eigen::MatrixXd d = with_intercept(x);
  const OlsFit fit = ols_fit(d, y);
  EXPECT_LT((d.transpose() * fit.residuals).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(BartlettWeights, Formula) {
  const Eigen::VectorXd w = bartlett_weights(2);
  ASSERT_EQ(w.size(), 3);
  EXPECT_DOUBLE_EQ(w[0], 1.0);
  EXPECT_DOUBLE_EQ(w[1], 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(w[2], 1.0 / 3.0);
  EXPECT_EQ(bartlett_weights(0).size(), 1);
  EXPECT_THROW(bartlett_weights(-1), Error);
}

TEST(DefaultHacLag, AutomaticRule) {
  EXPECT_EQ(default_hac_lag(100), 4);
  EXPECT_EQ(default_hac_lag(1000), 6);  // 4 * 10^{2/9} = 6.67
  EXPECT_EQ(default_hac_lag(50), 3);    // 4 * 0.5^{2/9} = 3.43
}

TEST(LinearGcProperty, ZeroLagHacIsWhite) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = 20 + trial * 7;
    Eigen::MatrixXd x(n, 2);
    Eigen::VectorXd y(n);
    for (Index t = 0; t < n; ++t) {
      x(t, 0) = normal(rng);
      x(t, 1) = normal(rng);
      y[t] = 0.3 * x(t, 0) + (1.0 + std::abs(x(t, 1))) * normal(rng);
    }
    const Eigen::MatrixXd d = with_intercept(x);
    const OlsFit fit = ols_fit(d, y);
    const Eigen::MatrixXd got = newey_west_covariance(d, fit.residuals, 0);
    const Eigen::MatrixXd ref = white_by_hand(d, fit.residuals);
    ASSERT_LT((got - ref).cwiseAbs().maxCoeff(), 1e-13 * ref.cwiseAbs().maxCoeff());
    const Eigen::VectorXd se = newey_west_se(d, fit.residuals, 0);
    for (Index k = 0; k < 3; ++k) ASSERT_NEAR(se[k], std::sqrt(ref(k, k)), 1e-13 * se[k]);
  }
}

TEST(NeweyWest, LaggedTermsByHand) {
  // One regressor, m = 1: Omega = sum e_t^2 x_t^2 + 2 (1/2) sum e_t e_{t-1} x_t x_{t-1}.
  Eigen::MatrixXd x(4, 1);
  x << 1, 2, 3, 4;
  Eigen::VectorXd e(4);
  e << 0.5, -1.0, 0.25, 2.0;
  const double xtx = 30.0;
  const double g0 = 0.25 * 1 + 1.0 * 4 + 0.0625 * 9 + 4.0 * 16;
  const double g1 = (-1.0 * 0.5) * 2 + (0.25 * -1.0) * 6 + (2.0 * 0.25) * 12;
  const double expected = (g0 + g1) / (xtx * xtx);
  EXPECT_NEAR(newey_west_covariance(x, e, 1)(0, 0), expected, 1e-15);
}

TEST(NeweyWest, CloseToClassicalUnderIidErrors) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> normal;
  const Index n = 5000;
  Eigen::MatrixXd x(n, 2);
  Eigen::VectorXd y(n);
  for (Index t = 0; t < n; ++t) {
    x(t, 0) = normal(rng);
    x(t, 1) = normal(rng);
    y[t] = 1.0 + 0.5 * x(t, 0) - 0.2 * x(t, 1) + normal(rng);
  }
  const Eigen::MatrixXd d = with_intercept(x);
  const OlsFit fit = ols_fit(d, y);
  const double s2 = fit.residuals.squaredNorm() / static_cast<double>(n - 3);
  const Eigen::MatrixXd classical = s2 * (d.transpose() * d).inverse();
  const Eigen::VectorXd hac = newey_west_se(d, fit.residuals, default_hac_lag(n));
  for (Index k = 0; k < 3; ++k) {
    EXPECT_NEAR(hac[k] / std::sqrt(classical(k, k)), 1.0, 0.10);
  }
}

TEST(NeweyWest, CovarianceIsSymmetricPositive) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd x(200, 2);
  Eigen::VectorXd e(200);
  for (Index t = 0; t < 200; ++t) {
    x(t, 0) = 1.0;
    x(t, 1) = normal(rng);
    e[t] = normal(rng) + (t > 0 ? 0.7 * e[t - 1] : 0.0);
  }
  for (int m : {0, 1, 5, 20}) {
    const Eigen::MatrixXd v = newey_west_covariance(x, e, m);
    EXPECT_LT((v - v.transpose()).cwiseAbs().maxCoeff(), 1e-15);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(v);
    EXPECT_GE(eig.eigenvalues().minCoeff(), 0.0);
  }
}

TEST(GrangerDesign, RowAlignmentMatchesLagEmbedding) {
  const RawSeries raw = simulate({DgpId::P1, 40, 500, 1});
  for (Index horizon : {0, 1, 3}) {
    const GrangerDesign g = granger_design(raw.y, raw.z, horizon);
    const TimeSeriesSample s = lag_embed({raw.y, raw.z, {raw.y}}, 1, horizon);
    ASSERT_EQ(g.design.rows(), s.size());
    for (Index r = 0; r < s.size(); ++r) {
      EXPECT_EQ(g.design(r, 0), 1.0);
      EXPECT_EQ(g.design(r, 1), s.w(r, 0));
      EXPECT_EQ(g.design(r, 2), s.z(r, 0));
      EXPECT_EQ(g.response[r], s.y(r, 0));
    }
  }
}

TEST(LinearGranger, RecoversPredictiveCoefficient) {
  const RawSeries raw = simulate({DgpId::P1, 4000, 500, 2});
  const HacRegressionResult r = linear_granger_test(raw.y, raw.z, 1);
  EXPECT_NEAR(r.beta, 0.5, 0.05);
  EXPECT_NEAR(r.alpha, 0.5, 0.05);
  EXPECT_GT(std::abs(r.t_stat), 10.0);
  EXPECT_LT(r.p_value, 1e-6);
  EXPECT_EQ(r.n, 3999);
  EXPECT_EQ(r.hac_lag, default_hac_lag(3999));
  EXPECT_DOUBLE_EQ(r.t_stat, r.alpha / r.alpha_se);
}

TEST(LinearGcProperty, SelfRegression) {
  // Regressing a series on itself plus an intercept: slope 1, intercept 0.
  std::mt19937_64 rng(6);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd x(30, 1);
  for (Index t = 0; t < 30; ++t) x(t, 0) = normal(rng);
  const OlsFit fit = ols_fit(with_intercept(x), x.col(0));
  EXPECT_NEAR(fit.coefficients[0], 0.0, 1e-14);
  EXPECT_NEAR(fit.coefficients[1], 1.0, 1e-14);
  EXPECT_LT(fit.residuals.cwiseAbs().maxCoeff(), 1e-14);
}

TEST(LinearGranger, CollinearCandidateIsSingularButPerturbedCopyRuns) {
  const RawSeries raw = simulate({DgpId::S2, 200, 500, 3});
  try {
    linear_granger_test(raw.y, raw.y, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kSingularDesign);
  }
  std::vector<double> perturbed = raw.y;
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal(0.0, 0.1);
  for (double& v : perturbed) v += normal(rng);
  EXPECT_NO_THROW(linear_granger_test(raw.y, perturbed, 1));
}

TEST(LinearGcProperty, TStatisticInvariantToCandidateScale) {
  const RawSeries raw = simulate({DgpId::P2, 300, 500, 4});
  const HacRegressionResult a = linear_granger_test(raw.y, raw.z, 1, 3);
  for (double c : {0.01, 7.5, 1e4}) {
    std::vector<double> scaled = raw.z;
    for (double& v : scaled) v *= c;
    const HacRegressionResult b = linear_granger_test(raw.y, scaled, 1, 3);
    EXPECT_NEAR(b.t_stat, a.t_stat, 1e-9 * std::abs(a.t_stat));
    EXPECT_NEAR(b.alpha * c, a.alpha, 1e-9 * std::abs(a.alpha));
    EXPECT_NEAR(b.alpha_se * c, a.alpha_se, 1e-9 * a.alpha_se);
  }
}

TEST(LinearGranger, InvalidInputs) {
  const std::vector<double> a = {1, 2, 3, 4, 5};
  const std::vector<double> b = {1, 0, 1, 0};
  EXPECT_THROW(linear_granger_test(a, b, 1), Error);
  try {
    linear_granger_test(a, a, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInsufficientData);
  }
  EXPECT_THROW(linear_granger_test(a, a, -1), Error);
}

TEST(LinearGranger, NullRejectionNearNominal) {
  int rejections = 0;
  const int datasets = 400;
  for (int d = 0; d < datasets; ++d) {
    const RawSeries raw = simulate({DgpId::S2, 500, 500, static_cast<std::uint64_t>(d)});
    rejections += linear_granger_test(raw.y, raw.z, 1).p_value < 0.05 ? 1 : 0;
  }
  const double rate = static_cast<double>(rejections) / datasets;
  EXPECT_NEAR(rate, 0.05, 0.035);  // about 3 sd at R = 400
}

}  // namespace
}  // namespace npci
