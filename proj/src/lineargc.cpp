#include "npci/lineargc.hpp"

#include <cmath>
#include <string>

#include "npci/error.hpp"

namespace npci {

OlsFit ols_fit(const Eigen::MatrixXd& design, const Eigen::VectorXd& y) {
  const Index n = design.rows();
  const Index k = design.cols();
  if (y.size() != n) {
    throw Error(ErrorKind::kDimensionMismatch, "design rows != response length");
  }
  if (n <= k) {
    throw Error(ErrorKind::kInsufficientData,
                "OLS needs more rows (" + std::to_string(n) + ") than columns (" +
                    std::to_string(k) + ")");
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < k) {
    throw Error(ErrorKind::kSingularDesign,
                "design matrix has rank " + std::to_string(qr.rank()) + " < " +
                    std::to_string(k));
  }
  OlsFit fit;
  fit.coefficients = qr.solve(y);
  fit.residuals = y - design * fit.coefficients;
  return fit;
}

Eigen::VectorXd bartlett_weights(int m) {
  if (m < 0) throw Error(ErrorKind::kInvalidArgument, "HAC lag must be >= 0");
  Eigen::VectorXd w(m + 1);
  for (int j = 0; j <= m; ++j) w[j] = 1.0 - static_cast<double>(j) / (m + 1);
  return w;
}

Eigen::MatrixXd newey_west_covariance(const Eigen::MatrixXd& design,
                                      const Eigen::VectorXd& residuals,
                                      int m) {
  const Index n = design.rows();
  if (residuals.size() != n) {
    throw Error(ErrorKind::kDimensionMismatch, "residual length != design rows");
  }
  const Eigen::VectorXd weights = bartlett_weights(m);
  // scores u_t x_t, one row per observation
  const Eigen::MatrixXd scores = design.array().colwise() * residuals.array();
  Eigen::MatrixXd meat = scores.transpose() * scores;
  for (int j = 1; j <= m && j < n; ++j) {
    const Eigen::MatrixXd gamma =
        scores.bottomRows(n - j).transpose() * scores.topRows(n - j);
    meat += weights[j] * (gamma + gamma.transpose());
  }
  const Eigen::MatrixXd bread =
      (design.transpose() * design).ldlt().solve(
          Eigen::MatrixXd::Identity(design.cols(), design.cols()));
  return bread * meat * bread;
}

Eigen::VectorXd newey_west_se(const Eigen::MatrixXd& design,
                              const Eigen::VectorXd& residuals, int m) {
  return newey_west_covariance(design, residuals, m).diagonal().cwiseSqrt();
}

int default_hac_lag(Index n) {
  return static_cast<int>(
      std::floor(4.0 * std::pow(static_cast<double>(n) / 100.0, 2.0 / 9.0)));
}

GrangerDesign granger_design(std::span<const double> rp,
                             std::span<const double> vrp, Index horizon) {
  if (rp.size() != vrp.size()) {
    throw Error(ErrorKind::kDimensionMismatch, "rp and vrp differ in length");
  }
  if (horizon < 0) throw Error(ErrorKind::kInvalidConfig, "horizon must be >= 0");
  const Index rows = static_cast<Index>(rp.size()) - horizon;
  if (rows < 4) {
    throw Error(ErrorKind::kInsufficientData,
                "need at least 4 rows after the horizon shift, got " +
                    std::to_string(rows));
  }
  Eigen::MatrixXd design(rows, 3);
  Eigen::VectorXd response(rows);
  for (Index t = 0; t < rows; ++t) {
    design(t, 0) = 1.0;
    design(t, 1) = rp[static_cast<size_t>(t)];
    design(t, 2) = vrp[static_cast<size_t>(t)];
    response[t] = rp[static_cast<size_t>(t + horizon)];
  }
  return {std::move(design), std::move(response)};
}

HacRegressionResult linear_granger_test(std::span<const double> rp,
                                        std::span<const double> vrp,
                                        Index horizon,
                                        std::optional<int> hac_lag) {
  const auto [design, response] = granger_design(rp, vrp, horizon);
  const Index rows = design.rows();
  const OlsFit fit = ols_fit(design, response);
  const int m = hac_lag.value_or(default_hac_lag(rows));
  const Eigen::VectorXd se = newey_west_se(design, fit.residuals, m);

  if (!(se[2] > 0.0)) {
    throw Error(ErrorKind::kSingularDesign,
                "zero standard error for the VRP coefficient (exact fit)");
  }

  HacRegressionResult r;
  r.intercept = fit.coefficients[0];
  r.beta = fit.coefficients[1];
  r.alpha = fit.coefficients[2];
  r.alpha_se = se[2];
  r.t_stat = r.alpha / r.alpha_se;
  r.p_value = std::erfc(std::abs(r.t_stat) / std::sqrt(2.0));
  r.hac_lag = m;
  r.n = rows;
  return r;
}

}  // namespace npci
