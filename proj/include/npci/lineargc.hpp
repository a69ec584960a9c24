#pragma once

#include <span>
#include <optional>

#include <Eigen/Dense>

#include "npci/sample.hpp"

namespace npci {

struct OlsFit {
  Eigen::VectorXd coefficients;
  Eigen::VectorXd residuals;
};

// Least squares via column-pivoted QR; throws kSingularDesign when the
// design is rank deficient.
OlsFit ols_fit(const Eigen::MatrixXd& design, const Eigen::VectorXd& y);

// 1 - j/(m+1), j = 0..m.
Eigen::VectorXd bartlett_weights(int m);

// Newey-West sandwich (X'X)^{-1} Omega (X'X)^{-1} with Bartlett-weighted
// residual autocovariances up to lag m. m = 0 is the White estimator.
Eigen::MatrixXd newey_west_covariance(const Eigen::MatrixXd& design,
                                      const Eigen::VectorXd& residuals, int m);

Eigen::VectorXd newey_west_se(const Eigen::MatrixXd& design,
                              const Eigen::VectorXd& residuals, int m);

// floor(4 (n/100)^{2/9}).
int default_hac_lag(Index n);

struct HacRegressionResult {
  double intercept = 0.0;  // mu
  double beta = 0.0;       // coefficient on RP_t
  double alpha = 0.0;      // coefficient on VRP_t
  double alpha_se = 0.0;
  double t_stat = 0.0;
  double p_value = 1.0;  // two-sided, standard normal reference
  int hac_lag = 0;
  Index n = 0;
};

// Rows t = 0..len-horizon-1: response rp[t + horizon], design (1, rp[t], vrp[t]).
struct GrangerDesign {
  Eigen::MatrixXd design;
  Eigen::VectorXd response;
};

GrangerDesign granger_design(std::span<const double> rp,
                             std::span<const double> vrp, Index horizon);

// Regresses rp[t + horizon] on (1, rp[t], vrp[t]) and tests alpha = 0 with a
// Newey-West standard error. hac_lag defaults to default_hac_lag(rows).
HacRegressionResult linear_granger_test(std::span<const double> rp,
                                        std::span<const double> vrp,
                                        Index horizon,
                                        std::optional<int> hac_lag = {});

}  // namespace npci
