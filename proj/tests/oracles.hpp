#pragma once

// Brute-force reference implementations, written without the library's
// kernel, smoothing or process code.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "npci/sample.hpp"

namespace npci::oracle {

inline double gauss(double u) {
  return std::exp(-0.5 * u * u) / std::sqrt(2.0 * std::numbers::pi);
}

inline double product_kernel(const RowMatrix& w, Index t, Index s, double h) {
  double k = 1.0;
  for (Index c = 0; c < w.cols(); ++c) k *= gauss((w(t, c) - w(s, c)) / h);
  return k;
}

inline bool leq(const RowMatrix& a, Index t, const Eigen::RowVectorXd& b) {
  for (Index c = 0; c < a.cols(); ++c) {
    if (!(a(t, c) <= b[c])) return false;
  }
  return true;
}

enum class Phi { kIndicator, kSine, kCos };

inline double phi(Phi kind, const RowMatrix& w, Index t,
                  const Eigen::RowVectorXd& arg) {
  if (kind == Phi::kIndicator) return leq(w, t, arg) ? 1.0 : 0.0;
  double dot = 0.0;
  for (Index c = 0; c < w.cols(); ++c) dot += w(t, c) * arg[c];
  return kind == Phi::kSine ? std::sin(dot) : std::cos(dot);
}

// The double sum, enumerated term by term.
inline double process(const TimeSeriesSample& x, double h, Phi kind,
                      const Eigen::RowVectorXd& w, const Eigen::RowVectorXd& y,
                      const Eigen::RowVectorXd& z) {
  const Index n = x.size();
  double total = 0.0;
  for (Index t = 0; t < n; ++t) {
    const double lead = phi(kind, x.w, t, w) * (leq(x.y, t, y) ? 1.0 : 0.0);
    const double zt = leq(x.z, t, z) ? 1.0 : 0.0;
    for (Index s = 0; s < n; ++s) {
      if (s == t) continue;
      const double zs = leq(x.z, s, z) ? 1.0 : 0.0;
      total += product_kernel(x.w, t, s, h) * lead * (zt - zs);
    }
  }
  const double scale = std::sqrt(static_cast<double>(n)) *
                       static_cast<double>(n - 1) *
                       std::pow(h, static_cast<double>(x.dim_w()));
  return total / scale;
}

// The same quantity in its ratio form: n^{-1/2} sum_t phi 1(Y_t <= y)
// (1(Z_t <= z) - F(z | W_t)) f(W_t).
inline double density(const TimeSeriesSample& x, double h, Index t) {
  double sum = 0.0;
  for (Index s = 0; s < x.size(); ++s) {
    if (s != t) sum += product_kernel(x.w, t, s, h);
  }
  return sum / (static_cast<double>(x.size() - 1) *
                std::pow(h, static_cast<double>(x.dim_w())));
}

inline double cond_cdf(const TimeSeriesSample& x, const RowMatrix& v, double h,
                       Index t, const Eigen::RowVectorXd& point) {
  double num = 0.0;
  double den = 0.0;
  for (Index s = 0; s < x.size(); ++s) {
    if (s == t) continue;
    const double k = product_kernel(x.w, t, s, h);
    den += k;
    if (leq(v, s, point)) num += k;
  }
  return num / den;
}

inline double process_ratio_form(const TimeSeriesSample& x, double h, Phi kind,
                                 const Eigen::RowVectorXd& w,
                                 const Eigen::RowVectorXd& y,
                                 const Eigen::RowVectorXd& z) {
  double total = 0.0;
  for (Index t = 0; t < x.size(); ++t) {
    const double lead = phi(kind, x.w, t, w) * (leq(x.y, t, y) ? 1.0 : 0.0);
    const double eps = (leq(x.z, t, z) ? 1.0 : 0.0) - cond_cdf(x, x.z, h, t, z);
    total += lead * eps * density(x, h, t);
  }
  return total / std::sqrt(static_cast<double>(x.size()));
}

// Residual product phi (1(Y_t <= y) - F_Y) (1(Z_t <= z) - F_Z) f_W.
inline double residual(const TimeSeriesSample& x, double h, Phi kind,
                       const Eigen::RowVectorXd& w, const Eigen::RowVectorXd& y,
                       const Eigen::RowVectorXd& z, Index t) {
  const double a = (leq(x.y, t, y) ? 1.0 : 0.0) - cond_cdf(x, x.y, h, t, y);
  const double b = (leq(x.z, t, z) ? 1.0 : 0.0) - cond_cdf(x, x.z, h, t, z);
  return phi(kind, x.w, t, w) * a * b * density(x, h, t);
}

// Random sample with optional ties in Z and Y.
inline TimeSeriesSample random_sample(std::mt19937_64& rng, Index n, Index dw,
                                      Index dy, Index dz, bool ties = false) {
  std::normal_distribution<double> normal;
  std::uniform_int_distribution<int> small(0, 3);
  TimeSeriesSample x;
  x.w.resize(n, dw);
  x.y.resize(n, dy);
  x.z.resize(n, dz);
  for (Index t = 0; t < n; ++t) {
    for (Index c = 0; c < dw; ++c) x.w(t, c) = normal(rng);
    for (Index c = 0; c < dy; ++c) {
      x.y(t, c) = ties ? small(rng) : normal(rng);
    }
    for (Index c = 0; c < dz; ++c) {
      x.z(t, c) = ties ? small(rng) : normal(rng);
    }
  }
  return x;
}

}  // namespace npci::oracle
