#pragma once

#include <span>

#include "npci/ciprocess.hpp"

namespace npci {

struct StatisticValue {
  double cvm = 0.0;
  double ks = 0.0;
};

// n^{-1} sum_j |S_n(gamma_j)|^2.
double cvm_stat(const ProcessValues& s);
double cvm_stat(std::span<const double> s);

// max_j |S_n(gamma_j)|.
double ks_stat(const ProcessValues& s);
double ks_stat(std::span<const double> s);

StatisticValue statistics(const ProcessValues& s);

}  // namespace npci
