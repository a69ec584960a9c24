#include "npci/teststats.hpp"

#include <algorithm>
#include <cmath>

#include "npci/error.hpp"

namespace npci {
namespace {

void require_nonempty(Index n) {
  if (n == 0) {
    throw Error(ErrorKind::kInvalidArgument,
                "test statistic of an empty process");
  }
}

}  // namespace

double cvm_stat(std::span<const double> s) {
  require_nonempty(static_cast<Index>(s.size()));
  double acc = 0.0;
  for (double v : s) acc += v * v;
  return acc / static_cast<double>(s.size());
}

double ks_stat(std::span<const double> s) {
  require_nonempty(static_cast<Index>(s.size()));
  double best = 0.0;
  for (double v : s) best = std::max(best, std::abs(v));
  return best;
}

double cvm_stat(const ProcessValues& s) {
  if (!s.is_complex()) return cvm_stat(std::span(s.re.data(), s.re.size()));
  require_nonempty(s.size());
  return (s.re.squaredNorm() + s.im.squaredNorm()) /
         static_cast<double>(s.size());
}

double ks_stat(const ProcessValues& s) {
  if (!s.is_complex()) return ks_stat(std::span(s.re.data(), s.re.size()));
  require_nonempty(s.size());
  return (s.re.array().square() + s.im.array().square()).sqrt().maxCoeff();
}

StatisticValue statistics(const ProcessValues& s) {
  return {cvm_stat(s), ks_stat(s)};
}

}  // namespace npci
