#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "npci/dgp.hpp"
#include "npci/resample.hpp"
#include "npci/smoothing.hpp"

namespace npci {

struct ExperimentGrid {
  std::vector<DgpId> dgps;
  std::vector<Index> sample_sizes;
  std::vector<BandwidthRule> bandwidths;
  BootstrapScheme scheme = BootstrapScheme::kMultiplier;
  std::vector<double> block_a;  // block scheme only
  WeightFamily weight;
  int replications = 500;
  int bootstrap_replications = 200;
  double alpha = 0.05;
  Index burn_in = 500;
  std::uint64_t seed = 0;
  bool keep_p_values = false;

  // Throws kInvalidConfig.
  void validate() const;
};

struct McCell {
  DgpId dgp = DgpId::S1;
  Index n = 0;
  BandwidthRule bandwidth;
  double block_a = 0.0;  // 0 for the multiplier scheme
  int replications = 0;  // successful replications
  int failures = 0;
  double rate_cvm = 0.0;
  double rate_ks = 0.0;
  double se_cvm = 0.0;
  double se_ks = 0.0;
  double seconds = 0.0;
  std::vector<double> p_cvm;  // filled when keep_p_values
  std::vector<double> p_ks;
  std::string first_error;
};

struct McReport {
  ExperimentGrid grid;
  std::vector<McCell> cells;
};

// sqrt(p (1 - p) / R).
double mc_stderr(double p, int replications);

// For every (dgp, n, bandwidth, a) cell: simulate, build the triplet, run
// the bootstrap test and reject when p < alpha. Replication r of a design
// uses data seeded from (seed, dgp, n, r), so cells that differ only in
// bandwidth or block length see the same simulated series, and the report
// is identical for any number of worker threads.
McReport run_experiment(const ExperimentGrid& grid);

}  // namespace npci
