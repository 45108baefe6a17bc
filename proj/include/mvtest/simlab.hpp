#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "mvtest/covariance.hpp"
#include "mvtest/manova.hpp"

namespace mvtest {

// One Monte Carlo cell: a design (sizes + covariance + means), how the group
// variable is treated, which F convention maps statistics to p-values, and
// the replication plan.
struct ScenarioConfig {
  int scenario_id = 0;
  int r = 0;
  int g = 0;
  std::vector<int> sizes;
  CovarianceSpec cov;
  std::vector<Vector> means;  // empty = all-zero (null hypothesis true)
  GroupTreatment treatment = GroupTreatment::Categorical;
  Convention convention = Convention::Software;
  int reps = 10000;
  double alpha = 0.05;
  std::uint64_t master_seed = 0;
};

// Estimated type I error (or power) of one statistic in one scenario.
struct RejectionRow {
  int scenario_id = 0;
  StatisticKind statistic{};
  double rejection_rate = 0;
  double mc_se = 0;
  int reps = 0;
  double alpha = 0;
};

struct SimulationTable {
  std::vector<ScenarioConfig> scenarios;   // sorted by scenario_id
  std::vector<int> singular_failures;      // per scenario, aligned with scenarios
  std::vector<RejectionRow> rows;          // 4 per scenario, statistic order within id
  std::string timestamp;                   // when the run finished (not written to outputs)
};

// Binomial standard error sqrt(rate (1 - rate) / reps).
double mc_stderr(double rate, int reps);

// One replicate's four p-values (statistic order), generated from the
// substream keyed by (master_seed, scenario_id, replicate_index) — a pure
// function of (cfg, replicate_index), independent of call order.
std::array<double, 4> run_replicate(const ScenarioConfig& cfg, int replicate_index);

// All replicates of one scenario, counting strict rejections p < alpha.
// Replicates that die with SingularError are counted as failures (never as
// rejections); more than 0.1% of them aborts the scenario (AbortError).
// Worker threads split the replicate range; because each replicate owns its
// substream and the counts are integers, the rates are identical for any
// worker count. When failure_count is non-null the singular tally is
// written there.
std::array<RejectionRow, 4> run_scenario(const ScenarioConfig& cfg, int workers = 1,
                                         int* failure_count = nullptr);

// Run a set of scenarios (ids must be distinct) and assemble the table,
// rows sorted by scenario_id then statistic. A failing scenario aborts the
// suite with its id in the message.
SimulationTable run_suite(const std::vector<ScenarioConfig>& scenarios, int workers = 1);

// Named scenario grids. Every preset uses r = 3, g = 3, alpha = 0.05, zero
// means, the software convention, and the given seed/reps in every cell:
//  - "ates-categorical":            10 size patterns x {identity, diag(1,4,9)},
//                                   ids 0..19, categorical treatment
//  - "ates-continuous":             the same 20 cells (same ids, hence the
//                                   same generated data), continuous treatment
//  - "adebayo-homogeneous":         6 size patterns, identity, ids 0..5
//  - "adebayo-heterogeneous-identity": 6 size patterns, per-group scaled
//                                   identity sigma^2 = (1, 4, 9), ids 0..5
//  - "adebayo-heterogeneous-toeplitz": 6 size patterns, per-group Toeplitz
//                                   rho = (0.75, 0.5, 0.25), ids 0..5
std::vector<ScenarioConfig> preset_tables(const std::string& name, std::uint64_t seed, int reps);

// The preset names above, in registry order.
std::vector<std::string> preset_names();

}  // namespace mvtest
