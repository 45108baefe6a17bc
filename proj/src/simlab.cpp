#include "mvtest/simlab.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <exception>
#include <thread>

#include "mvtest/sampler.hpp"

namespace mvtest {

double mc_stderr(double rate, int reps) {
  if (reps < 1) throw DomainError("mc_stderr: reps must be >= 1");
  if (!(rate >= 0.0 && rate <= 1.0)) throw DomainError("mc_stderr: rate must be in [0, 1]");
  return std::sqrt(rate * (1.0 - rate) / static_cast<double>(reps));
}

namespace {

void validate_scenario(const ScenarioConfig& cfg) {
  if (cfg.reps < 1) throw InvalidSpec("scenario: reps must be >= 1");
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw InvalidSpec("scenario: alpha must be in (0, 1)");
  if (cfg.r < 2) throw InvalidSpec("scenario: needs r >= 2 responses");
  if (cfg.g < 2) throw InvalidSpec("scenario: needs g >= 2 groups");
  if (static_cast<int>(cfg.sizes.size()) != cfg.g)
    throw InvalidSpec("scenario: " + std::to_string(cfg.sizes.size()) + " sizes for g = " +
                      std::to_string(cfg.g));
  if (cfg.cov.r != cfg.r || cfg.cov.g != cfg.g)
    throw InvalidSpec("scenario: covariance spec is for r = " + std::to_string(cfg.cov.r) +
                      ", g = " + std::to_string(cfg.cov.g));
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::array<double, 4> run_replicate(const ScenarioConfig& cfg, int replicate_index) {
  validate_scenario(cfg);
  const RngState master = rng_new(cfg.master_seed);
  RngState stream = rng_substream(master, static_cast<std::uint64_t>(cfg.scenario_id),
                                  static_cast<std::uint64_t>(replicate_index));
  const GroupedDataset data = gen_dataset(cfg.cov, cfg.sizes, cfg.means, stream);
  const ManovaResult result = cfg.treatment == GroupTreatment::Categorical
                                  ? manova_test(data, cfg.convention)
                                  : regression_test(data, cfg.convention);
  std::array<double, 4> p{};
  for (std::size_t k = 0; k < 4; ++k) p[k] = result.reports[k].p;
  return p;
}

std::array<RejectionRow, 4> run_scenario(const ScenarioConfig& cfg, int workers,
                                         int* failure_count) {
  validate_scenario(cfg);
  const int n_workers = std::clamp(workers, 1, cfg.reps);

  struct WorkerTally {
    std::array<long, 4> rejections{};
    long singular = 0;
    std::exception_ptr failure;
  };
  std::vector<WorkerTally> tallies(n_workers);

  // contiguous replicate ranges per worker; substreams make the split
  // arbitrary, integer tallies make the merge order-independent
  auto body = [&cfg](int begin, int end, WorkerTally& tally) {
    try {
      for (int i = begin; i < end; ++i) {
        try {
          const std::array<double, 4> p = run_replicate(cfg, i);
          for (std::size_t k = 0; k < 4; ++k)
            if (p[k] < cfg.alpha) ++tally.rejections[k];
        } catch (const SingularError&) {
          ++tally.singular;
        }
      }
    } catch (...) {
      tally.failure = std::current_exception();
    }
  };

  if (n_workers == 1) {
    body(0, cfg.reps, tallies[0]);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    const int chunk = (cfg.reps + n_workers - 1) / n_workers;
    for (int w = 0; w < n_workers; ++w) {
      const int begin = w * chunk;
      const int end = std::min(cfg.reps, begin + chunk);
      pool.emplace_back(body, begin, end, std::ref(tallies[w]));
    }
    for (std::thread& t : pool) t.join();
  }

  std::array<long, 4> rejections{};
  long singular = 0;
  for (const WorkerTally& tally : tallies) {
    if (tally.failure) std::rethrow_exception(tally.failure);
    for (std::size_t k = 0; k < 4; ++k) rejections[k] += tally.rejections[k];
    singular += tally.singular;
  }

  if (failure_count) *failure_count = static_cast<int>(singular);
  if (static_cast<double>(singular) > 0.001 * cfg.reps)
    throw AbortError("scenario " + std::to_string(cfg.scenario_id) + ": " +
                     std::to_string(singular) + " of " + std::to_string(cfg.reps) +
                     " replicates hit singular error matrices (budget is 0.1%)");

  std::array<RejectionRow, 4> rows;
  for (std::size_t k = 0; k < 4; ++k) {
    rows[k].scenario_id = cfg.scenario_id;
    rows[k].statistic = kStatisticOrder[k];
    rows[k].rejection_rate = static_cast<double>(rejections[k]) / static_cast<double>(cfg.reps);
    rows[k].mc_se = mc_stderr(rows[k].rejection_rate, cfg.reps);
    rows[k].reps = cfg.reps;
    rows[k].alpha = cfg.alpha;
  }
  return rows;
}

SimulationTable run_suite(const std::vector<ScenarioConfig>& scenarios, int workers) {
  SimulationTable table;
  table.scenarios = scenarios;
  std::sort(table.scenarios.begin(), table.scenarios.end(),
            [](const ScenarioConfig& a, const ScenarioConfig& b) {
              return a.scenario_id < b.scenario_id;
            });
  for (std::size_t i = 1; i < table.scenarios.size(); ++i)
    if (table.scenarios[i].scenario_id == table.scenarios[i - 1].scenario_id)
      throw InvalidSpec("run_suite: duplicate scenario_id " +
                        std::to_string(table.scenarios[i].scenario_id));

  table.singular_failures.reserve(table.scenarios.size());
  table.rows.reserve(table.scenarios.size() * 4);
  for (const ScenarioConfig& cfg : table.scenarios) {
    try {
      int failures = 0;
      const std::array<RejectionRow, 4> rows = run_scenario(cfg, workers, &failures);
      table.singular_failures.push_back(failures);
      table.rows.insert(table.rows.end(), rows.begin(), rows.end());
    } catch (const Error& e) {
      throw AbortError("scenario " + std::to_string(cfg.scenario_id) + " (" +
                       cov_label(cfg.cov) + ", " + treatment_token(cfg.treatment) +
                       "): " + e.what());
    }
  }
  table.timestamp = utc_timestamp();
  return table;
}

namespace {

ScenarioConfig base_scenario(int id, const std::vector<int>& sizes, const CovarianceSpec& cov,
                             GroupTreatment treatment, std::uint64_t seed, int reps) {
  ScenarioConfig cfg;
  cfg.scenario_id = id;
  cfg.r = cov.r;
  cfg.g = cov.g;
  cfg.sizes = sizes;
  cfg.cov = cov;
  cfg.treatment = treatment;
  cfg.convention = Convention::Software;
  cfg.reps = reps;
  cfg.alpha = 0.05;
  cfg.master_seed = seed;
  return cfg;
}

const std::vector<std::vector<int>> kAtesSizes = {
    {10, 10, 10}, {20, 20, 20}, {50, 50, 50}, {10, 10, 20}, {10, 10, 50},
    {10, 20, 20}, {10, 20, 50}, {10, 50, 50}, {20, 20, 50}, {20, 50, 50}};

const std::vector<std::vector<int>> kAdebayoSizes = {
    {10, 10, 10}, {100, 100, 100}, {1000, 1000, 1000},
    {10, 20, 30}, {100, 200, 300}, {600, 800, 1000}};

std::vector<ScenarioConfig> ates_grid(GroupTreatment treatment, std::uint64_t seed, int reps) {
  Vector heterovar(3);
  heterovar << 1, 4, 9;
  const CovarianceSpec homo = CovarianceSpec::identity(3, 3);
  const CovarianceSpec hetero = CovarianceSpec::shared_diagonal(heterovar, 3);
  std::vector<ScenarioConfig> grid;
  int id = 0;
  for (const CovarianceSpec& cov : {homo, hetero})
    for (const std::vector<int>& sizes : kAtesSizes)
      grid.push_back(base_scenario(id++, sizes, cov, treatment, seed, reps));
  return grid;
}

std::vector<ScenarioConfig> adebayo_grid(const CovarianceSpec& cov, std::uint64_t seed, int reps) {
  std::vector<ScenarioConfig> grid;
  int id = 0;
  for (const std::vector<int>& sizes : kAdebayoSizes)
    grid.push_back(base_scenario(id++, sizes, cov, GroupTreatment::Categorical, seed, reps));
  return grid;
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"ates-categorical", "ates-continuous", "adebayo-homogeneous",
          "adebayo-heterogeneous-identity", "adebayo-heterogeneous-toeplitz"};
}

std::vector<ScenarioConfig> preset_tables(const std::string& name, std::uint64_t seed, int reps) {
  if (name == "ates-categorical") return ates_grid(GroupTreatment::Categorical, seed, reps);
  if (name == "ates-continuous") return ates_grid(GroupTreatment::Continuous, seed, reps);
  if (name == "adebayo-homogeneous")
    return adebayo_grid(CovarianceSpec::identity(3, 3), seed, reps);
  if (name == "adebayo-heterogeneous-identity") {
    Vector sigma2(3);
    sigma2 << 1, 4, 9;
    return adebayo_grid(CovarianceSpec::scaled_identity(sigma2, 3), seed, reps);
  }
  if (name == "adebayo-heterogeneous-toeplitz") {
    Vector rho(3);
    rho << 0.75, 0.5, 0.25;
    return adebayo_grid(CovarianceSpec::toeplitz(1.0, rho, 3), seed, reps);
  }
  std::string known;
  for (const std::string& p : preset_names()) known += (known.empty() ? "" : ", ") + p;
  throw UnknownPreset("unknown preset '" + name + "' (known: " + known + ")");
}

}  // namespace mvtest
