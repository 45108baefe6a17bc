#include "mvtest/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

namespace mvtest {

namespace {

constexpr std::uint64_t kDefaultSeed = 12345;
constexpr int kDefaultReps = 10000;

std::uint64_t parse_seed_text(const std::string& text, const std::string& what) {
  std::uint64_t value = 0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto res = std::from_chars(begin, end, value);
  if (res.ec != std::errc() || res.ptr != end)
    throw UsageError(what + " '" + text + "' is not an unsigned 64-bit integer");
  return value;
}

OutputFormat infer_format(const std::string& path) {
  const auto dot = path.rfind('.');
  const std::string ext = dot == std::string::npos ? "" : path.substr(dot);
  if (ext == ".csv") return OutputFormat::Csv;
  if (ext == ".json") return OutputFormat::Json;
  return OutputFormat::Pretty;
}

void print_continuous_notice(std::ostream& err, const std::vector<std::string>* labels) {
  err << "note: treating the grouping variable as continuous fits a single-slope multivariate\n"
         "      regression on the group codes, not a MANOVA; under the software convention all\n"
         "      four test statistics collapse to the same F test.\n";
  if (labels) {
    err << "      group codes follow first appearance:";
    for (std::size_t i = 0; i < labels->size(); ++i)
      err << (i ? ", " : " ") << (*labels)[i] << "=" << i + 1;
    err << '\n';
  }
}

Vector to_vector(const nlohmann::json& arr) {
  Vector v(static_cast<Index>(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i) v[static_cast<Index>(i)] = arr.at(i).get<double>();
  return v;
}

CovarianceSpec covariance_from_json(const nlohmann::json& node, int r, int g) {
  const std::string kind = node.value("kind", "identity");
  if (kind == "identity") return CovarianceSpec::identity(r, g);
  if (kind == "shared-diagonal") return CovarianceSpec::shared_diagonal(to_vector(node.at("values")), g);
  if (kind == "scaled-identity") return CovarianceSpec::scaled_identity(to_vector(node.at("variances")), r);
  if (kind == "toeplitz")
    return CovarianceSpec::toeplitz(node.value("sigma2", 1.0), to_vector(node.at("rhos")), r);
  if (kind == "explicit") {
    std::vector<Matrix> mats;
    for (const nlohmann::json& m : node.at("matrices")) {
      Matrix mat(static_cast<Index>(m.size()), static_cast<Index>(m.size()));
      for (std::size_t i = 0; i < m.size(); ++i) {
        if (m.at(i).size() != m.size())
          throw ParseError("explicit covariance matrices must be square");
        for (std::size_t j = 0; j < m.at(i).size(); ++j)
          mat(static_cast<Index>(i), static_cast<Index>(j)) = m.at(i).at(j).get<double>();
      }
      mats.push_back(std::move(mat));
    }
    return CovarianceSpec::explicit_per_group(std::move(mats));
  }
  throw ParseError("unknown covariance kind '" + kind +
                   "' (expected identity, shared-diagonal, scaled-identity, toeplitz, explicit)");
}

}  // namespace

std::vector<ScenarioConfig> load_config_scenarios(const std::string& path, const RunConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("config '" + path + "': " + e.what());
  }

  try {
    const std::uint64_t seed =
        cfg.seed_given ? cfg.seed : doc.value("seed", kDefaultSeed);
    const int default_reps = cfg.reps > 0 ? cfg.reps : doc.value("reps", kDefaultReps);
    const double default_alpha = doc.value("alpha", 0.05);

    std::vector<ScenarioConfig> scenarios;
    for (const nlohmann::json& node : doc.at("scenarios")) {
      ScenarioConfig sc;
      sc.sizes = node.at("sizes").get<std::vector<int>>();
      sc.g = static_cast<int>(sc.sizes.size());
      sc.r = node.at("r").get<int>();
      sc.scenario_id = node.value("id", static_cast<int>(scenarios.size()));
      sc.cov = covariance_from_json(node.value("covariance", nlohmann::json::object()), sc.r, sc.g);
      const std::string treatment = node.value("treatment", "categorical");
      if (treatment != "categorical" && treatment != "continuous")
        throw ParseError("treatment must be 'categorical' or 'continuous', got '" + treatment + "'");
      sc.treatment =
          treatment == "categorical" ? GroupTreatment::Categorical : GroupTreatment::Continuous;
      const std::string convention = node.value("convention", "software");
      if (convention != "software" && convention != "paper")
        throw ParseError("convention must be 'software' or 'paper', got '" + convention + "'");
      sc.convention = convention == "software" ? Convention::Software : Convention::Paper;
      sc.reps = cfg.reps > 0 ? cfg.reps : node.value("reps", default_reps);
      sc.alpha = node.value("alpha", default_alpha);
      sc.master_seed = seed;
      if (node.contains("means"))
        for (const nlohmann::json& mean : node.at("means")) sc.means.push_back(to_vector(mean));
      scenarios.push_back(std::move(sc));
    }
    if (scenarios.empty()) throw ParseError("config '" + path + "': no scenarios");
    return scenarios;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("config '" + path + "': " + e.what());
  }
}

RunConfig parse_args(const std::vector<std::string>& args) {
  RunConfig cfg;

  CLI::App app{"MANOVA group tests with a Monte Carlo harness for their type I error"};
  app.name("mvtest");
  app.require_subcommand(1);

  const std::map<std::string, Convention> conventions{{"software", Convention::Software},
                                                      {"paper", Convention::Paper}};
  const std::map<std::string, GroupTreatment> treatments{
      {"categorical", GroupTreatment::Categorical}, {"continuous", GroupTreatment::Continuous}};
  const std::map<std::string, OutputFormat> formats{{"csv", OutputFormat::Csv},
                                                    {"json", OutputFormat::Json},
                                                    {"pretty", OutputFormat::Pretty}};

  std::string seed_text;

  CLI::App* sim = app.add_subcommand("simulate", "Estimate rejection rates over a scenario grid");
  std::string preset_list;
  for (const std::string& p : preset_names()) preset_list += "\n  " + p;
  auto* preset_opt = sim->add_option("--preset", cfg.preset, "Named scenario grid:" + preset_list);
  auto* config_opt =
      sim->add_option("--config", cfg.config_path, "JSON scenario file (see README for schema)");
  preset_opt->excludes(config_opt);
  sim->add_option("--seed", seed_text, "Master RNG seed (default: MVTEST_SEED, then 12345)");
  sim->add_option("--reps", cfg.reps, "Replicates per scenario (default 10000)")
      ->check(CLI::PositiveNumber);
  sim->add_option("--alpha", cfg.alpha, "Nominal level (default 0.05)")
      ->check(CLI::Range(1e-9, 1.0 - 1e-9));
  sim->add_option("--workers", cfg.workers, "Worker threads (default: hardware threads)")
      ->check(CLI::PositiveNumber);
  sim->add_option("--out", cfg.output_path, "Output file (default stdout)");
  auto* sim_fmt = sim->add_option("--format", cfg.format, "csv, json or pretty")
                      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
  sim->add_option("--convention", cfg.convention,
                  "F mapping: software (per-statistic df) or paper (shared df)")
      ->transform(CLI::CheckedTransformer(conventions, CLI::ignore_case));

  CLI::App* ana = app.add_subcommand("analyze", "Run the four tests on a grouped CSV");
  ana->add_option("--input", cfg.input_path, "CSV with one group column and numeric responses")
      ->required();
  ana->add_option("--group-col", cfg.group_column, "Group column name (default 'group')");
  ana->add_option("--treatment", cfg.treatment,
                  "How the group variable enters the model (default categorical)")
      ->transform(CLI::CheckedTransformer(treatments, CLI::ignore_case));
  ana->add_option("--convention", cfg.convention,
                  "F mapping: software (per-statistic df) or paper (shared df)")
      ->transform(CLI::CheckedTransformer(conventions, CLI::ignore_case));
  ana->add_option("--out", cfg.output_path, "Output file (default stdout)");
  auto* ana_fmt = ana->add_option("--format", cfg.format, "csv, json or pretty")
                      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    const auto parsed = app.get_subcommands();
    throw HelpRequested{parsed.empty() ? app.help() : parsed.front()->help()};
  } catch (const CLI::ParseError& e) {
    throw UsageError(std::string(e.what()) + " (try 'mvtest --help')");
  }

  if (sim->parsed()) {
    cfg.mode = RunConfig::Mode::Simulate;
    if (cfg.preset.empty() == cfg.config_path.empty())
      throw UsageError("simulate needs exactly one of --preset or --config");
    cfg.format_given = sim_fmt->count() > 0;
    if (sim->count("--workers") == 0) {
      const unsigned hw = std::thread::hardware_concurrency();
      cfg.workers = hw > 0 ? static_cast<int>(hw) : 1;
    }
  } else {
    cfg.mode = RunConfig::Mode::Analyze;
    cfg.format_given = ana_fmt->count() > 0;
  }

  if (!seed_text.empty()) {
    cfg.seed = parse_seed_text(seed_text, "--seed");
    cfg.seed_given = true;
  } else if (const char* env = std::getenv("MVTEST_SEED"); env && *env) {
    cfg.seed = parse_seed_text(env, "MVTEST_SEED");
    cfg.seed_given = true;
  } else {
    cfg.seed = kDefaultSeed;
  }
  return cfg;
}

int run_cli(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::ofstream file;
  std::ostream* sink = &out;
  OutputFormat format = cfg.format;
  if (!cfg.output_path.empty()) {
    if (!cfg.format_given) format = infer_format(cfg.output_path);
    file.open(cfg.output_path);
    if (!file) throw IoError("cannot open '" + cfg.output_path + "' for writing");
    sink = &file;
  }

  if (cfg.mode == RunConfig::Mode::Simulate) {
    std::vector<ScenarioConfig> scenarios;
    if (!cfg.preset.empty()) {
      scenarios = preset_tables(cfg.preset, cfg.seed, cfg.reps > 0 ? cfg.reps : kDefaultReps);
      for (ScenarioConfig& sc : scenarios) {
        sc.convention = cfg.convention;
        sc.alpha = cfg.alpha;
      }
    } else {
      scenarios = load_config_scenarios(cfg.config_path, cfg);
    }

    if (std::any_of(scenarios.begin(), scenarios.end(), [](const ScenarioConfig& sc) {
          return sc.treatment == GroupTreatment::Continuous;
        }))
      print_continuous_notice(err, nullptr);

    long total_reps = 0;
    for (const ScenarioConfig& sc : scenarios) total_reps += sc.reps;
    err << "running " << scenarios.size() << " scenarios, " << total_reps << " replicates total, "
        << cfg.workers << " worker(s), seed " << scenarios.front().master_seed << "\n";

    const SimulationTable table = run_suite(scenarios, cfg.workers);
    for (std::size_t i = 0; i < table.scenarios.size(); ++i)
      if (table.singular_failures[i] > 0)
        err << "warning: scenario " << table.scenarios[i].scenario_id << " had "
            << table.singular_failures[i] << " singular replicate(s), counted as non-rejections\n";
    write_simulation_table(*sink, table, format);
  } else {
    std::vector<std::string> labels;
    const GroupedDataset data = read_grouped_csv(cfg.input_path, cfg.group_column, &labels);
    if (cfg.treatment == GroupTreatment::Continuous) print_continuous_notice(err, &labels);
    const ManovaResult result = cfg.treatment == GroupTreatment::Categorical
                                    ? manova_test(data, cfg.convention)
                                    : regression_test(data, cfg.convention);
    write_manova_result(*sink, result, format);
  }

  if (sink == &file && !file.good()) throw IoError("failed while writing '" + cfg.output_path + "'");
  return 0;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  try {
    const RunConfig cfg = parse_args(args);
    return run_cli(cfg, out, err);
  } catch (const HelpRequested& help) {
    out << help.text;
    return 0;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace mvtest
