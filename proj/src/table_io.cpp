#include "mvtest/table_io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace mvtest {

namespace {

std::string fixed(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

// degrees of freedom are usually integers but Rao's df2 can be fractional
std::string df_token(double df) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", df);
  return buf;
}

// the JSON writers emit the value the CSV string parses back to, which is
// what makes the two formats field-for-field identical
double reparse(const std::string& token) { return std::stod(token); }

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

bool parse_double(const std::string& token, double& out) {
  const char* begin = token.data();
  const char* end = begin + token.size();
  const auto res = std::from_chars(begin, end, out);
  return res.ec == std::errc() && res.ptr == end;
}

struct SimRowView {
  const ScenarioConfig* cfg;
  const RejectionRow* row;
};

std::vector<SimRowView> join_rows(const SimulationTable& table) {
  std::vector<SimRowView> views;
  views.reserve(table.rows.size());
  for (const RejectionRow& row : table.rows) {
    const auto it = std::find_if(table.scenarios.begin(), table.scenarios.end(),
                                 [&row](const ScenarioConfig& c) {
                                   return c.scenario_id == row.scenario_id;
                                 });
    if (it == table.scenarios.end())
      throw DomainError("write_simulation_table: row references unknown scenario_id " +
                        std::to_string(row.scenario_id));
    views.push_back({&*it, &row});
  }
  return views;
}

void write_simulation_csv(std::ostream& out, const SimulationTable& table) {
  out << "scenario_id,n_sizes,cov_label,treatment,convention,statistic,"
         "rejection_rate,mc_se,reps,alpha,seed\n";
  for (const SimRowView& v : join_rows(table)) {
    out << v.row->scenario_id << ',' << sizes_token(v.cfg->sizes) << ',' << cov_label(v.cfg->cov)
        << ',' << treatment_token(v.cfg->treatment) << ',' << convention_token(v.cfg->convention)
        << ',' << statistic_token(v.row->statistic) << ',' << fixed(v.row->rejection_rate, 4)
        << ',' << fixed(v.row->mc_se, 6) << ',' << v.row->reps << ',' << fixed(v.row->alpha, 4)
        << ',' << v.cfg->master_seed << '\n';
  }
}

void write_simulation_json(std::ostream& out, const SimulationTable& table) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const SimRowView& v : join_rows(table)) {
    nlohmann::ordered_json row;
    row["scenario_id"] = v.row->scenario_id;
    row["n_sizes"] = sizes_token(v.cfg->sizes);
    row["cov_label"] = cov_label(v.cfg->cov);
    row["treatment"] = treatment_token(v.cfg->treatment);
    row["convention"] = convention_token(v.cfg->convention);
    row["statistic"] = statistic_token(v.row->statistic);
    row["rejection_rate"] = reparse(fixed(v.row->rejection_rate, 4));
    row["mc_se"] = reparse(fixed(v.row->mc_se, 6));
    row["reps"] = v.row->reps;
    row["alpha"] = reparse(fixed(v.row->alpha, 4));
    row["seed"] = v.cfg->master_seed;
    rows.push_back(std::move(row));
  }
  nlohmann::ordered_json doc;
  doc["rows"] = std::move(rows);
  out << doc.dump(2) << '\n';
}

void write_simulation_pretty(std::ostream& out, const SimulationTable& table) {
  if (table.scenarios.empty()) {
    out << "(empty simulation table)\n";
    return;
  }
  const ScenarioConfig& first = table.scenarios.front();
  out << "Estimated rejection rates (alpha = " << fixed(first.alpha, 2) << ", reps = "
      << first.reps << ", seed = " << first.master_seed << ", convention = "
      << convention_token(first.convention) << ")\n";

  // group scenarios into blocks sharing covariance + treatment
  std::string current_block;
  for (const ScenarioConfig& cfg : table.scenarios) {
    const std::string block = cov_label(cfg.cov) + " covariance, " +
                              treatment_token(cfg.treatment) + " treatment";
    if (block != current_block) {
      current_block = block;
      out << '\n' << block << '\n';
      out << "  " << std::string(16, ' ');
      char head[16];
      for (StatisticKind kind : kStatisticOrder) {
        std::snprintf(head, sizeof head, "%10s", statistic_token(kind).c_str());
        out << head;
      }
      out << '\n';
    }
    char sizes_buf[20];
    std::snprintf(sizes_buf, sizeof sizes_buf, "%-16s", ("(" + sizes_token(cfg.sizes) + ")").c_str());
    out << "  " << sizes_buf;
    for (StatisticKind kind : kStatisticOrder) {
      const auto it = std::find_if(table.rows.begin(), table.rows.end(),
                                   [&cfg, kind](const RejectionRow& row) {
                                     return row.scenario_id == cfg.scenario_id &&
                                            row.statistic == kind;
                                   });
      if (it == table.rows.end())
        throw DomainError("write_simulation_table: missing row for scenario " +
                          std::to_string(cfg.scenario_id));
      out << "    " << fixed(it->rejection_rate, 4);
    }
    out << '\n';
  }
}

void write_result_csv(std::ostream& out, const ManovaResult& result) {
  out << "statistic,value,f,df1,df2,p\n";
  for (const FReport& rep : result.reports)
    out << statistic_token(rep.kind) << ',' << fixed(rep.value, 4) << ',' << fixed(rep.f, 4)
        << ',' << df_token(rep.df1) << ',' << df_token(rep.df2) << ',' << fixed(rep.p, 4) << '\n';
}

void write_result_json(std::ostream& out, const ManovaResult& result) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const FReport& rep : result.reports) {
    nlohmann::ordered_json row;
    row["statistic"] = statistic_token(rep.kind);
    row["value"] = reparse(fixed(rep.value, 4));
    row["f"] = reparse(fixed(rep.f, 4));
    row["df1"] = reparse(df_token(rep.df1));
    row["df2"] = reparse(df_token(rep.df2));
    row["p"] = reparse(fixed(rep.p, 4));
    rows.push_back(std::move(row));
  }
  nlohmann::ordered_json doc;
  doc["treatment"] = treatment_token(result.treatment);
  doc["convention"] = convention_token(result.convention);
  doc["rows"] = std::move(rows);
  out << doc.dump(2) << '\n';
}

void write_result_pretty(std::ostream& out, const ManovaResult& result) {
  out << "Multivariate tests (" << treatment_token(result.treatment) << " treatment, "
      << convention_token(result.convention) << " convention)\n\n";
  char line[128];
  std::snprintf(line, sizeof line, "%-24s %9s %9s %8s %8s %9s\n", "Statistic", "Value",
                "F Value", "Num DF", "Den DF", "Pr > F");
  out << line;
  for (const FReport& rep : result.reports) {
    std::snprintf(line, sizeof line, "%-24s %9s %9s %8s %8s %9s\n",
                  statistic_display_name(rep.kind).c_str(), fixed(rep.value, 4).c_str(),
                  fixed(rep.f, 4).c_str(), df_token(rep.df1).c_str(), df_token(rep.df2).c_str(),
                  fixed(rep.p, 4).c_str());
    out << line;
  }
}

}  // namespace

std::string sizes_token(const std::vector<int>& sizes) {
  std::string out;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (i) out += '-';
    out += std::to_string(sizes[i]);
  }
  return out;
}

void write_simulation_table(std::ostream& out, const SimulationTable& table, OutputFormat format) {
  switch (format) {
    case OutputFormat::Csv: return write_simulation_csv(out, table);
    case OutputFormat::Json: return write_simulation_json(out, table);
    case OutputFormat::Pretty: return write_simulation_pretty(out, table);
  }
}

void write_manova_result(std::ostream& out, const ManovaResult& result, OutputFormat format) {
  switch (format) {
    case OutputFormat::Csv: return write_result_csv(out, result);
    case OutputFormat::Json: return write_result_json(out, result);
    case OutputFormat::Pretty: return write_result_pretty(out, result);
  }
}

GroupedDataset read_grouped_csv(const std::string& path, const std::string& group_column,
                                std::vector<std::string>* labels) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");

  std::string line;
  std::size_t line_no = 0;

  // header
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      header = split_csv_line(line);
      break;
    }
  }
  if (header.empty()) throw ParseError("'" + path + "': no header row found", 1);

  std::size_t group_idx = header.size();
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == group_column) {
      group_idx = i;
      break;
    }
  if (group_idx == header.size()) {
    double ignored;
    const bool all_numeric = std::all_of(header.begin(), header.end(),
                                         [&ignored](const std::string& cell) {
                                           return parse_double(cell, ignored);
                                         });
    if (all_numeric)
      throw ParseError("'" + path + "' row 1 looks like data, not a header; the first row must "
                       "name the columns", 1);
    std::string cols;
    for (const std::string& h : header) cols += (cols.empty() ? "" : ", ") + h;
    throw ParseError("'" + path + "': no column named '" + group_column + "' (columns: " + cols +
                     ")", 1);
  }
  if (header.size() < 3)
    throw ParseError("'" + path + "': needs at least two response columns besides '" +
                     group_column + "'", 1);

  std::vector<std::string> group_order;
  std::vector<std::vector<Vector>> rows_by_group;
  const std::size_t r = header.size() - 1;

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != header.size())
      throw ParseError("'" + path + "' row " + std::to_string(line_no) + ": expected " +
                       std::to_string(header.size()) + " fields, got " +
                       std::to_string(cells.size()), line_no);

    Vector row(static_cast<Index>(r));
    Index at = 0;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c == group_idx) continue;
      double value;
      if (!parse_double(cells[c], value))
        throw NonNumericResponse("'" + path + "' row " + std::to_string(line_no) + ", column '" +
                                 header[c] + "': '" + cells[c] + "' is not a number",
                                 line_no, c + 1);
      row[at++] = value;
    }

    const std::string& label = cells[group_idx];
    auto it = std::find(group_order.begin(), group_order.end(), label);
    if (it == group_order.end()) {
      group_order.push_back(label);
      rows_by_group.emplace_back();
      it = std::prev(group_order.end());
    }
    rows_by_group[static_cast<std::size_t>(it - group_order.begin())].push_back(std::move(row));
  }

  if (group_order.size() < 2)
    throw TooFewGroups("'" + path + "': needs at least 2 distinct values in '" + group_column +
                       "', found " + std::to_string(group_order.size()));

  GroupedDataset data;
  data.groups.reserve(rows_by_group.size());
  for (const std::vector<Vector>& rows : rows_by_group) {
    Matrix block(static_cast<Index>(rows.size()), static_cast<Index>(r));
    for (std::size_t i = 0; i < rows.size(); ++i) block.row(static_cast<Index>(i)) = rows[i];
    data.groups.push_back(std::move(block));
  }
  validate_dataset(data);
  if (labels) *labels = group_order;
  return data;
}

}  // namespace mvtest
