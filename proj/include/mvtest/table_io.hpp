#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mvtest/manova.hpp"
#include "mvtest/simlab.hpp"

namespace mvtest {

enum class OutputFormat { Csv, Json, Pretty };

// Simulation results. CSV columns:
//   scenario_id,n_sizes,cov_label,treatment,convention,statistic,
//   rejection_rate,mc_se,reps,alpha,seed
// JSON carries the same fields with the same rounded values (rates, alpha
// and p-values at 4 decimals, mc_se at 6), so the two formats agree
// field-for-field; pretty is a readable grid with one column per statistic.
void write_simulation_table(std::ostream& out, const SimulationTable& table, OutputFormat format);

// Single-analysis results. CSV columns: statistic,value,f,df1,df2,p.
void write_manova_result(std::ostream& out, const ManovaResult& result, OutputFormat format);

// Read a grouped dataset from CSV: one header row, one column holding the
// group label (arbitrary strings, matched exactly), every other column a
// numeric response. Groups are ordered by first appearance. When labels is
// non-null the distinct labels are written there in that order.
GroupedDataset read_grouped_csv(const std::string& path, const std::string& group_column,
                                std::vector<std::string>* labels = nullptr);

// "10-10-10" style rendering of group sizes.
std::string sizes_token(const std::vector<int>& sizes);

}  // namespace mvtest
