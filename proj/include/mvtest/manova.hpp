#pragma once

#include <array>
#include <string>
#include <vector>

#include "mvtest/dataset.hpp"
#include "mvtest/numkernel.hpp"

namespace mvtest {

enum class StatisticKind { Wilks = 0, Pillai = 1, HotellingLawley = 2, Roy = 3 };

inline constexpr std::array<StatisticKind, 4> kStatisticOrder = {
    StatisticKind::Wilks, StatisticKind::Pillai, StatisticKind::HotellingLawley,
    StatisticKind::Roy};

// Short token used in CSV/JSON ("Wilks", "Pillai", "Lawley", "Roy").
std::string statistic_token(StatisticKind kind);
// Long display name ("Wilks' Lambda", ...), as statistics packages print it.
std::string statistic_display_name(StatisticKind kind);

// Which F reference table the p-values come from:
//  - Software: the per-statistic approximations used by R's summary.manova
//    and SAS PROC GLM (each statistic gets its own df pair).
//  - Paper: the simplified shared-df mapping some textbooks quote (one
//    (d1, d2) pair for Wilks/Pillai/Lawley, Roy on (g, d2)).
enum class Convention { Software = 0, Paper = 1 };

std::string convention_token(Convention c);

// How the grouping variable enters the model.
enum class GroupTreatment { Categorical = 0, Continuous = 1 };

std::string treatment_token(GroupTreatment t);

// Between-group (h) and within-group (e) SSCP matrices with their degrees of
// freedom: hypothesis_df = g - 1 (or 1 for the regression route),
// error_df = n_t - g (or n_t - 2).
struct SscpPair {
  Matrix h;
  Matrix e;
  int hypothesis_df = 0;
  int error_df = 0;
};

// The four classical test statistics plus the eigenvalues of E^{-1}H they
// are computed from (descending, nonnegative).
struct TestStatistics {
  Vector eigenvalues;
  double wilks = 0;    // prod 1/(1+l)
  double pillai = 0;   // sum l/(1+l)
  double lawley = 0;   // sum l
  double roy = 0;      // max l
};

// One statistic mapped to an F reference value.
struct FReport {
  StatisticKind kind{};
  double value = 0;
  double f = 0;
  double df1 = 0;
  double df2 = 0;
  double p = 1;
};

struct ManovaResult {
  SscpPair sscp;
  TestStatistics stats;
  std::array<FReport, 4> reports;  // in kStatisticOrder
  Convention convention = Convention::Software;
  GroupTreatment treatment = GroupTreatment::Categorical;
};

std::vector<Vector> group_means(const GroupedDataset& data);
Vector grand_mean(const GroupedDataset& data);

// H = sum_i n_i (m_i - m)(m_i - m)', E = sum_i sum_j (y_ij - m_i)(y_ij - m_i)'.
// Requires error df n_t - g >= r; fewer rows than that cannot yield a
// nonsingular E, reported as SingularError up front.
SscpPair compute_sscp(const GroupedDataset& data);

// The four statistics from the eigenvalues of E^{-1}H. Eigenvalues must be
// descending and nonnegative; entries beyond min(r, hypothesis_df) are
// mathematically zero (rank of H) and get zeroed, which removes eigensolver
// dust before it reaches the statistics.
TestStatistics stats_from_eigenvalues(const Vector& eigenvalues, int hypothesis_df);

// Software convention: p responses, q hypothesis df, v error df.
// DegenerateError when any statistic's df2 <= 0.
std::array<FReport, 4> f_approx_software(const TestStatistics& stats, int p, int q, int v);

// Paper convention: r responses, g groups, n_t total rows. d1 = r(g-1),
// d2 = n_t - g - r + 1 shared by Wilks/Pillai/Lawley; Roy on (g, d2).
// DegenerateError when d2 <= 0, when the Wilks exponent denominator
// r^2 + (g-1)^2 - 5 <= 0, or when Pillai >= 1 (F would be negative).
std::array<FReport, 4> f_approx_paper(const TestStatistics& stats, int r, int g, int n_t);

// Full pipeline, grouping variable treated as categorical (the actual MANOVA).
ManovaResult manova_test(const GroupedDataset& data, Convention convention = Convention::Software);

// Full pipeline, grouping variable treated as continuous: multivariate
// regression of the responses on the group codes 1..g. Under the software
// convention the four reports collapse to one identical F test.
ManovaResult regression_test(const GroupedDataset& data,
                             Convention convention = Convention::Software);

}  // namespace mvtest
