#include "mvtest/manova.hpp"

#include <algorithm>
#include <cmath>

#include "mvtest/special_functions.hpp"

namespace mvtest {

std::string statistic_token(StatisticKind kind) {
  switch (kind) {
    case StatisticKind::Wilks: return "Wilks";
    case StatisticKind::Pillai: return "Pillai";
    case StatisticKind::HotellingLawley: return "Lawley";
    case StatisticKind::Roy: return "Roy";
  }
  return "?";
}

std::string statistic_display_name(StatisticKind kind) {
  switch (kind) {
    case StatisticKind::Wilks: return "Wilks' Lambda";
    case StatisticKind::Pillai: return "Pillai's Trace";
    case StatisticKind::HotellingLawley: return "Hotelling-Lawley Trace";
    case StatisticKind::Roy: return "Roy's Greatest Root";
  }
  return "?";
}

std::string convention_token(Convention c) {
  return c == Convention::Software ? "software" : "paper";
}

std::string treatment_token(GroupTreatment t) {
  return t == GroupTreatment::Categorical ? "categorical" : "continuous";
}

std::vector<Vector> group_means(const GroupedDataset& data) {
  validate_dataset(data);
  std::vector<Vector> means;
  means.reserve(data.groups.size());
  for (const Matrix& block : data.groups)
    means.push_back(block.colwise().mean().transpose());
  return means;
}

Vector grand_mean(const GroupedDataset& data) {
  validate_dataset(data);
  Vector sum = Vector::Zero(data.response_count());
  for (const Matrix& block : data.groups) sum += block.colwise().sum().transpose();
  return sum / static_cast<double>(data.total_rows());
}

SscpPair compute_sscp(const GroupedDataset& data) {
  validate_dataset(data);
  const Index r = data.response_count();
  const Index g = data.group_count();
  const Index n_t = data.total_rows();
  if (n_t - g < r)
    throw SingularError("compute_sscp: error df " + std::to_string(n_t - g) +
                        " is below the response count " + std::to_string(r) +
                        "; E cannot be nonsingular");

  const Vector grand = grand_mean(data);
  SscpPair out;
  out.h = Matrix::Zero(r, r);
  out.e = Matrix::Zero(r, r);
  out.hypothesis_df = static_cast<int>(g) - 1;
  out.error_df = static_cast<int>(n_t - g);
  for (const Matrix& block : data.groups) {
    const Vector mean = block.colwise().mean().transpose();
    const Matrix centered = block.rowwise() - mean.transpose();
    out.e.noalias() += centered.transpose() * centered;
    const Vector d = mean - grand;
    out.h.noalias() += static_cast<double>(block.rows()) * d * d.transpose();
  }
  return out;
}

TestStatistics stats_from_eigenvalues(const Vector& eigenvalues, int hypothesis_df) {
  if (eigenvalues.size() < 1) throw DomainError("stats_from_eigenvalues: no eigenvalues");
  if (hypothesis_df < 1)
    throw DomainError("stats_from_eigenvalues: hypothesis df must be >= 1");
  for (Index i = 0; i < eigenvalues.size(); ++i) {
    if (!(eigenvalues[i] >= 0))
      throw DomainError("stats_from_eigenvalues: eigenvalue " + std::to_string(i) +
                        " is negative or NaN");
    if (i > 0 && eigenvalues[i] > eigenvalues[i - 1])
      throw DomainError("stats_from_eigenvalues: eigenvalues not in descending order");
  }

  TestStatistics stats;
  stats.eigenvalues = eigenvalues;
  // rank(E^{-1}H) <= min(r, hypothesis df); anything past that is dust
  const Index rank_cap = std::min<Index>(eigenvalues.size(), hypothesis_df);
  for (Index i = rank_cap; i < stats.eigenvalues.size(); ++i) stats.eigenvalues[i] = 0.0;

  stats.wilks = 1.0;
  for (Index i = 0; i < stats.eigenvalues.size(); ++i) {
    const double l = stats.eigenvalues[i];
    stats.wilks /= 1.0 + l;
    stats.pillai += l / (1.0 + l);
    stats.lawley += l;
  }
  stats.roy = stats.eigenvalues[0];
  return stats;
}

namespace {

FReport make_report(StatisticKind kind, double value, double f, double df1, double df2) {
  if (df2 <= 0)
    throw DegenerateError("f approximation: " + statistic_token(kind) + " df2 = " +
                          std::to_string(df2) + " <= 0 for this design");
  FReport rep;
  rep.kind = kind;
  rep.value = value;
  rep.f = f;
  rep.df1 = df1;
  rep.df2 = df2;
  rep.p = f_sf(f, df1, df2);
  return rep;
}

}  // namespace

std::array<FReport, 4> f_approx_software(const TestStatistics& stats, int p, int q, int v) {
  if (p < 1 || q < 1 || v < 1)
    throw DomainError("f_approx_software: p, q, v must all be >= 1");

  const double pd = p, qd = q, vd = v;
  const double s = std::min(pd, qd);
  const double m = (std::abs(pd - qd) - 1.0) / 2.0;
  const double n0 = (vd - pd - 1.0) / 2.0;

  std::array<FReport, 4> out;

  // Rao's approximation for Wilks
  {
    const double t_den = pd * pd + qd * qd - 5.0;
    const double t = t_den > 0 ? std::sqrt((pd * pd * qd * qd - 4.0) / t_den) : 1.0;
    const double w = vd + qd - (pd + qd + 1.0) / 2.0;
    const double df1 = pd * qd;
    const double df2 = w * t - (pd * qd - 2.0) / 2.0;
    const double lam_root = std::pow(stats.wilks, 1.0 / t);
    const double f = (1.0 - lam_root) / lam_root * df2 / df1;
    out[0] = make_report(StatisticKind::Wilks, stats.wilks, f, df1, df2);
  }
  // Pillai
  {
    const double df1 = s * (2.0 * m + s + 1.0);
    const double df2 = s * (2.0 * n0 + s + 1.0);
    const double f = stats.pillai / (s - stats.pillai) * df2 / df1;
    out[1] = make_report(StatisticKind::Pillai, stats.pillai, f, df1, df2);
  }
  // Hotelling-Lawley
  {
    const double df1 = s * (2.0 * m + s + 1.0);
    const double df2 = 2.0 * (s * n0 + 1.0);
    const double f = stats.lawley / s * df2 / df1;
    out[2] = make_report(StatisticKind::HotellingLawley, stats.lawley, f, df1, df2);
  }
  // Roy's upper bound
  {
    const double df1 = std::max(pd, qd);
    const double df2 = vd - df1 + qd;
    const double f = stats.roy * df2 / df1;
    out[3] = make_report(StatisticKind::Roy, stats.roy, f, df1, df2);
  }
  return out;
}

std::array<FReport, 4> f_approx_paper(const TestStatistics& stats, int r, int g, int n_t) {
  if (r < 1 || g < 2) throw DomainError("f_approx_paper: requires r >= 1 and g >= 2");

  const double rd = r, gd = g;
  const double d1 = rd * (gd - 1.0);
  const double d2 = static_cast<double>(n_t) - gd - rd + 1.0;
  if (d2 <= 0)
    throw DegenerateError("f_approx_paper: d2 = " + std::to_string(d2) + " <= 0 for this design");
  const double s_den = rd * rd + (gd - 1.0) * (gd - 1.0) - 5.0;
  if (s_den <= 0)
    throw DegenerateError("f_approx_paper: Wilks exponent undefined for r = " + std::to_string(r) +
                          ", g = " + std::to_string(g));
  const double s = std::sqrt((rd * rd * (gd - 1.0) * (gd - 1.0) - 4.0) / s_den);
  if (stats.pillai >= 1.0)
    throw DegenerateError("f_approx_paper: Pillai trace " + std::to_string(stats.pillai) +
                          " >= 1 maps to a negative F in this convention");

  std::array<FReport, 4> out;
  const double lam_root = std::pow(stats.wilks, 1.0 / s);
  out[0] = make_report(StatisticKind::Wilks, stats.wilks,
                       (1.0 - lam_root) / lam_root * d2 / d1, d1, d2);
  out[1] = make_report(StatisticKind::Pillai, stats.pillai,
                       stats.pillai / (1.0 - stats.pillai) * d2 / d1, d1, d2);
  out[2] = make_report(StatisticKind::HotellingLawley, stats.lawley, stats.lawley * d2 / d1, d1, d2);
  out[3] = make_report(StatisticKind::Roy, stats.roy, stats.roy * d2 / gd, gd, d2);
  return out;
}

namespace {

ManovaResult assemble(SscpPair sscp, Convention convention, GroupTreatment treatment,
                      int r, int g_effective, int n_t) {
  Vector eigs;
  try {
    eigs = eig_product(sscp.e, sscp.h);
  } catch (const NotPositiveDefinite& e) {
    throw SingularError(std::string("error SSCP matrix is singular: ") + e.what());
  }

  ManovaResult result;
  result.stats = stats_from_eigenvalues(eigs, sscp.hypothesis_df);
  result.reports = convention == Convention::Software
                       ? f_approx_software(result.stats, r, sscp.hypothesis_df, sscp.error_df)
                       : f_approx_paper(result.stats, r, g_effective, n_t);
  result.sscp = std::move(sscp);
  result.convention = convention;
  result.treatment = treatment;
  return result;
}

}  // namespace

ManovaResult manova_test(const GroupedDataset& data, Convention convention) {
  const int r = static_cast<int>(data.response_count());
  const int g = static_cast<int>(data.group_count());
  const int n_t = static_cast<int>(data.total_rows());
  return assemble(compute_sscp(data), convention, GroupTreatment::Categorical, r, g, n_t);
}

ManovaResult regression_test(const GroupedDataset& data, Convention convention) {
  validate_dataset(data);
  const Index r = data.response_count();
  const Index n_t = data.total_rows();
  if (n_t - 2 < r)
    throw SingularError("regression_test: error df " + std::to_string(n_t - 2) +
                        " is below the response count " + std::to_string(r));

  // flatten to (code, row) pairs with group codes 1..g
  Vector x(n_t);
  Matrix y(n_t, r);
  Index at = 0;
  for (std::size_t i = 0; i < data.groups.size(); ++i) {
    const Matrix& block = data.groups[i];
    x.segment(at, block.rows()).setConstant(static_cast<double>(i + 1));
    y.middleRows(at, block.rows()) = block;
    at += block.rows();
  }

  const double x_mean = x.mean();
  const Vector xc = x.array() - x_mean;
  const double sxx = xc.squaredNorm();
  if (sxx <= static_cast<double>(n_t) * 1e-12)
    throw SingularError("regression_test: group codes have no variation");

  const Matrix yc = y.rowwise() - y.colwise().mean();
  const Vector sxy = yc.transpose() * xc;       // sum (x_k - xbar)(y_k - ybar)
  const Vector slope = sxy / sxx;

  SscpPair sscp;
  sscp.h = sxy * sxy.transpose() / sxx;          // rank-1 fitted SSCP
  const Matrix resid = yc - xc * slope.transpose();
  sscp.e = resid.transpose() * resid;
  sscp.hypothesis_df = 1;
  sscp.error_df = static_cast<int>(n_t) - 2;

  // the shared-df convention's formulas read group count = hypothesis df + 1
  return assemble(std::move(sscp), convention, GroupTreatment::Continuous,
                  static_cast<int>(r), 2, static_cast<int>(n_t));
}

}  // namespace mvtest
