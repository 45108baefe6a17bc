#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "mvtest/manova.hpp"
#include "test_support.hpp"

using namespace mvtest;
using testsupport::make_dataset;
using testsupport::rand_matrix;

namespace {

// Fixed 3-group dataset (sizes 7/6/5, small integers) whose expected H, E,
// eigenvalues, and reports below were computed with an independent
// linear-algebra stack and frozen.
GroupedDataset golden_dataset() {
  Matrix b1(7, 3), b2(6, 3), b3(5, 3);
  b1 << 4, 9, 6, 3, 3, 7, 7, 9, 7, 8, 9, 8, 7, 6, 4, 0, 7, 0, 7, 6, 3;
  b2 << 5, 8, 8, 7, 5, 0, 0, 2, 8, 9, 6, 4, 9, 7, 3, 3, 8, 3;
  b3 << 0, 1, 0, 0, 6, 7, 7, 9, 3, 0, 7, 7, 7, 0, 5;
  return make_dataset({b1, b2, b3});
}

Vector eigs3(double a, double b, double c) {
  Vector v(3);
  v << a, b, c;
  return v;
}

constexpr double kTol = 1e-10;

void check_report(const FReport& rep, StatisticKind kind, double value, double f, double df1,
                  double df2, double p) {
  CHECK(rep.kind == kind);
  CHECK(rep.value == doctest::Approx(value).epsilon(kTol));
  CHECK(rep.f == doctest::Approx(f).epsilon(kTol));
  CHECK(rep.df1 == df1);
  CHECK(rep.df2 == df2);
  CHECK(rep.p == doctest::Approx(p).epsilon(kTol));
}

}  // namespace

TEST_CASE("tokens and display names") {
  CHECK(statistic_token(StatisticKind::Wilks) == "Wilks");
  CHECK(statistic_token(StatisticKind::Pillai) == "Pillai");
  CHECK(statistic_token(StatisticKind::HotellingLawley) == "Lawley");
  CHECK(statistic_token(StatisticKind::Roy) == "Roy");
  CHECK(statistic_display_name(StatisticKind::Wilks) == "Wilks' Lambda");
  CHECK(statistic_display_name(StatisticKind::Pillai) == "Pillai's Trace");
  CHECK(statistic_display_name(StatisticKind::HotellingLawley) == "Hotelling-Lawley Trace");
  CHECK(statistic_display_name(StatisticKind::Roy) == "Roy's Greatest Root");
  CHECK(convention_token(Convention::Software) == "software");
  CHECK(convention_token(Convention::Paper) == "paper");
  CHECK(treatment_token(GroupTreatment::Categorical) == "categorical");
  CHECK(treatment_token(GroupTreatment::Continuous) == "continuous");
}

TEST_CASE("group_means and grand_mean: closed form") {
  Matrix g1(2, 2), g2(1, 2);
  g1 << 0, 0, 2, 2;
  g2 << 4, 4;
  const GroupedDataset data = make_dataset({g1, g2});
  const std::vector<Vector> means = group_means(data);
  CHECK(means[0][0] == 1.0);
  CHECK(means[0][1] == 1.0);
  CHECK(means[1][0] == 4.0);
  CHECK(means[1][1] == 4.0);
  const Vector grand = grand_mean(data);
  CHECK(grand[0] == 2.0);
  CHECK(grand[1] == 2.0);
}

TEST_CASE("compute_sscp: equal group means give H = 0") {
  Matrix g1(2, 2), g2(2, 2);
  g1 << 1, 0, -1, 0;
  g2 << 0, 1, 0, -1;
  const SscpPair sscp = compute_sscp(make_dataset({g1, g2}));
  CHECK(sscp.h.isZero(1e-14));
  CHECK(sscp.e.isApprox(2 * Matrix::Identity(2, 2)));
  CHECK(sscp.hypothesis_df == 1);
  CHECK(sscp.error_df == 2);
}

TEST_CASE("compute_sscp: golden dataset") {
  const SscpPair sscp = compute_sscp(golden_dataset());
  Matrix h(3, 3), e(3, 3);
  h << 23.120634920634927, 16.400000000000006, 1.8777777777777742,
       16.400000000000006, 16.800000000000004, 4.1999999999999975,
       1.8777777777777742, 4.1999999999999975, 1.7444444444444447;
  e << 173.15714285714284, 28.6, -9.5999999999999979,
       28.6, 117.2, 16.8,
       -9.5999999999999979, 16.8, 132.53333333333336;
  CHECK((sscp.h - h).norm() <= 1e-12 * h.norm());
  CHECK((sscp.e - e).norm() <= 1e-12 * e.norm());
  CHECK(sscp.hypothesis_df == 2);
  CHECK(sscp.error_df == 15);
}

TEST_CASE("compute_sscp: H + E equals the total SSCP") {
  std::mt19937_64 rng(404);
  for (int trial = 0; trial < 20; ++trial) {
    const GroupedDataset data = make_dataset({rand_matrix(5, 3, rng), rand_matrix(7, 3, rng),
                                              rand_matrix(4, 3, rng)});
    const SscpPair sscp = compute_sscp(data);

    const Vector grand = grand_mean(data);
    Matrix total = Matrix::Zero(3, 3);
    for (const Matrix& block : data.groups) {
      const Matrix centered = block.rowwise() - grand.transpose();
      total += centered.transpose() * centered;
    }
    CHECK((sscp.h + sscp.e - total).norm() <= 1e-9 * total.norm());
  }
}

TEST_CASE("compute_sscp: too few rows for a nonsingular E") {
  std::mt19937_64 rng(7);
  const GroupedDataset data = make_dataset({rand_matrix(2, 3, rng), rand_matrix(2, 3, rng)});
  CHECK_THROWS_AS(compute_sscp(data), SingularError);  // error df 2 < 3 responses
}

TEST_CASE("stats_from_eigenvalues: closed forms") {
  const TestStatistics null_stats = stats_from_eigenvalues(eigs3(0, 0, 0), 2);
  CHECK(null_stats.wilks == 1.0);
  CHECK(null_stats.pillai == 0.0);
  CHECK(null_stats.lawley == 0.0);
  CHECK(null_stats.roy == 0.0);

  const TestStatistics ones = stats_from_eigenvalues(eigs3(1, 1, 1), 3);
  CHECK(ones.wilks == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(ones.pillai == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(ones.lawley == 3.0);
  CHECK(ones.roy == 1.0);

  const TestStatistics fix = stats_from_eigenvalues(eigs3(0.101518, 0.008144, 0), 2);
  CHECK(fix.wilks == doctest::Approx(0.90050438481330752).epsilon(1e-14));
  CHECK(fix.pillai == doctest::Approx(0.10024011852598814).epsilon(1e-14));
  CHECK(fix.lawley == doctest::Approx(0.109662).epsilon(1e-14));
  CHECK(fix.roy == 0.101518);
}

TEST_CASE("stats_from_eigenvalues: entries beyond the rank bound are dropped") {
  const TestStatistics stats = stats_from_eigenvalues(eigs3(1, 0.5, 0.25), 1);
  CHECK(stats.eigenvalues[1] == 0.0);
  CHECK(stats.eigenvalues[2] == 0.0);
  CHECK(stats.wilks == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(stats.pillai == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(stats.lawley == 1.0);
  CHECK(stats.roy == 1.0);
}

TEST_CASE("stats_from_eigenvalues: input validation") {
  CHECK_THROWS_AS(stats_from_eigenvalues(Vector(), 1), DomainError);
  CHECK_THROWS_AS(stats_from_eigenvalues(eigs3(1, 1, 1), 0), DomainError);
  CHECK_THROWS_AS(stats_from_eigenvalues(eigs3(1, -0.1, 0), 2), DomainError);
  CHECK_THROWS_AS(stats_from_eigenvalues(eigs3(0.1, 0.5, 0), 2), DomainError);  // ascending
}

TEST_CASE("f_approx_software: fixed-eigenvalue reference design") {
  // eigenvalues back-solved so that every (value, F, df, p) cell below agrees
  // with published MANOVA software output for p=3, q=2, v=47
  const TestStatistics stats = stats_from_eigenvalues(eigs3(0.101518, 0.008144, 0), 2);
  const std::array<FReport, 4> reports = f_approx_software(stats, 3, 2, 47);

  check_report(reports[0], StatisticKind::Wilks, 0.90050438481330752, 0.80695959326776923, 6, 90,
               0.56715119156552551);
  check_report(reports[1], StatisticKind::Pillai, 0.10024011852598814, 0.80905758970931518, 6, 92,
               0.56549763214094995);
  check_report(reports[2], StatisticKind::HotellingLawley, 0.109662, 0.8041879999999999, 6, 88,
               0.56931885589391551);
  check_report(reports[3], StatisticKind::Roy, 0.101518, 1.5566093333333333, 3, 46,
               0.21271646156118074);
}

TEST_CASE("f_approx_software: q = 1 collapses all four to one exact F test") {
  Vector lam(1);
  lam << 0.015574;
  const TestStatistics stats = stats_from_eigenvalues(lam, 1);
  const std::array<FReport, 4> reports = f_approx_software(stats, 3, 1, 48);
  for (const FReport& rep : reports) {
    CHECK(rep.f == doctest::Approx(0.23880133333333331).epsilon(1e-12));
    CHECK(rep.df1 == 3);
    CHECK(rep.df2 == 46);
    CHECK(rep.p == doctest::Approx(0.86883699444069529).epsilon(1e-12));
  }
  CHECK(reports[0].value == doctest::Approx(0.98466482993853721).epsilon(1e-14));
  CHECK(reports[1].value == doctest::Approx(0.015335170061462778).epsilon(1e-14));
  CHECK(reports[2].value == doctest::Approx(0.015574).epsilon(1e-14));
  CHECK(reports[3].value == doctest::Approx(0.015574).epsilon(1e-14));
}

TEST_CASE("f_approx_software: degenerate denominators") {
  const TestStatistics stats = stats_from_eigenvalues(eigs3(0.5, 0.25, 0), 2);
  // v = p = 3 with q = 2 puts the Lawley denominator at exactly zero
  CHECK_THROWS_AS(f_approx_software(stats, 3, 2, 3), DegenerateError);
  CHECK_THROWS_AS(f_approx_software(stats, 0, 2, 10), DomainError);
}

TEST_CASE("f_approx_paper: shared-df mapping for the same design") {
  const TestStatistics stats = stats_from_eigenvalues(eigs3(0.101518, 0.008144, 0), 2);
  const std::array<FReport, 4> reports = f_approx_paper(stats, 3, 3, 50);

  // d1 = 6 and d2 = 45 for Wilks/Pillai/Lawley; Roy moves to (g, d2) = (3, 45)
  check_report(reports[0], StatisticKind::Wilks, 0.90050438481330752, 0.40347979663388461, 6, 45,
               0.87282199614868716);
  check_report(reports[1], StatisticKind::Pillai, 0.10024011852598814, 0.83555724635476059, 6, 45,
               0.54900147150894096);
  check_report(reports[2], StatisticKind::HotellingLawley, 0.109662, 0.82246499999999989, 6, 45,
               0.55853514835478746);
  check_report(reports[3], StatisticKind::Roy, 0.101518, 1.5227700000000002, 3, 45,
               0.22152193043013854);
}

TEST_CASE("f_approx_paper: degenerate designs") {
  const TestStatistics stats = stats_from_eigenvalues(eigs3(0.1, 0.05, 0), 2);
  CHECK_THROWS_AS(f_approx_paper(stats, 3, 3, 5), DegenerateError);   // d2 = 0
  CHECK_THROWS_AS(f_approx_paper(stats, 1, 2, 50), DegenerateError);  // exponent denominator < 0

  const TestStatistics big = stats_from_eigenvalues(eigs3(9, 9, 0), 2);
  CHECK(big.pillai > 1.0);
  CHECK_THROWS_AS(f_approx_paper(big, 3, 3, 50), DegenerateError);    // F would be negative
}

TEST_CASE("manova_test: golden dataset, software convention") {
  const ManovaResult res = manova_test(golden_dataset());
  CHECK(res.convention == Convention::Software);
  CHECK(res.treatment == GroupTreatment::Categorical);
  CHECK(res.sscp.hypothesis_df == 2);
  CHECK(res.sscp.error_df == 15);

  CHECK(res.stats.eigenvalues[0] == doctest::Approx(0.21320817661786157).epsilon(kTol));
  CHECK(res.stats.eigenvalues[1] == doctest::Approx(0.033673269982820372).epsilon(kTol));
  CHECK(res.stats.eigenvalues[2] == 0.0);  // rank cap min(r, g-1) = 2

  check_report(res.reports[0], StatisticKind::Wilks, 0.7974094634708816, 0.51934388723227376, 6,
               26, 0.78827166170719098);
  check_report(res.reports[1], StatisticKind::Pillai, 0.20831547118347196, 0.54258372491780227, 6,
               28, 0.77129880284199148);
  check_report(res.reports[2], StatisticKind::HotellingLawley, 0.24688144660068195,
               0.49376289320136396, 6, 24, 0.80657675262169459);
  check_report(res.reports[3], StatisticKind::Roy, 0.21320817661786157, 0.99497149088335402, 3, 14,
               0.42381897463411267);
}

TEST_CASE("manova_test: equal group means give F = 0 and p = 1 on every report") {
  Matrix g1(3, 2), g2(3, 2);
  g1 << 1, 0, -1, 0, 0, 0;
  g2 << 0, 1, 0, -1, 0, 0;
  const ManovaResult res = manova_test(make_dataset({g1, g2}));
  for (const FReport& rep : res.reports) {
    CHECK(rep.f == 0.0);
    CHECK(rep.p == 1.0);
  }
}

TEST_CASE("manova_test: constant responses leave E singular") {
  const GroupedDataset data = make_dataset({Matrix::Ones(3, 2), Matrix::Ones(3, 2)});
  CHECK_THROWS_AS(manova_test(data), SingularError);
}

TEST_CASE("manova_test: v = p with q >= 2 degenerates the Lawley denominator") {
  std::mt19937_64 rng(11);
  const GroupedDataset data = make_dataset({rand_matrix(2, 3, rng), rand_matrix(2, 3, rng),
                                            rand_matrix(2, 3, rng)});
  CHECK_THROWS_AS(manova_test(data), DegenerateError);
}

TEST_CASE("manova_test: affine invariance of all four statistics") {
  std::mt19937_64 rng(2121);
  for (int trial = 0; trial < 10; ++trial) {
    const GroupedDataset data = make_dataset({rand_matrix(6, 3, rng), rand_matrix(5, 3, rng),
                                              rand_matrix(7, 3, rng)});
    Matrix a = rand_matrix(3, 3, rng) + 3 * Matrix::Identity(3, 3);  // comfortably nonsingular
    const Vector shift = rand_matrix(3, 1, rng);

    GroupedDataset mapped = data;
    for (Matrix& block : mapped.groups)
      block = ((block * a).rowwise() + shift.transpose()).eval();

    const ManovaResult base = manova_test(data);
    const ManovaResult moved = manova_test(mapped);
    CHECK(moved.stats.wilks == doctest::Approx(base.stats.wilks).epsilon(1e-9));
    CHECK(moved.stats.pillai == doctest::Approx(base.stats.pillai).epsilon(1e-9));
    CHECK(moved.stats.lawley == doctest::Approx(base.stats.lawley).epsilon(1e-9));
    CHECK(moved.stats.roy == doctest::Approx(base.stats.roy).epsilon(1e-9));
    for (int k = 0; k < 4; ++k)
      CHECK(moved.reports[k].p == doctest::Approx(base.reports[k].p).epsilon(1e-9));
  }
}

TEST_CASE("manova_test: scaling all responses leaves the eigenvalues alone") {
  std::mt19937_64 rng(333);
  const GroupedDataset data = make_dataset({rand_matrix(6, 3, rng), rand_matrix(6, 3, rng)});
  GroupedDataset scaled = data;
  for (Matrix& block : scaled.groups) block *= -7.5;

  const Vector base = manova_test(data).stats.eigenvalues;
  const Vector after = manova_test(scaled).stats.eigenvalues;
  CHECK((base - after).cwiseAbs().maxCoeff() <= 1e-12 * (1 + base[0]));
}

TEST_CASE("manova_test: statistic orderings and rank bound") {
  std::mt19937_64 rng(777);
  for (int trial = 0; trial < 20; ++trial) {
    const GroupedDataset data = make_dataset({rand_matrix(6, 4, rng), rand_matrix(5, 4, rng),
                                              rand_matrix(7, 4, rng)});
    const ManovaResult res = manova_test(data);
    CHECK(res.stats.pillai <= res.stats.lawley + 1e-12);
    CHECK(res.stats.roy <= res.stats.lawley + 1e-12);
    int above = 0;
    for (Index i = 0; i < res.stats.eigenvalues.size(); ++i)
      above += res.stats.eigenvalues[i] > 1e-9;
    CHECK(above <= 2);  // min(r, g-1) = min(4, 2)
  }
}

TEST_CASE("regression_test: golden dataset, software convention") {
  const ManovaResult res = regression_test(golden_dataset());
  CHECK(res.treatment == GroupTreatment::Continuous);
  CHECK(res.sscp.hypothesis_df == 1);
  CHECK(res.sscp.error_df == 16);

  CHECK(res.stats.eigenvalues[0] == doctest::Approx(0.18771777470685358).epsilon(kTol));
  CHECK(res.stats.eigenvalues[1] == 0.0);  // H has rank 1
  CHECK(res.stats.eigenvalues[2] == 0.0);

  CHECK(res.stats.wilks == doctest::Approx(0.84195085844094142).epsilon(kTol));
  CHECK(res.stats.pillai == doctest::Approx(0.15804914155905861).epsilon(kTol));
  CHECK(res.stats.lawley == doctest::Approx(0.18771777470685358).epsilon(kTol));
  CHECK(res.stats.roy == doctest::Approx(0.18771777470685358).epsilon(kTol));

  // all four reports collapse to the identical exact F test
  for (const FReport& rep : res.reports) {
    CHECK(rep.f == doctest::Approx(0.87601628196531678).epsilon(1e-12));
    CHECK(rep.df1 == 3);
    CHECK(rep.df2 == 14);
    CHECK(rep.p == doctest::Approx(0.47695827194183116).epsilon(1e-12));
  }
}

TEST_CASE("regression_test: paper convention moves only the Roy report") {
  const ManovaResult res = regression_test(golden_dataset(), Convention::Paper);
  for (int k = 0; k < 3; ++k) {
    CHECK(res.reports[k].f == doctest::Approx(0.87601628196531678).epsilon(1e-12));
    CHECK(res.reports[k].df1 == 3);
    CHECK(res.reports[k].df2 == 14);
  }
  check_report(res.reports[3], StatisticKind::Roy, 0.18771777470685358, 1.3140244229479752, 2, 14,
               0.29992123002732962);
}

TEST_CASE("regression_test: symmetric group means zero out the slope") {
  Matrix g1(2, 2), g2(2, 2), g3(2, 2);
  g1 << 2, 0, 0, 2;
  g2 << 5, 5, -5, -5;
  g3 << 2, 0, 0, 2;  // same mean as group 1, so the code-slope vanishes
  const ManovaResult res = regression_test(make_dataset({g1, g2, g3}));
  for (const FReport& rep : res.reports) {
    CHECK(rep.f == doctest::Approx(0.0));
    CHECK(rep.p == doctest::Approx(1.0));
  }
}

TEST_CASE("regression_test: four identical quadruples on random 3x3-group data") {
  std::mt19937_64 rng(808);
  for (int trial = 0; trial < 10; ++trial) {
    const GroupedDataset data = make_dataset({rand_matrix(20, 3, rng), rand_matrix(20, 3, rng),
                                              rand_matrix(10, 3, rng)});
    const ManovaResult res = regression_test(data);
    const FReport& first = res.reports[0];
    CHECK(first.df1 == 3);
    CHECK(first.df2 == 46);
    for (int k = 1; k < 4; ++k) {
      CHECK(std::abs(res.reports[k].f - first.f) <= 1e-12 * (1 + std::abs(first.f)));
      CHECK(res.reports[k].df1 == first.df1);
      CHECK(res.reports[k].df2 == first.df2);
      CHECK(std::abs(res.reports[k].p - first.p) <= 1e-12);
    }
  }
}

TEST_CASE("regression_test: too few rows") {
  std::mt19937_64 rng(5);
  const GroupedDataset data = make_dataset({rand_matrix(2, 3, rng), rand_matrix(2, 3, rng)});
  CHECK_THROWS_AS(regression_test(data), SingularError);  // error df 2 < 3 responses
}
