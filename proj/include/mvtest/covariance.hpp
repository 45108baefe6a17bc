#pragma once

#include <string>
#include <vector>

#include "mvtest/numkernel.hpp"

namespace mvtest {

// Per-group covariance structure for r response variables and g groups.
// Identity and SharedDiagonal describe the homogeneous designs (every group
// shares one matrix); the *PerGroup kinds and Explicit give each group its
// own matrix for the heterogeneous designs.
struct CovarianceSpec {
  enum class Kind { Identity, SharedDiagonal, ScaledIdentityPerGroup, ToeplitzPerGroup, Explicit };

  Kind kind = Kind::Identity;
  int r = 0;
  int g = 0;
  Vector diag_values;         // SharedDiagonal: r variances
  Vector sigma2_per_group;    // ScaledIdentityPerGroup: g scale factors
  double toeplitz_sigma2 = 1.0;
  Vector rho_per_group;       // ToeplitzPerGroup: g correlation decays
  std::vector<Matrix> covs;   // Explicit: g full matrices

  static CovarianceSpec identity(int r, int g);
  static CovarianceSpec shared_diagonal(const Vector& variances, int g);
  static CovarianceSpec scaled_identity(const Vector& sigma2s, int r);
  static CovarianceSpec toeplitz(double sigma2, const Vector& rhos, int r);
  static CovarianceSpec explicit_per_group(std::vector<Matrix> covariances);
};

// Materialize the covariance matrix of one group (0-based index).
// Throws InvalidSpec when the structure violates its constraints (sizes,
// strict positivity, |rho| < 1, explicit matrices not SPD).
Matrix build_cov(const CovarianceSpec& spec, int group_index);

// Short human/CSV label: "identity", "diag(1,4,9)", "scaled-identity(1,4,9)",
// "toeplitz(rho=0.75,0.5,0.25)", "explicit".
std::string cov_label(const CovarianceSpec& spec);

}  // namespace mvtest
