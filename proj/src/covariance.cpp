#include "mvtest/covariance.hpp"

#include <cmath>
#include <cstdio>
#include <utility>

namespace mvtest {

namespace {

// %g-style compact number for labels: 1 -> "1", 0.75 -> "0.75"
std::string compact(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

std::string joined(const Vector& v) {
  std::string out;
  for (Index i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += compact(v[i]);
  }
  return out;
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw InvalidSpec("covariance spec: " + msg);
}

}  // namespace

CovarianceSpec CovarianceSpec::identity(int r, int g) {
  CovarianceSpec spec;
  spec.kind = Kind::Identity;
  spec.r = r;
  spec.g = g;
  return spec;
}

CovarianceSpec CovarianceSpec::shared_diagonal(const Vector& variances, int g) {
  CovarianceSpec spec;
  spec.kind = Kind::SharedDiagonal;
  spec.r = static_cast<int>(variances.size());
  spec.g = g;
  spec.diag_values = variances;
  return spec;
}

CovarianceSpec CovarianceSpec::scaled_identity(const Vector& sigma2s, int r) {
  CovarianceSpec spec;
  spec.kind = Kind::ScaledIdentityPerGroup;
  spec.r = r;
  spec.g = static_cast<int>(sigma2s.size());
  spec.sigma2_per_group = sigma2s;
  return spec;
}

CovarianceSpec CovarianceSpec::toeplitz(double sigma2, const Vector& rhos, int r) {
  CovarianceSpec spec;
  spec.kind = Kind::ToeplitzPerGroup;
  spec.r = r;
  spec.g = static_cast<int>(rhos.size());
  spec.toeplitz_sigma2 = sigma2;
  spec.rho_per_group = rhos;
  return spec;
}

CovarianceSpec CovarianceSpec::explicit_per_group(std::vector<Matrix> covariances) {
  CovarianceSpec spec;
  spec.kind = Kind::Explicit;
  spec.g = static_cast<int>(covariances.size());
  spec.r = covariances.empty() ? 0 : static_cast<int>(covariances.front().rows());
  spec.covs = std::move(covariances);
  return spec;
}

Matrix build_cov(const CovarianceSpec& spec, int group_index) {
  require(spec.r >= 1, "needs at least one response variable");
  require(spec.g >= 1, "needs at least one group");
  require(group_index >= 0 && group_index < spec.g,
          "group index " + std::to_string(group_index) + " outside [0, " + std::to_string(spec.g) + ")");

  switch (spec.kind) {
    case CovarianceSpec::Kind::Identity:
      return Matrix::Identity(spec.r, spec.r);

    case CovarianceSpec::Kind::SharedDiagonal: {
      require(spec.diag_values.size() == spec.r, "diagonal length must equal r");
      require((spec.diag_values.array() > 0).all(), "diagonal variances must be > 0");
      return spec.diag_values.asDiagonal();
    }

    case CovarianceSpec::Kind::ScaledIdentityPerGroup: {
      require(spec.sigma2_per_group.size() == spec.g, "needs one sigma^2 per group");
      require((spec.sigma2_per_group.array() > 0).all(), "sigma^2 must be > 0");
      return spec.sigma2_per_group[group_index] * Matrix::Identity(spec.r, spec.r);
    }

    case CovarianceSpec::Kind::ToeplitzPerGroup: {
      require(spec.rho_per_group.size() == spec.g, "needs one rho per group");
      require(spec.toeplitz_sigma2 > 0, "sigma^2 must be > 0");
      require((spec.rho_per_group.array().abs() < 1).all(), "|rho| must be < 1");
      const double rho = spec.rho_per_group[group_index];
      Matrix cov(spec.r, spec.r);
      for (Index j = 0; j < spec.r; ++j)
        for (Index k = 0; k < spec.r; ++k)
          cov(j, k) = spec.toeplitz_sigma2 * std::pow(rho, std::abs(static_cast<double>(j - k)));
      return cov;
    }

    case CovarianceSpec::Kind::Explicit: {
      require(static_cast<int>(spec.covs.size()) == spec.g, "needs one matrix per group");
      const Matrix& cov = spec.covs[group_index];
      require(cov.rows() == spec.r && cov.cols() == spec.r, "explicit matrix must be r x r");
      try {
        cholesky(cov);  // symmetry + positive definiteness in one shot
      } catch (const Error& e) {
        throw InvalidSpec("covariance spec: explicit matrix for group " +
                          std::to_string(group_index) + " is not SPD (" + e.what() + ")");
      }
      return cov;
    }
  }
  throw InvalidSpec("covariance spec: unknown kind");
}

std::string cov_label(const CovarianceSpec& spec) {
  switch (spec.kind) {
    case CovarianceSpec::Kind::Identity:
      return "identity";
    case CovarianceSpec::Kind::SharedDiagonal:
      return "diag(" + joined(spec.diag_values) + ")";
    case CovarianceSpec::Kind::ScaledIdentityPerGroup:
      return "scaled-identity(" + joined(spec.sigma2_per_group) + ")";
    case CovarianceSpec::Kind::ToeplitzPerGroup: {
      std::string label = "toeplitz(rho=" + joined(spec.rho_per_group);
      if (spec.toeplitz_sigma2 != 1.0) label += ";sigma2=" + compact(spec.toeplitz_sigma2);
      return label + ")";
    }
    case CovarianceSpec::Kind::Explicit:
      return "explicit";
  }
  return "unknown";
}

}  // namespace mvtest
