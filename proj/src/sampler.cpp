#include "mvtest/sampler.hpp"

namespace mvtest {

Vector mvn_sample(RngState& rng, const Vector& mean, const CholeskyFactor& chol) {
  if (mean.size() != chol.dim())
    throw DimensionMismatch("mvn_sample: mean has " + std::to_string(mean.size()) +
                            " entries but factor is " + std::to_string(chol.dim()) + "-dimensional");
  Vector z(chol.dim());
  for (Index j = 0; j < z.size(); ++j) z[j] = std_normal(rng);
  return mean + chol.lower.template triangularView<Eigen::Lower>() * z;
}

GroupedDataset gen_dataset(const CovarianceSpec& spec, const std::vector<int>& sizes,
                           const std::vector<Vector>& means, RngState& rng) {
  if (static_cast<int>(sizes.size()) != spec.g)
    throw InvalidSpec("gen_dataset: " + std::to_string(sizes.size()) + " group sizes for " +
                      std::to_string(spec.g) + " groups");
  if (!means.empty() && means.size() != sizes.size())
    throw InvalidSpec("gen_dataset: means must be empty or have one vector per group");

  GroupedDataset data;
  data.groups.reserve(sizes.size());
  const Vector zero = Vector::Zero(spec.r);
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] < 1)
      throw InvalidSpec("gen_dataset: group " + std::to_string(i + 1) + " has size " +
                        std::to_string(sizes[i]));
    const Vector& mean = means.empty() ? zero : means[i];
    if (mean.size() != spec.r)
      throw InvalidSpec("gen_dataset: mean for group " + std::to_string(i + 1) + " has " +
                        std::to_string(mean.size()) + " entries, expected " + std::to_string(spec.r));
    const CholeskyFactor chol = cholesky(build_cov(spec, static_cast<int>(i)));
    Matrix block(sizes[i], spec.r);
    for (Index row = 0; row < block.rows(); ++row)
      block.row(row) = mvn_sample(rng, mean, chol).transpose();
    data.groups.push_back(std::move(block));
  }
  return data;
}

}  // namespace mvtest
