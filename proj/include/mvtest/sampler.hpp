#pragma once

#include <vector>

#include "mvtest/covariance.hpp"
#include "mvtest/dataset.hpp"
#include "mvtest/rng.hpp"

namespace mvtest {

// One draw from N(mean, L L') where chol factors the covariance.
// Consumes exactly r normal deviates from the stream, in component order.
Vector mvn_sample(RngState& rng, const Vector& mean, const CholeskyFactor& chol);

// Generate a grouped dataset: sizes[i] rows from group i's covariance (and
// mean, when given — pass an empty vector for all-zero means). Draw order is
// fixed: group by group, row by row, component by component, so a given
// stream always yields the same dataset.
GroupedDataset gen_dataset(const CovarianceSpec& spec, const std::vector<int>& sizes,
                           const std::vector<Vector>& means, RngState& rng);

}  // namespace mvtest
