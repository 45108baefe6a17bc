#pragma once

#include <numeric>
#include <vector>

#include "mvtest/numkernel.hpp"

namespace mvtest {

// Grouped multivariate responses: groups[i] holds the n_i x r observation
// block of group i. Group order is meaningful (it defines the 1..g codes the
// continuous treatment regresses on).
struct GroupedDataset {
  std::vector<Matrix> groups;

  Index group_count() const { return static_cast<Index>(groups.size()); }
  Index response_count() const { return groups.empty() ? 0 : groups.front().cols(); }
  Index total_rows() const {
    Index n = 0;
    for (const Matrix& block : groups) n += block.rows();
    return n;
  }
};

// Structural contract shared by every analysis entry point: at least two
// groups, at least two responses, no empty group, consistent column counts.
inline void validate_dataset(const GroupedDataset& data) {
  if (data.group_count() < 2)
    throw DomainError("dataset: needs at least 2 groups, got " + std::to_string(data.group_count()));
  const Index r = data.response_count();
  if (r < 2)
    throw DomainError("dataset: needs at least 2 response variables, got " + std::to_string(r));
  for (std::size_t i = 0; i < data.groups.size(); ++i) {
    if (data.groups[i].rows() < 1)
      throw DomainError("dataset: group " + std::to_string(i + 1) + " is empty");
    if (data.groups[i].cols() != r)
      throw DimensionMismatch("dataset: group " + std::to_string(i + 1) + " has " +
                              std::to_string(data.groups[i].cols()) + " columns, expected " +
                              std::to_string(r));
  }
}

}  // namespace mvtest
