#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <string>
#include <vector>

#include "vecscope/embedding.hpp"
#include "vecscope/retrieval.hpp"

namespace vecscope {

// Reduced-space view of a set. `reduced` holds every input member in
// component coordinates (same names, same order) followed by k axis
// pseudo-embeddings "<method>_0" .. "<method>_(k-1)", each a standard basis
// vector, so they can be used as plot axes.
struct TransformResult {
  std::string method;
  std::size_t k = 0;
  EmbeddingSet reduced;
  // PCA: variance along each component (n - 1 denominator), descending.
  // Empty for MDS.
  std::vector<double> explained_variance;
  // PCA: k x dim matrix whose rows are the unit component directions.
  Eigen::MatrixXd components;
};

// Centres the members and projects them on the top-k principal directions.
// Each direction is oriented so its largest-magnitude entry is positive.
TransformResult pca_transform(const EmbeddingSet& set, std::size_t k);

// Classical (Torgerson) scaling of the pairwise `metric` distances.
TransformResult mds_transform(const EmbeddingSet& set, std::size_t k, Metric metric);

// Flips `column` in place so its largest-magnitude entry is positive;
// entries within 1e-9 relative of the maximum count as ties and the lowest
// index wins. Returns true when the column was flipped.
bool orient_by_largest_entry(Eigen::Ref<Eigen::VectorXd> column);

}  // namespace vecscope
