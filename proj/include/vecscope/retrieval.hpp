#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "vecscope/embedding.hpp"
#include "vecscope/vecstore.hpp"

namespace vecscope {

enum class Metric { kCosine, kEuclidean };

Metric parse_metric(std::string_view name);
std::string_view to_string(Metric metric);

// 1 - cos(a, b), clamped to [0, 2]. Zero-norm input throws ZeroAxisError.
double cosine_distance(std::span<const double> a, std::span<const double> b);
double euclidean_distance(std::span<const double> a, std::span<const double> b);
double distance(Metric metric, std::span<const double> a, std::span<const double> b);

struct ScoredNeighbor {
  Embedding embedding;
  double distance;
};

struct Neighbors {
  std::vector<ScoredNeighbor> items;
  // Candidates skipped because they have zero norm under the cosine metric.
  std::size_t skipped_zero_norm = 0;
};

// Names (tokens) never returned as neighbours.
using Exclusions = std::unordered_set<std::string>;

// Ascending distance, ties in source order. The query's own token is kept.
Neighbors score_similar(const VectorStore& source, const Embedding& query, std::size_t n,
                        Metric metric, const Exclusions& exclude = {});
Neighbors score_similar(const EmbeddingSet& source, const Embedding& query, std::size_t n,
                        Metric metric, const Exclusions& exclude = {});

// Query = sum(positive) - sum(negative).
Neighbors analogy(const VectorStore& store, std::span<const std::string> positive,
                  std::span<const std::string> negative, std::size_t n, Metric metric,
                  bool exclude_inputs = true);

struct DistanceMatrix {
  std::vector<std::string> labels;
  Eigen::MatrixXd values;
  Metric metric;
};

DistanceMatrix distance_matrix(const EmbeddingSet& set, Metric metric);

}  // namespace vecscope
