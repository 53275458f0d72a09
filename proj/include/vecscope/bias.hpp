#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vecscope/embedding.hpp"
#include "vecscope/retrieval.hpp"
#include "vecscope/vecstore.hpp"

namespace vecscope {

using TokenPair = std::pair<std::string, std::string>;

struct BiasAxis {
  // Mean of (first - second) over the pairs, named "bias_axis(<k> pairs)".
  Embedding axis;
  std::vector<TokenPair> source_pairs;
  // Sum of the pair differences as an expression. Rejection is scale
  // invariant, so rejecting on this is the same as rejecting on `axis`.
  std::string direction_expression;
};

// Throws OovError, InvalidArgument (no pairs) or ZeroAxisError (the
// differences cancel out).
BiasAxis build_bias_axis(const VectorStore& store, std::span<const TokenPair> pairs);

// Rejects every member on the axis. Member names are kept so the debiased
// set can be queried by the same tokens; derivations record the rejection.
EmbeddingSet debias_set(const EmbeddingSet& set, const BiasAxis& axis);

// One "(a - b)" embedding per pair, in pair order.
EmbeddingSet pair_difference_set(const VectorStore& store, std::span<const TokenPair> pairs);

struct OverlapReport {
  std::string token;
  std::size_t n = 0;
  std::vector<std::string> before;
  std::vector<std::string> after;
  double jaccard = 0.0;
};

// Jaccard overlap of the top-n neighbour names of `token` in two spaces.
// The token itself is part of each list.
OverlapReport neighborhood_overlap(const VectorStore& before, const EmbeddingSet& after,
                                   const std::string& token, std::size_t n, Metric metric);
OverlapReport neighborhood_overlap(const EmbeddingSet& before, const EmbeddingSet& after,
                                   const std::string& token, std::size_t n, Metric metric);

double jaccard(std::span<const std::string> a, std::span<const std::string> b);

// Two-column CSV "token_a,token_b"; blank lines and lines starting with '#'
// are skipped. Throws FormatError naming the line.
std::vector<TokenPair> parse_pairs_csv(std::string_view content);

}  // namespace vecscope
