#include "vecscope/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "vecscope/error.hpp"

namespace vecscope {

Metric parse_metric(std::string_view name) {
  if (name == "cosine") return Metric::kCosine;
  if (name == "euclidean") return Metric::kEuclidean;
  throw InvalidArgument("unknown metric '" + std::string(name) + "' (expected cosine or euclidean)");
}

std::string_view to_string(Metric metric) {
  return metric == Metric::kCosine ? "cosine" : "euclidean";
}

double cosine_distance(std::span<const double> a, std::span<const double> b) {
  require_same_dim(a.size(), b.size(), "cosine distance");
  const double aa = squared_norm(a);
  const double bb = squared_norm(b);
  if (aa == 0.0 || bb == 0.0) {
    throw ZeroAxisError("cosine distance is undefined for a zero-norm vector");
  }
  const double sim = dot(a, b) / (std::sqrt(aa) * std::sqrt(bb));
  return std::clamp(1.0 - sim, 0.0, 2.0);
}

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
  require_same_dim(a.size(), b.size(), "euclidean distance");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

double distance(Metric metric, std::span<const double> a, std::span<const double> b) {
  return metric == Metric::kCosine ? cosine_distance(a, b) : euclidean_distance(a, b);
}

namespace {

struct Candidate {
  double distance;
  std::size_t index;
};

// Brute-force scan; `row(i)` and `name(i)` describe the source.
template <typename RowFn, typename NameFn, typename MakeFn>
Neighbors rank(std::size_t count, std::size_t dim, RowFn row, NameFn name, MakeFn make,
               const Embedding& query, std::size_t n, Metric metric, const Exclusions& exclude) {
  if (count == 0) throw InvalidArgument("cannot search an empty source");
  if (n == 0) throw InvalidArgument("number of neighbours must be at least 1");
  require_same_dim(query.dim(), dim, "similarity query");
  const auto q = query.vector().span();
  if (metric == Metric::kCosine && squared_norm(q) == 0.0) {
    throw ZeroAxisError("cosine similarity query \"" + query.name() + "\" has zero norm");
  }

  Neighbors out;
  std::vector<Candidate> candidates;
  candidates.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    if (!exclude.empty() && exclude.contains(name(i))) continue;
    const auto r = row(i);
    if (metric == Metric::kCosine && squared_norm(r) == 0.0) {
      ++out.skipped_zero_norm;
      continue;
    }
    candidates.push_back({distance(metric, q, r), i});
  }

  const auto by_distance = [](const Candidate& a, const Candidate& b) {
    return a.distance < b.distance || (a.distance == b.distance && a.index < b.index);
  };
  const std::size_t keep = std::min(n, candidates.size());
  std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(keep),
                    candidates.end(), by_distance);
  out.items.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) {
    out.items.push_back({make(candidates[i].index), candidates[i].distance});
  }
  return out;
}

}  // namespace

Neighbors score_similar(const VectorStore& source, const Embedding& query, std::size_t n,
                        Metric metric, const Exclusions& exclude) {
  return rank(
      source.size(), source.dim(), [&](std::size_t i) { return source.row(i); },
      [&](std::size_t i) -> const std::string& { return source.token(i); },
      [&](std::size_t i) { return Embedding(source.token(i), Vector(source.row(i))); }, query, n,
      metric, exclude);
}

Neighbors score_similar(const EmbeddingSet& source, const Embedding& query, std::size_t n,
                        Metric metric, const Exclusions& exclude) {
  return rank(
      source.size(), source.dim(), [&](std::size_t i) { return source[i].vector().span(); },
      [&](std::size_t i) -> const std::string& { return source[i].name(); },
      [&](std::size_t i) { return source[i]; }, query, n, metric, exclude);
}

Neighbors analogy(const VectorStore& store, std::span<const std::string> positive,
                  std::span<const std::string> negative, std::size_t n, Metric metric,
                  bool exclude_inputs) {
  if (positive.empty()) throw InvalidArgument("analogy needs at least one positive token");

  std::vector<std::string> missing;
  for (const auto* list : {&positive, &negative}) {
    for (const auto& t : *list) {
      if (!store.contains(t) && std::find(missing.begin(), missing.end(), t) == missing.end()) {
        missing.push_back(t);
      }
    }
  }
  if (!missing.empty()) throw OovError(std::move(missing));

  Vector query = Vector::zeros(store.dim());
  std::string name;
  for (const auto& t : positive) {
    query = query + lookup(store, t).vector();
    name += (name.empty() ? "" : " + ") + t;
  }
  for (const auto& t : negative) {
    query = query - lookup(store, t).vector();
    name += " - " + t;
  }

  Exclusions exclude;
  if (exclude_inputs) {
    exclude.insert(positive.begin(), positive.end());
    exclude.insert(negative.begin(), negative.end());
  }
  return score_similar(store, Embedding(name, std::move(query)), n, metric, exclude);
}

DistanceMatrix distance_matrix(const EmbeddingSet& set, Metric metric) {
  if (set.empty()) throw InvalidArgument("cannot build a distance matrix over an empty set");
  if (metric == Metric::kCosine) {
    for (const auto& e : set) {
      if (squared_norm(e.vector().span()) == 0.0) {
        throw ZeroAxisError("cosine distance undefined: \"" + e.name() + "\" has zero norm");
      }
    }
  }
  const auto n = static_cast<Eigen::Index>(set.size());
  DistanceMatrix out{{}, Eigen::MatrixXd::Zero(n, n), metric};
  out.labels.reserve(set.size());
  for (const auto& e : set) out.labels.push_back(e.name());
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto vi = set[static_cast<std::size_t>(i)].vector().span();
    out.values(i, i) = distance(metric, vi, vi);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double d = distance(metric, vi, set[static_cast<std::size_t>(j)].vector().span());
      out.values(i, j) = d;
      out.values(j, i) = d;
    }
  }
  return out;
}

}  // namespace vecscope
