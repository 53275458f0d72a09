#include "vecscope/bias.hpp"

#include <algorithm>
#include <unordered_set>

#include "vecscope/error.hpp"
#include "vecscope/expr.hpp"
#include "vecscope/text.hpp"

namespace vecscope {

namespace {

void require_tokens(const VectorStore& store, std::span<const TokenPair> pairs) {
  std::vector<std::string> missing;
  auto check = [&](const std::string& t) {
    if (!store.contains(t) && std::find(missing.begin(), missing.end(), t) == missing.end()) {
      missing.push_back(t);
    }
  };
  for (const auto& [a, b] : pairs) {
    check(a);
    check(b);
  }
  if (!missing.empty()) throw OovError(std::move(missing));
}

std::vector<std::string> top_names(const Neighbors& neighbors) {
  std::vector<std::string> names;
  names.reserve(neighbors.items.size());
  for (const auto& item : neighbors.items) names.push_back(item.embedding.name());
  return names;
}

template <typename Before>
OverlapReport overlap_impl(const Before& before, const Embedding& before_query,
                           const EmbeddingSet& after, const std::string& token, std::size_t n,
                           Metric metric) {
  if (!after.contains(token)) throw OovError({token}, "after space");
  OverlapReport report;
  report.token = token;
  report.n = n;
  report.before = top_names(score_similar(before, before_query, n, metric));
  report.after = top_names(score_similar(after, after.at(token), n, metric));
  report.jaccard = jaccard(report.before, report.after);
  return report;
}

}  // namespace

BiasAxis build_bias_axis(const VectorStore& store, std::span<const TokenPair> pairs) {
  if (pairs.empty()) throw InvalidArgument("a bias axis needs at least one word pair");
  require_tokens(store, pairs);

  std::vector<Vector> differences;
  differences.reserve(pairs.size());
  std::string direction;
  for (const auto& [a, b] : pairs) {
    differences.push_back(lookup(store, a).vector() - lookup(store, b).vector());
    const std::string term = "(" + a + " - " + b + ")";
    direction = direction.empty() ? term : "(" + direction + " + " + term + ")";
  }

  Embedding axis("bias_axis(" + std::to_string(pairs.size()) + " pairs)",
                 running_mean(differences));
  if (squared_norm(axis.vector().span()) == 0.0) {
    throw ZeroAxisError("bias axis has zero length: the pair differences cancel out");
  }
  return BiasAxis{std::move(axis), {pairs.begin(), pairs.end()}, std::move(direction)};
}

EmbeddingSet debias_set(const EmbeddingSet& set, const BiasAxis& axis) {
  EmbeddingSet out;
  for (const auto& member : set) {
    Embedding rejected = reject(member, axis.axis);
    out.add(Embedding(member.name(), rejected.vector(),
                      "(" + member.expression() + " | " + axis.direction_expression + ")"));
  }
  return out;
}

EmbeddingSet pair_difference_set(const VectorStore& store, std::span<const TokenPair> pairs) {
  require_tokens(store, pairs);
  EmbeddingSet out;
  for (const auto& [a, b] : pairs) {
    const std::string name = "(" + a + " - " + b + ")";
    out.add(Embedding(name, lookup(store, a).vector() - lookup(store, b).vector(), name));
  }
  return out;
}

double jaccard(std::span<const std::string> a, std::span<const std::string> b) {
  std::unordered_set<std::string> sa(a.begin(), a.end());
  std::unordered_set<std::string> sb(b.begin(), b.end());
  if (sa.empty() && sb.empty()) return 1.0;
  std::size_t shared = 0;
  for (const auto& x : sa) shared += sb.contains(x) ? 1 : 0;
  return static_cast<double>(shared) / static_cast<double>(sa.size() + sb.size() - shared);
}

OverlapReport neighborhood_overlap(const VectorStore& before, const EmbeddingSet& after,
                                   const std::string& token, std::size_t n, Metric metric) {
  if (!before.contains(token)) throw OovError({token}, "before space");
  return overlap_impl(before, lookup(before, token), after, token, n, metric);
}

OverlapReport neighborhood_overlap(const EmbeddingSet& before, const EmbeddingSet& after,
                                   const std::string& token, std::size_t n, Metric metric) {
  if (!before.contains(token)) throw OovError({token}, "before space");
  return overlap_impl(before, before.at(token), after, token, n, metric);
}

std::vector<TokenPair> parse_pairs_csv(std::string_view content) {
  std::vector<TokenPair> pairs;
  std::size_t line_no = 0;
  while (!content.empty()) {
    std::size_t nl = content.find('\n');
    std::string_view line = content.substr(0, nl);
    content = nl == std::string_view::npos ? std::string_view{} : content.substr(nl + 1);
    ++line_no;
    line = text::trim(line);
    if (line.empty() || line.front() == '#') continue;
    auto fields = text::split_list(line, ',');
    if (fields.size() != 2 || line.find(',') != line.rfind(',')) {
      throw FormatError("expected two comma-separated tokens 'token_a,token_b'", line_no);
    }
    pairs.emplace_back(std::move(fields[0]), std::move(fields[1]));
  }
  return pairs;
}

}  // namespace vecscope
