#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "vecscope/embedding.hpp"

namespace vecscope {

enum class StoreFormat { kAuto, kWord2VecText, kGloveText };

StoreFormat parse_store_format(std::string_view name);
std::string_view to_string(StoreFormat format);

// Immutable token -> vector table of uniform dimension, in file order.
class VectorStore {
 public:
  // Throws InvalidArgument on duplicate tokens or ragged rows; use
  // load_store() for the first-occurrence-wins file semantics.
  VectorStore(std::string label, std::size_t dim, std::vector<std::string> tokens,
              std::vector<double> row_major);

  const std::string& label() const { return label_; }
  // Same table under another label.
  VectorStore relabeled(std::string label) && {
    label_ = std::move(label);
    return std::move(*this);
  }
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return tokens_.size(); }

  const std::string& token(std::size_t i) const { return tokens_[i]; }
  const std::vector<std::string>& tokens() const { return tokens_; }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * dim_, dim_};
  }

  bool contains(std::string_view token) const;
  std::optional<std::size_t> index_of(std::string_view token) const;

  // Rows dropped during load because their token had already appeared.
  std::size_t duplicate_count() const { return duplicates_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  friend VectorStore load_store(const std::filesystem::path&, StoreFormat);

  std::string label_;
  std::size_t dim_;
  std::vector<std::string> tokens_;
  std::vector<double> data_;
  std::unordered_map<std::string, std::size_t> index_;
  std::size_t duplicates_ = 0;
  std::vector<std::string> warnings_;
};

// `auto` picks word2vec_text iff the first line is exactly two base-10
// integers. Label defaults to the file name without extension.
VectorStore load_store(const std::filesystem::path& path, StoreFormat format = StoreFormat::kAuto);

// Values are written with 17 significant digits.
void save_store(const VectorStore& store, const std::filesystem::path& path, StoreFormat format);

// Throws OovError. Derivation is absent.
Embedding lookup(const VectorStore& store, std::string_view token);

// Sum of the whitespace-separated token vectors; named by the trimmed phrase.
Embedding embed_phrase(const VectorStore& store, std::string_view phrase);

// Each spec is an arithmetic expression; results keep input order.
EmbeddingSet get_set(const VectorStore& store, std::span<const std::string> specs);

// Row i is embed_phrase(store, texts[i]).
Eigen::MatrixXd featurize(const VectorStore& store, std::span<const std::string> texts);

}  // namespace vecscope
