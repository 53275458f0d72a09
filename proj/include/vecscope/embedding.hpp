#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace vecscope {

// Dense vector of doubles. Dimension is fixed at construction.
class Vector {
 public:
  Vector() = default;
  explicit Vector(std::vector<double> components) : data_(std::move(components)) {}
  Vector(std::initializer_list<double> init) : data_(init) {}
  explicit Vector(std::span<const double> components)
      : data_(components.begin(), components.end()) {}

  static Vector zeros(std::size_t dim) { return Vector(std::vector<double>(dim, 0.0)); }

  std::size_t dim() const { return data_.size(); }
  double operator[](std::size_t i) const { return data_[i]; }
  double& operator[](std::size_t i) { return data_[i]; }

  std::span<const double> span() const { return data_; }
  const std::vector<double>& components() const { return data_; }

  auto begin() const { return data_.begin(); }
  auto end() const { return data_.end(); }

  bool all_finite() const;

  friend bool operator==(const Vector&, const Vector&) = default;

 private:
  std::vector<double> data_;
};

double dot(std::span<const double> a, std::span<const double> b);
double squared_norm(std::span<const double> a);
double norm(std::span<const double> a);

// Componentwise. Throw DimensionError on mismatch.
Vector operator+(const Vector& a, const Vector& b);
Vector operator-(const Vector& a, const Vector& b);
Vector operator*(double scale, const Vector& v);

void require_same_dim(std::size_t a, std::size_t b, std::string_view context);

// A named vector. `derivation` holds the expression text that produced it,
// when it was produced by arithmetic rather than a plain lookup.
class Embedding {
 public:
  Embedding(std::string name, Vector vector, std::optional<std::string> derivation = {});

  const std::string& name() const { return name_; }
  const Vector& vector() const { return vector_; }
  std::size_t dim() const { return vector_.dim(); }
  const std::optional<std::string>& derivation() const { return derivation_; }

  // Text that reparses to this embedding: the derivation when present,
  // otherwise the name (a plain token).
  const std::string& expression() const { return derivation_ ? *derivation_ : name_; }

  Embedding renamed(std::string name) const;

 private:
  std::string name_;
  Vector vector_;
  std::optional<std::string> derivation_;
};

// Ordered, uniquely named collection of equal-dimension embeddings.
class EmbeddingSet {
 public:
  EmbeddingSet() = default;
  explicit EmbeddingSet(std::vector<Embedding> items);

  // Throws InvalidArgument on a duplicate name, DimensionError on a dim
  // mismatch with existing members.
  void add(Embedding e);

  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  // 0 while empty.
  std::size_t dim() const { return dim_; }

  const Embedding& operator[](std::size_t i) const { return items_[i]; }
  const Embedding& at(std::string_view name) const;
  bool contains(std::string_view name) const;
  std::optional<std::size_t> index_of(std::string_view name) const;

  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }
  const std::vector<Embedding>& items() const { return items_; }

 private:
  std::vector<Embedding> items_;
  std::unordered_map<std::string, std::size_t> index_;
  std::size_t dim_ = 0;
};

}  // namespace vecscope
