#include "vecscope/embedding.hpp"

#include <cmath>
#include <numeric>

#include "vecscope/error.hpp"

namespace vecscope {

OovError::OovError(std::vector<std::string> missing, const std::string& context)
    : Error([&] {
        std::string msg = context.empty() ? "" : context + ": ";
        msg += "out-of-vocabulary token";
        msg += missing.size() == 1 ? ": " : "s: ";
        for (std::size_t i = 0; i < missing.size(); ++i) {
          if (i > 0) msg += ", ";
          msg += '"' + missing[i] + '"';
        }
        return msg;
      }()),
      missing_(std::move(missing)) {}

bool Vector::all_finite() const {
  for (double x : data_) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

double dot(std::span<const double> a, std::span<const double> b) {
  require_same_dim(a.size(), b.size(), "dot product");
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double squared_norm(std::span<const double> a) {
  return std::inner_product(a.begin(), a.end(), a.begin(), 0.0);
}

double norm(std::span<const double> a) { return std::sqrt(squared_norm(a)); }

void require_same_dim(std::size_t a, std::size_t b, std::string_view context) {
  if (a != b) {
    throw DimensionError("dimension mismatch in " + std::string(context) + ": " +
                         std::to_string(a) + " vs " + std::to_string(b));
  }
}

Vector operator+(const Vector& a, const Vector& b) {
  require_same_dim(a.dim(), b.dim(), "addition");
  std::vector<double> out(a.dim());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] + b[i];
  return Vector(std::move(out));
}

Vector operator-(const Vector& a, const Vector& b) {
  require_same_dim(a.dim(), b.dim(), "subtraction");
  std::vector<double> out(a.dim());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] - b[i];
  return Vector(std::move(out));
}

Vector operator*(double scale, const Vector& v) {
  std::vector<double> out(v.dim());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = scale * v[i];
  return Vector(std::move(out));
}

Embedding::Embedding(std::string name, Vector vector, std::optional<std::string> derivation)
    : name_(std::move(name)), vector_(std::move(vector)), derivation_(std::move(derivation)) {
  if (name_.empty()) throw InvalidArgument("embedding name must be non-empty");
  if (vector_.dim() == 0) throw InvalidArgument("embedding '" + name_ + "' has no components");
}

Embedding Embedding::renamed(std::string name) const {
  return Embedding(std::move(name), vector_, derivation_);
}

EmbeddingSet::EmbeddingSet(std::vector<Embedding> items) {
  items_.reserve(items.size());
  for (auto& e : items) add(std::move(e));
}

void EmbeddingSet::add(Embedding e) {
  if (index_.contains(e.name())) {
    throw InvalidArgument("duplicate embedding name in set: \"" + e.name() + '"');
  }
  if (items_.empty()) {
    dim_ = e.dim();
  } else {
    require_same_dim(dim_, e.dim(), "embedding set member \"" + e.name() + '"');
  }
  index_.emplace(e.name(), items_.size());
  items_.push_back(std::move(e));
}

const Embedding& EmbeddingSet::at(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) throw OovError({std::string(name)});
  return items_[it->second];
}

bool EmbeddingSet::contains(std::string_view name) const {
  return index_.contains(std::string(name));
}

std::optional<std::size_t> EmbeddingSet::index_of(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

}  // namespace vecscope
