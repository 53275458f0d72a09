#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <unistd.h>
#include <vector>

#include "vecscope/embedding.hpp"
#include "vecscope/vecstore.hpp"

namespace testing {

inline constexpr const char* kToyWord2Vec =
    "4 2\n"
    "man 0.5 0.1\n"
    "woman 0.5 0.6\n"
    "king 0.7 0.33\n"
    "queen 0.7 0.9\n";

inline vecscope::VectorStore toy_store() {
  return vecscope::VectorStore("toy", 2, {"man", "woman", "king", "queen"},
                               {0.5, 0.1, 0.5, 0.6, 0.7, 0.33, 0.7, 0.9});
}

// Scratch directory unique to this process, removed at exit.
class TempDir {
 public:
  TempDir() {
    path_ = std::filesystem::temp_directory_path() /
            ("vecscope-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter()++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

  std::filesystem::path write(const std::string& name, const std::string& content) const {
    auto p = path_ / name;
    std::ofstream(p, std::ios::binary) << content;
    return p;
  }

  std::string read(const std::string& name) const {
    std::ifstream in(path_ / name, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  }

 private:
  static int& counter() {
    static int c = 0;
    return c;
  }
  std::filesystem::path path_;
};

// Seeded generator for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : eng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
  std::size_t index(std::size_t lo, std::size_t hi_inclusive) {
    return std::uniform_int_distribution<std::size_t>(lo, hi_inclusive)(eng_);
  }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(eng_); }

  // Mix of magnitudes so tests see more than unit-scale data.
  std::vector<double> vec(std::size_t dim) {
    const double scale = std::pow(10.0, uniform(-3.0, 3.0));
    std::vector<double> v(dim);
    for (auto& x : v) x = scale * uniform(-1.0, 1.0);
    return v;
  }

  vecscope::Vector vector(std::size_t dim) { return vecscope::Vector(vec(dim)); }

  std::string token(std::size_t i) { return "w" + std::to_string(i); }

  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

// Random store of n rows; values drawn from a small grid now and then so
// distance ties actually occur.
inline vecscope::VectorStore random_store(Gen& g, std::size_t n, std::size_t dim,
                                          bool with_zero_rows = false) {
  std::vector<std::string> tokens;
  std::vector<double> values;
  const bool grid = g.coin(0.3);
  for (std::size_t i = 0; i < n; ++i) {
    tokens.push_back(g.token(i));
    const bool zero = with_zero_rows && g.coin(0.05);
    for (std::size_t d = 0; d < dim; ++d) {
      double v = grid ? static_cast<double>(g.index(0, 4)) - 2.0 : g.uniform(-1.0, 1.0);
      values.push_back(zero ? 0.0 : v);
    }
  }
  return vecscope::VectorStore("random", dim, std::move(tokens), std::move(values));
}

inline bool close(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

inline bool all_close(const vecscope::Vector& a, const std::vector<double>& b, double tol) {
  if (a.dim() != b.size()) return false;
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (!close(a[i], b[i], tol)) return false;
  }
  return true;
}

}  // namespace testing
