#include "vecscope/transforms.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>

#include "vecscope/error.hpp"

namespace vecscope {

namespace {

constexpr double kTieTolerance = 1e-9;

Eigen::MatrixXd as_matrix(const EmbeddingSet& set) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(set.size()), static_cast<Eigen::Index>(set.dim()));
  for (std::size_t r = 0; r < set.size(); ++r) {
    const auto& v = set[r].vector();
    for (std::size_t c = 0; c < v.dim(); ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v[c];
    }
  }
  return m;
}

EmbeddingSet assemble(const EmbeddingSet& set, const Eigen::MatrixXd& coords,
                      const std::string& method) {
  const auto k = static_cast<std::size_t>(coords.cols());
  EmbeddingSet out;
  for (std::size_t r = 0; r < set.size(); ++r) {
    std::vector<double> row(k);
    for (std::size_t c = 0; c < k; ++c) {
      row[c] = coords(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
    out.add(Embedding(set[r].name(), Vector(std::move(row))));
  }
  for (std::size_t axis = 0; axis < k; ++axis) {
    Vector basis = Vector::zeros(k);
    basis[axis] = 1.0;
    out.add(Embedding(method + "_" + std::to_string(axis), std::move(basis)));
  }
  return out;
}

}  // namespace

bool orient_by_largest_entry(Eigen::Ref<Eigen::VectorXd> column) {
  if (column.size() == 0) return false;
  const double largest = column.cwiseAbs().maxCoeff();
  if (largest == 0.0) return false;
  const double threshold = largest * (1.0 - kTieTolerance);
  for (Eigen::Index i = 0; i < column.size(); ++i) {
    if (std::abs(column(i)) >= threshold) {
      if (column(i) < 0.0) {
        column = -column;
        return true;
      }
      return false;
    }
  }
  return false;
}

TransformResult pca_transform(const EmbeddingSet& set, std::size_t k) {
  const std::size_t n = set.size();
  if (n < 2) throw InvalidArgument("PCA needs at least 2 members, got " + std::to_string(n));
  if (k == 0 || k > std::min(n, set.dim())) {
    throw InvalidArgument("PCA k=" + std::to_string(k) + " out of range [1, " +
                          std::to_string(std::min(n, set.dim())) + "]");
  }

  Eigen::MatrixXd centered = as_matrix(set);
  const Eigen::RowVectorXd mean = centered.colwise().mean();
  centered.rowwise() -= mean;

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& singular = svd.singularValues();
  const double tol = static_cast<double>(std::max(centered.rows(), centered.cols())) *
                     std::numeric_limits<double>::epsilon() *
                     (singular.size() > 0 ? singular(0) : 0.0);
  std::size_t rank = 0;
  for (Eigen::Index i = 0; i < singular.size(); ++i) {
    if (singular(i) > tol) ++rank;
  }
  if (k > rank) {
    throw RankError("PCA k=" + std::to_string(k) + " exceeds the rank " + std::to_string(rank) +
                    " of the centred data");
  }

  const auto kk = static_cast<Eigen::Index>(k);
  Eigen::MatrixXd directions = svd.matrixV().leftCols(kk);
  for (Eigen::Index c = 0; c < kk; ++c) orient_by_largest_entry(directions.col(c));
  const Eigen::MatrixXd coords = centered * directions;

  TransformResult out;
  out.method = "pca";
  out.k = k;
  out.reduced = assemble(set, coords, out.method);
  out.components = directions.transpose();
  out.explained_variance.reserve(k);
  for (Eigen::Index i = 0; i < kk; ++i) {
    out.explained_variance.push_back(singular(i) * singular(i) / static_cast<double>(n - 1));
  }
  return out;
}

TransformResult mds_transform(const EmbeddingSet& set, std::size_t k, Metric metric) {
  const std::size_t n = set.size();
  if (k == 0) throw InvalidArgument("MDS k must be at least 1");
  if (n < k + 1) {
    throw InvalidArgument("MDS with k=" + std::to_string(k) + " needs at least " +
                          std::to_string(k + 1) + " members, got " + std::to_string(n));
  }

  const Eigen::MatrixXd squared = distance_matrix(set, metric).values.array().square().matrix();
  const auto nn = static_cast<Eigen::Index>(n);
  const Eigen::MatrixXd centering =
      Eigen::MatrixXd::Identity(nn, nn) - Eigen::MatrixXd::Constant(nn, nn, 1.0 / static_cast<double>(n));
  Eigen::MatrixXd gram = -0.5 * centering * squared * centering;
  gram = 0.5 * (gram + gram.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);
  if (solver.info() != Eigen::Success) throw RankError("MDS eigendecomposition failed");
  // Eigen returns ascending eigenvalues.
  const Eigen::VectorXd& values = solver.eigenvalues();
  const Eigen::MatrixXd& vectors = solver.eigenvectors();
  const double largest = std::max(values(nn - 1), 0.0);
  const double tol = 1e-10 * largest + std::numeric_limits<double>::min();

  const auto kk = static_cast<Eigen::Index>(k);
  Eigen::MatrixXd coords(nn, kk);
  for (Eigen::Index c = 0; c < kk; ++c) {
    const Eigen::Index src = nn - 1 - c;
    if (values(src) <= tol) {
      throw RankError("MDS k=" + std::to_string(k) + " exceeds the number of positive " +
                      "eigenvalues of the centred distance matrix (" + std::to_string(c) + ")");
    }
    Eigen::VectorXd v = vectors.col(src);
    orient_by_largest_entry(v);
    coords.col(c) = v * std::sqrt(values(src));
  }

  TransformResult out;
  out.method = "mds";
  out.k = k;
  out.reduced = assemble(set, coords, out.method);
  return out;
}

}  // namespace vecscope
