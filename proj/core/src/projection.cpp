#include "mvtm/projection.hpp"

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "mvtm/error.hpp"

namespace mvtm {

namespace {

constexpr double kRankTol = 1e-12;

// Flips each column so its largest-magnitude entry is positive.
void fix_signs(Eigen::MatrixXd& basis) {
  for (Eigen::Index c = 0; c < basis.cols(); ++c) {
    Eigen::Index argmax = 0;
    basis.col(c).cwiseAbs().maxCoeff(&argmax);
    if (basis(argmax, c) < 0.0) basis.col(c) = -basis.col(c);
  }
}

}  // namespace

Subspace fit_subspace(const DocMatrix& docs, Eigen::Index k) {
  const Eigen::Index m = docs.num_docs();
  const Eigen::Index v = docs.vocab_size();
  if (k < 1 || k > v) {
    throw ConfigError("fit_subspace: k must be in [1, " + std::to_string(v) +
                      "], got " + std::to_string(k));
  }
  if (m < k + 1) {
    throw ConfigError("fit_subspace: need at least k+1 documents, got " +
                      std::to_string(m));
  }

  Subspace subspace;
  subspace.mean = docs.rows.colwise().mean();
  const Eigen::MatrixXd centered =
      docs.rows.rowwise() - subspace.mean.transpose();
  const double scale = 1.0 / static_cast<double>(m - 1);

  Eigen::VectorXd eigenvalues;  // candidate spectrum, nonincreasing
  Eigen::MatrixXd basis;        // matching eigenvectors
  if (m < v) {
    // Gram trick: the MxM Gram of centered rows shares nonzero eigenvalues
    // with the VxV covariance; eigenvectors convert via X^T u / ||X^T u||.
    const Eigen::MatrixXd gram = centered * centered.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
    eigenvalues = eig.eigenvalues().reverse() * scale;
    basis.resize(v, k);
    for (Eigen::Index c = 0; c < k; ++c) {
      const Eigen::VectorXd u = eig.eigenvectors().col(m - 1 - c);
      Eigen::VectorXd direction = centered.transpose() * u;
      const double norm = direction.norm();
      if (norm > 0.0) direction /= norm;
      basis.col(c) = direction;
    }
  } else {
    // For m >= v the VxV covariance is no larger than the data itself.
    const Eigen::MatrixXd cov = scale * (centered.transpose() * centered);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    eigenvalues = eig.eigenvalues().reverse();
    basis.resize(v, k);
    for (Eigen::Index c = 0; c < k; ++c) {
      basis.col(c) = eig.eigenvectors().col(v - 1 - c);
    }
  }

  if (eigenvalues.size() < k || eigenvalues[k - 1] < kRankTol) {
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
      if (eigenvalues[i] >= kRankTol) ++rank;
    }
    throw RankError("fit_subspace: covariance numerical rank " +
                    std::to_string(rank) + " is below requested k = " +
                    std::to_string(k));
  }

  fix_signs(basis);
  subspace.basis = std::move(basis);
  subspace.eigenvalues = eigenvalues.head(k);
  return subspace;
}

ProjectedDocs project(const Subspace& subspace, const DocMatrix& docs) {
  if (docs.vocab_size() != subspace.vocab_size()) {
    throw DimensionError("project: docs have " +
                         std::to_string(docs.vocab_size()) +
                         " columns, subspace expects " +
                         std::to_string(subspace.vocab_size()));
  }
  ProjectedDocs projected;
  projected.coords = docs.rows * subspace.basis;
  return projected;
}

Eigen::VectorXd reconstruct(const Subspace& subspace,
                            const Eigen::VectorXd& coords_row) {
  if (coords_row.size() != subspace.dims()) {
    throw DimensionError("reconstruct: coords have " +
                         std::to_string(coords_row.size()) +
                         " dims, subspace expects " +
                         std::to_string(subspace.dims()));
  }
  const Eigen::VectorXd mean_coords =
      subspace.basis.transpose() * subspace.mean;
  return subspace.mean + subspace.basis * (coords_row - mean_coords);
}

Eigen::MatrixXd reconstruct_rows(const Subspace& subspace,
                                 const Eigen::MatrixXd& coords) {
  if (coords.cols() != subspace.dims()) {
    throw DimensionError("reconstruct_rows: coords have " +
                         std::to_string(coords.cols()) +
                         " dims, subspace expects " +
                         std::to_string(subspace.dims()));
  }
  const Eigen::RowVectorXd mean_coords =
      subspace.mean.transpose() * subspace.basis;
  return (coords.rowwise() - mean_coords) * subspace.basis.transpose() +
         subspace.mean.transpose().replicate(coords.rows(), 1);
}

}  // namespace mvtm
