#pragma once

#include <Eigen/Core>

#include "mvtm/corpus.hpp"

namespace mvtm {

/// K-dimensional PCA document subspace: corpus mean, orthonormal basis, and
/// the covariance eigenvalues the basis directions carry. Fitted on
/// row-stochastic data the basis is orthogonal to the all-ones vector, which
/// is what makes reconstruction preserve row sums.
struct Subspace {
  Eigen::VectorXd mean;         // length V
  Eigen::MatrixXd basis;        // V x K, orthonormal columns
  Eigen::VectorXd eigenvalues;  // length K, nonincreasing, > 0

  Eigen::Index dims() const { return basis.cols(); }
  Eigen::Index vocab_size() const { return basis.rows(); }
};

/// Documents expressed in subspace coordinates, coords = docs * basis.
struct ProjectedDocs {
  Eigen::MatrixXd coords;  // M x K

  Eigen::Index num_docs() const { return coords.rows(); }
  Eigen::Index dims() const { return coords.cols(); }
};

/// Top-k eigenvectors of the sample covariance of the document rows.
/// Eigenvector signs are fixed (largest-magnitude entry positive) so fits are
/// reproducible. Throws RankError, reporting the numerical rank, when the
/// k-th eigenvalue falls below 1e-12.
Subspace fit_subspace(const DocMatrix& docs, Eigen::Index k);

/// Uncentered coordinates docs * basis.
ProjectedDocs project(const Subspace& subspace, const DocMatrix& docs);

/// Lifts subspace coordinates back to word space:
/// mean + (coords - mean * basis) * basis^T. For simplex-fitted subspaces the
/// output sums to 1.
Eigen::VectorXd reconstruct(const Subspace& subspace,
                            const Eigen::VectorXd& coords_row);

/// Row-wise reconstruct for a stack of coordinate rows.
Eigen::MatrixXd reconstruct_rows(const Subspace& subspace,
                                 const Eigen::MatrixXd& coords);

}  // namespace mvtm
