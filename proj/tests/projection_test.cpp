#include "mvtm/projection.hpp"

#include <random>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "mvtm/corpus.hpp"
#include "mvtm/error.hpp"
#include "oracles.hpp"

namespace {

using mvtm::DocMatrix;
using mvtm::ProjectedDocs;
using mvtm::Subspace;

DocMatrix plane_docs() {
  // Four documents inside the 2-plane through p, q, r on the V=4 simplex.
  Eigen::Vector4d p(0.7, 0.1, 0.1, 0.1);
  Eigen::Vector4d q(0.1, 0.4, 0.3, 0.2);
  Eigen::Vector4d r(0.25, 0.25, 0.25, 0.25);
  DocMatrix docs;
  docs.rows.resize(4, 4);
  docs.rows.row(0) = p;
  docs.rows.row(1) = q;
  docs.rows.row(2) = r;
  docs.rows.row(3) = 0.2 * p + 0.3 * q + 0.5 * r;
  return docs;
}

DocMatrix generated_docs(Eigen::Index vocab, Eigen::Index docs_count,
                         std::uint64_t seed) {
  mvtm::LdaConfig config;
  config.topics = 3;
  config.vocab_size = vocab;
  config.num_docs = docs_count;
  config.doc_length = 100;
  config.alpha = 0.1;
  config.eta = 0.3;
  config.seed = seed;
  return mvtm::normalize_counts(mvtm::generate_lda_corpus(config).corpus);
}

TEST(FitSubspace, DocsOnPlaneReconstructExactly) {
  const DocMatrix docs = plane_docs();
  const Subspace subspace = mvtm::fit_subspace(docs, 2);
  const ProjectedDocs projected = mvtm::project(subspace, docs);
  const Eigen::MatrixXd recon =
      mvtm::reconstruct_rows(subspace, projected.coords);
  EXPECT_LT((recon - docs.rows).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(FitSubspace, BasisIsOrthonormalAndSumFree) {
  const DocMatrix docs = generated_docs(40, 120, 2);
  const Subspace subspace = mvtm::fit_subspace(docs, 3);
  const Eigen::MatrixXd gram =
      subspace.basis.transpose() * subspace.basis;
  EXPECT_LT((gram - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff(),
            1e-10);
  // Centered row-stochastic data is orthogonal to the all-ones direction.
  EXPECT_LT(subspace.basis.colwise().sum().cwiseAbs().maxCoeff(), 1e-8);
}

TEST(FitSubspace, EigenvaluesMatchDenseOracle) {
  // m >= v path: the covariance is formed directly.
  const DocMatrix wide = generated_docs(15, 60, 3);
  const Subspace cov_path = mvtm::fit_subspace(wide, 3);
  const Eigen::VectorXd dense_cov =
      oracles::symmetric_eigenvalues_desc(oracles::dense_covariance(wide.rows));
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(cov_path.eigenvalues(i), dense_cov(i), 1e-8);
  }
  EXPECT_GE(cov_path.eigenvalues(0), cov_path.eigenvalues(1));
  EXPECT_GE(cov_path.eigenvalues(1), cov_path.eigenvalues(2));

  // m < v path: the Gram trick must agree with the same oracle.
  const DocMatrix tall = generated_docs(20, 10, 4);
  const Subspace gram_path = mvtm::fit_subspace(tall, 3);
  const Eigen::VectorXd dense_gram =
      oracles::symmetric_eigenvalues_desc(oracles::dense_covariance(tall.rows));
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(gram_path.eigenvalues(i), dense_gram(i), 1e-8);
  }
}

TEST(FitSubspace, SignConventionIsDeterministic) {
  const DocMatrix docs = generated_docs(25, 80, 5);
  const Subspace subspace = mvtm::fit_subspace(docs, 3);
  for (Eigen::Index c = 0; c < 3; ++c) {
    Eigen::Index argmax = 0;
    subspace.basis.col(c).cwiseAbs().maxCoeff(&argmax);
    EXPECT_GT(subspace.basis(argmax, c), 0.0);
  }
}

TEST(FitSubspace, ConstantCorpusIsRankDeficient) {
  DocMatrix docs;
  docs.rows = Eigen::Vector4d(0.7, 0.1, 0.1, 0.1).transpose().replicate(5, 1);
  EXPECT_THROW(mvtm::fit_subspace(docs, 2), mvtm::RankError);
}

TEST(FitSubspace, RejectsBadArguments) {
  const DocMatrix docs = plane_docs();
  EXPECT_THROW(mvtm::fit_subspace(docs, 0), mvtm::ConfigError);
  EXPECT_THROW(mvtm::fit_subspace(docs, 5), mvtm::ConfigError);

  DocMatrix two;
  two.rows = docs.rows.topRows(2);
  EXPECT_THROW(mvtm::fit_subspace(two, 2), mvtm::ConfigError);
}

TEST(Project, OneHotDocumentReadsBasisRow) {
  const DocMatrix docs = generated_docs(30, 90, 6);
  const Subspace subspace = mvtm::fit_subspace(docs, 3);
  DocMatrix onehot;
  onehot.rows = Eigen::MatrixXd::Zero(1, 30);
  onehot.rows(0, 17) = 1.0;
  const ProjectedDocs projected = mvtm::project(subspace, onehot);
  EXPECT_LT(
      (projected.coords.row(0) - subspace.basis.row(17)).cwiseAbs().maxCoeff(),
      1e-15);
}

TEST(Project, DistinctPlaneDocsGetDistinctCoords) {
  const DocMatrix docs = plane_docs();
  const Subspace subspace = mvtm::fit_subspace(docs, 2);
  const ProjectedDocs projected = mvtm::project(subspace, docs);
  for (Eigen::Index i = 0; i < 4; ++i) {
    for (Eigen::Index j = i + 1; j < 4; ++j) {
      EXPECT_GT((projected.coords.row(i) - projected.coords.row(j)).norm(),
                1e-8);
    }
  }
}

TEST(Project, VocabMismatchThrows) {
  const Subspace subspace = mvtm::fit_subspace(plane_docs(), 2);
  DocMatrix docs;
  docs.rows = Eigen::MatrixXd::Constant(2, 5, 0.2);
  EXPECT_THROW(mvtm::project(subspace, docs), mvtm::DimensionError);
}

TEST(Reconstruct, MeanCoordinatesReturnTheMean) {
  const DocMatrix docs = generated_docs(20, 50, 8);
  const Subspace subspace = mvtm::fit_subspace(docs, 3);
  const Eigen::VectorXd mean_coords =
      subspace.basis.transpose() * subspace.mean;
  const Eigen::VectorXd recon = mvtm::reconstruct(subspace, mean_coords);
  EXPECT_LT((recon - subspace.mean).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Reconstruct, ProjectionOfReconstructionIsIdentity) {
  const DocMatrix docs = generated_docs(20, 50, 9);
  const Subspace subspace = mvtm::fit_subspace(docs, 3);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd coords(40, 3);
  for (Eigen::Index i = 0; i < coords.size(); ++i) coords(i) = gauss(rng);
  const Eigen::MatrixXd recon = mvtm::reconstruct_rows(subspace, coords);
  const Eigen::MatrixXd back = recon * subspace.basis;
  EXPECT_LT((back - coords).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Reconstruct, RowsSumToOneForArbitraryCoords) {
  const DocMatrix docs = generated_docs(30, 100, 10);
  const Subspace subspace = mvtm::fit_subspace(docs, 3);
  std::mt19937_64 rng(17);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd coords(1000, 3);
  for (Eigen::Index i = 0; i < coords.size(); ++i) coords(i) = gauss(rng);
  const Eigen::MatrixXd recon = mvtm::reconstruct_rows(subspace, coords);
  for (Eigen::Index i = 0; i < recon.rows(); ++i) {
    EXPECT_NEAR(recon.row(i).sum(), 1.0, 1e-9);
  }
}

TEST(Reconstruct, DimensionMismatchThrows) {
  const Subspace subspace = mvtm::fit_subspace(plane_docs(), 2);
  EXPECT_THROW(mvtm::reconstruct(subspace, Eigen::Vector3d::Zero()),
               mvtm::DimensionError);
  EXPECT_THROW(mvtm::reconstruct_rows(subspace, Eigen::MatrixXd::Zero(2, 3)),
               mvtm::DimensionError);
}

}  // namespace
