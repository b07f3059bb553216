#include "mvtm/solver.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "mvtm/corpus.hpp"
#include "mvtm/error.hpp"
#include "mvtm/model.hpp"
#include "mvtm/projection.hpp"
#include "mvtm/proxops.hpp"
#include "oracles.hpp"

namespace {

using mvtm::ProjectedDocs;
using mvtm::SolverConfig;
using mvtm::SolverState;

struct Fixture {
  ProjectedDocs projected;
  mvtm::Subspace subspace;
  SolverConfig config;
};

// Small corpus shared by the solver tests; built once.
const Fixture& fixture() {
  static const Fixture fix = [] {
    mvtm::LdaConfig lda;
    lda.topics = 3;
    lda.vocab_size = 40;
    lda.num_docs = 150;
    lda.doc_length = 100;
    lda.alpha = 0.1;
    lda.eta = 0.3;
    lda.seed = 3;
    const mvtm::SyntheticCorpus synth = mvtm::generate_lda_corpus(lda);
    const mvtm::DocMatrix docs = mvtm::normalize_counts(synth.corpus);
    Fixture f;
    f.subspace = mvtm::fit_subspace(docs, 3);
    f.projected = mvtm::project(f.subspace, docs);
    f.config.radius = mvtm::recommended_radius(f.projected);
    return f;
  }();
  return fix;
}

ProjectedDocs wrap(Eigen::MatrixXd coords) {
  ProjectedDocs projected;
  projected.coords = std::move(coords);
  return projected;
}

Eigen::MatrixXd gaussian(Eigen::Index rows, Eigen::Index cols,
                         std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = gauss(rng);
  return m;
}

// Valid caches from init_state, iterates overwritten with noise.
SolverState random_state(const Eigen::MatrixXd& w, const SolverConfig& config,
                         std::mt19937_64& rng) {
  SolverState state = mvtm::init_state(wrap(w), config);
  const Eigen::Index k = w.cols();
  state.gamma = gaussian(k, k, rng);
  state.v1 = gaussian(w.rows(), k, rng);
  state.v2 = gaussian(k, k, rng);
  state.lambda1 = gaussian(w.rows(), k, rng);
  state.lambda2 = gaussian(k, k, rng);
  return state;
}

void step(SolverState& state, const Eigen::MatrixXd& w,
          const SolverConfig& config) {
  state.v1 = mvtm::update_v1(state, w, config);
  state.v2 = mvtm::update_v2(state, config);
  state.gamma_prev = state.gamma;
  state.gamma = mvtm::update_gamma(state, w, config);
  auto duals = mvtm::update_duals(state, w, config);
  state.lambda1 = std::move(duals.first);
  state.lambda2 = std::move(duals.second);
  ++state.iteration;
}

TEST(SolverConfigValidation, RejectsEachBadField) {
  SolverConfig good;
  good.radius = 2.0;
  good.validate();

  SolverConfig bad = good;
  bad.rho = 0.0;
  EXPECT_THROW(bad.validate(), mvtm::ConfigError);
  bad = good;
  bad.mu = -0.1;
  EXPECT_THROW(bad.validate(), mvtm::ConfigError);
  bad = good;
  bad.radius = 0.0;
  EXPECT_THROW(bad.validate(), mvtm::ConfigError);
  bad = good;
  bad.max_iters = 0;
  EXPECT_THROW(bad.validate(), mvtm::ConfigError);
  bad = good;
  bad.tol_primal = 0.0;
  EXPECT_THROW(bad.validate(), mvtm::ConfigError);
  bad = good;
  bad.tol_change = 0.0;
  EXPECT_THROW(bad.validate(), mvtm::ConfigError);
}

TEST(RecommendedRadius, TwiceTheLargestRowNorm) {
  const ProjectedDocs& projected = fixture().projected;
  double largest = 0.0;
  for (Eigen::Index d = 0; d < projected.num_docs(); ++d) {
    largest = std::max(largest, projected.coords.row(d).norm());
  }
  EXPECT_NEAR(mvtm::recommended_radius(projected), 2.0 * largest, 1e-12);
}

TEST(InitState, StartsFromIdentityAndCachesGram) {
  const Fixture& fix = fixture();
  const SolverState state = mvtm::init_state(fix.projected, fix.config);
  const Eigen::MatrixXd& w = fix.projected.coords;

  EXPECT_EQ((state.gamma - Eigen::MatrixXd::Identity(3, 3))
                .cwiseAbs()
                .maxCoeff(),
            0.0);
  EXPECT_EQ((state.v1 - w).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ((state.v2 - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff(),
            0.0);
  EXPECT_EQ(state.lambda1.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(state.lambda2.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(state.iteration, 0);

  const Eigen::MatrixXd c_expected =
      Eigen::MatrixXd::Identity(3, 3) + w.transpose() * w;
  EXPECT_LT((state.c_mat - c_expected).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((state.c_inv * state.c_mat - Eigen::MatrixXd::Identity(3, 3))
                .cwiseAbs()
                .maxCoeff(),
            1e-10);

  const Eigen::VectorXd a_oracle =
      (w.transpose() * w)
          .fullPivLu()
          .solve(w.transpose() * Eigen::VectorXd::Ones(w.rows()));
  EXPECT_LT((state.a_vec - a_oracle).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(InitState, OrthonormalCoordsGiveTwiceIdentity) {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(3, 2);
  w(0, 0) = 1.0;
  w(1, 1) = 1.0;
  SolverConfig config;
  config.radius = 2.0;
  const SolverState state = mvtm::init_state(wrap(w), config);
  EXPECT_LT((state.c_mat - 2.0 * Eigen::MatrixXd::Identity(2, 2))
                .cwiseAbs()
                .maxCoeff(),
            1e-14);
  EXPECT_LT((state.a_vec - Eigen::Vector2d(1.0, 1.0)).cwiseAbs().maxCoeff(),
            1e-14);
}

TEST(InitState, RankDeficientCoordsRejected) {
  std::mt19937_64 rng(7);
  Eigen::MatrixXd w(12, 3);
  w.col(0) = gaussian(12, 1, rng);
  w.col(1) = 2.0 * w.col(0);
  w.col(2) = gaussian(12, 1, rng);
  SolverConfig config;
  config.radius = 2.0;
  try {
    mvtm::init_state(wrap(w), config);
    FAIL() << "expected RankError";
  } catch (const mvtm::RankError& e) {
    EXPECT_NE(std::string(e.what()).find("rank deficient"), std::string::npos);
  }
}

TEST(InitState, FewerDocsThanDimsRejected) {
  std::mt19937_64 rng(9);
  SolverConfig config;
  config.radius = 2.0;
  EXPECT_THROW(mvtm::init_state(wrap(gaussian(2, 3, rng)), config),
               mvtm::DimensionError);
}

TEST(UpdateV1, MuZeroIsPassThrough) {
  std::mt19937_64 rng(13);
  const Eigen::MatrixXd w = gaussian(10, 3, rng);
  SolverConfig config;
  config.radius = 2.0;
  config.mu = 0.0;
  SolverState state = random_state(w, config, rng);
  const Eigen::MatrixXd expected = w * state.gamma + state.lambda1 / config.rho;
  EXPECT_LT((mvtm::update_v1(state, w, config) - expected)
                .cwiseAbs()
                .maxCoeff(),
            1e-15);
}

TEST(UpdateV1, NonnegativeTargetUnchanged) {
  std::mt19937_64 rng(15);
  const Eigen::MatrixXd w = gaussian(8, 3, rng).cwiseAbs();
  SolverConfig config;
  config.radius = 2.0;
  config.mu = 0.5;
  SolverState state = random_state(w, config, rng);
  state.gamma = Eigen::MatrixXd::Identity(3, 3);
  state.lambda1 = gaussian(8, 3, rng).cwiseAbs();
  const Eigen::MatrixXd expected = w + state.lambda1 / config.rho;
  EXPECT_LT((mvtm::update_v1(state, w, config) - expected)
                .cwiseAbs()
                .maxCoeff(),
            1e-15);
}

TEST(UpdateV1, EntriesMinimizeTheScalarSubproblem) {
  std::mt19937_64 rng(21);
  SolverConfig config;
  config.radius = 2.0;
  config.rho = 1.7;
  config.mu = 0.4;
  const Eigen::MatrixXd w = gaussian(6, 3, rng);
  SolverState state = random_state(w, config, rng);
  const Eigen::MatrixXd p = w * state.gamma + state.lambda1 / config.rho;
  const Eigen::MatrixXd v1 = mvtm::update_v1(state, w, config);
  const double c = config.mu / config.rho;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double target = p(i);
    const double ref = oracles::golden_section_min(
        [target, c](double x) {
          return 0.5 * (x - target) * (x - target) + c * std::max(-x, 0.0);
        },
        target - c - 1.0, target + c + 1.0);
    EXPECT_NEAR(v1(i), ref, 1e-8);
  }
}

TEST(UpdateV2, FeasiblePointUnchanged) {
  std::mt19937_64 rng(23);
  const Eigen::MatrixXd w = gaussian(10, 3, rng);
  SolverConfig config;
  config.radius = 1.0;  // zeta = 1
  SolverState state = random_state(w, config, rng);
  state.gamma = 2.0 * Eigen::MatrixXd::Identity(3, 3);
  state.lambda2 = Eigen::MatrixXd::Zero(3, 3);
  EXPECT_EQ((mvtm::update_v2(state, config) - state.gamma)
                .cwiseAbs()
                .maxCoeff(),
            0.0);
}

TEST(UpdateV2, EnforcesTheSingularValueFloor) {
  std::mt19937_64 rng(27);
  const Eigen::MatrixXd w = gaussian(10, 3, rng);
  SolverConfig config;
  config.radius = 2.0;  // zeta = 0.5
  for (int trial = 0; trial < 50; ++trial) {
    SolverState state = random_state(w, config, rng);
    state.gamma *= 0.1;  // push sigma_min below the floor
    const Eigen::MatrixXd v2 = mvtm::update_v2(state, config);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(v2);
    EXPECT_GE(svd.singularValues().minCoeff(), 0.5 - 1e-10);
  }
}

TEST(UpdateGamma, MatchesIndependentRecomputation) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> rho_dist(0.5, 4.0);
  std::uniform_real_distribution<double> mu_dist(0.125, 1.0);
  for (int trial = 0; trial < 25; ++trial) {
    const Eigen::MatrixXd w = gaussian(40, 3, rng);
    SolverConfig config;
    config.radius = 2.0;
    config.rho = rho_dist(rng);
    config.mu = mu_dist(rng);
    SolverState state = random_state(w, config, rng);

    const Eigen::MatrixXd gamma = mvtm::update_gamma(state, w, config);
    const oracles::GammaStep ref = oracles::gamma_step_oracle(
        w, state.v1, state.v2, state.lambda1, state.lambda2, state.c_mat,
        state.a_vec, config.rho);
    EXPECT_LT((gamma - ref.gamma).cwiseAbs().maxCoeff(), 1e-9);

    // Row sums restored exactly, directions solve their quadratic.
    EXPECT_LT((gamma.rowwise().sum() - state.a_vec)
                  .lpNorm<Eigen::Infinity>(),
              1e-10);
    for (int i = 0; i < 3; ++i) {
      const double d = ref.d_hat(i);
      const double residual = d * d - (ref.f(i) / ref.e(i)) * d -
                              2.0 / (config.rho * ref.e(i));
      EXPECT_NEAR(residual, 0.0, 1e-10 * std::max(1.0, d * d));
    }
  }
}

TEST(UpdateDuals, FixedAtConsensus) {
  std::mt19937_64 rng(37);
  const Eigen::MatrixXd w = gaussian(10, 3, rng);
  SolverConfig config;
  config.radius = 2.0;
  SolverState state = random_state(w, config, rng);
  state.v1 = w * state.gamma;
  state.v2 = state.gamma;
  const auto [lambda1, lambda2] = mvtm::update_duals(state, w, config);
  EXPECT_LT((lambda1 - state.lambda1).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((lambda2 - state.lambda2).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(UpdateDuals, StepsAreRhoTimesResiduals) {
  std::mt19937_64 rng(41);
  const Eigen::MatrixXd w = gaussian(10, 3, rng);
  SolverConfig config;
  config.radius = 2.0;
  config.rho = 3.5;
  SolverState state = random_state(w, config, rng);
  const auto [lambda1, lambda2] = mvtm::update_duals(state, w, config);
  EXPECT_LT((lambda1 - state.lambda1 -
             config.rho * (w * state.gamma - state.v1))
                .cwiseAbs()
                .maxCoeff(),
            1e-12);
  EXPECT_LT((lambda2 - state.lambda2 - config.rho * (state.gamma - state.v2))
                .cwiseAbs()
                .maxCoeff(),
            1e-12);

  // The same state stepped with 4x the penalty moves 4x as far.
  SolverConfig quarter = config;
  quarter.rho = config.rho / 4.0;
  const auto [small1, small2] = mvtm::update_duals(state, w, quarter);
  EXPECT_LT((lambda1 - state.lambda1 - 4.0 * (small1 - state.lambda1))
                .cwiseAbs()
                .maxCoeff(),
            1e-12);
  EXPECT_LT((lambda2 - state.lambda2 - 4.0 * (small2 - state.lambda2))
                .cwiseAbs()
                .maxCoeff(),
            1e-12);
}

TEST(Objective, IdentityGammaOnNonnegativeCoords) {
  std::mt19937_64 rng(43);
  const Eigen::MatrixXd w = gaussian(10, 3, rng).cwiseAbs();
  SolverConfig config;
  config.radius = 2.0;
  config.mu = 0.7;
  const mvtm::ObjectiveValue value =
      mvtm::objective(Eigen::MatrixXd::Identity(3, 3), w, config);
  EXPECT_NEAR(value.value, 0.0, 1e-12);
  EXPECT_NEAR(value.sigma_min, 1.0, 1e-12);
  EXPECT_TRUE(value.feasible);

  const mvtm::ObjectiveValue scaled =
      mvtm::objective(2.0 * Eigen::MatrixXd::Identity(3, 3), w, config);
  EXPECT_NEAR(scaled.value, -6.0 * std::log(2.0), 1e-12);
}

TEST(Objective, MatchesDenseFormula) {
  std::mt19937_64 rng(47);
  SolverConfig config;
  config.radius = 2.0;
  config.mu = 0.3;
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::MatrixXd w = gaussian(12, 3, rng);
    const Eigen::MatrixXd gamma =
        gaussian(3, 3, rng) + 3.0 * Eigen::MatrixXd::Identity(3, 3);
    const mvtm::ObjectiveValue value = mvtm::objective(gamma, w, config);

    double hinge = 0.0;
    const Eigen::MatrixXd product = w * gamma;
    for (Eigen::Index i = 0; i < product.size(); ++i) {
      hinge += std::max(-product(i), 0.0);
    }
    const double expected =
        -2.0 * std::log(std::abs(gamma.determinant())) + config.mu * hinge;
    EXPECT_NEAR(value.value, expected, 1e-9 * std::max(1.0, std::abs(expected)));
  }
}

TEST(Objective, SingularGammaIsInfinite) {
  std::mt19937_64 rng(53);
  const Eigen::MatrixXd w = gaussian(8, 3, rng);
  SolverConfig config;
  config.radius = 2.0;
  Eigen::MatrixXd gamma = Eigen::MatrixXd::Identity(3, 3);
  gamma(2, 2) = 0.0;
  const mvtm::ObjectiveValue value = mvtm::objective(gamma, w, config);
  EXPECT_TRUE(std::isinf(value.value));
  EXPECT_FALSE(value.feasible);
}

TEST(Objective, FeasibilityTracksTheRadius) {
  std::mt19937_64 rng(59);
  const Eigen::MatrixXd w = gaussian(8, 3, rng);
  SolverConfig config;
  config.radius = 1.0;
  EXPECT_FALSE(
      mvtm::objective(0.5 * Eigen::MatrixXd::Identity(3, 3), w, config)
          .feasible);
  EXPECT_TRUE(
      mvtm::objective(2.0 * Eigen::MatrixXd::Identity(3, 3), w, config)
          .feasible);
}

TEST(KktResiduals, VanishAtConsensus) {
  std::mt19937_64 rng(61);
  const Eigen::MatrixXd w = gaussian(10, 3, rng);
  SolverConfig config;
  config.radius = 2.0;
  SolverState state = random_state(w, config, rng);
  state.v1 = w * state.gamma;
  state.v2 = state.gamma;
  state.gamma_prev = state.gamma;
  const mvtm::KktResiduals res = mvtm::kkt_residuals(state, w, config);
  EXPECT_LT(res.r1, 1e-15);
  EXPECT_LT(res.r2, 1e-15);
  EXPECT_LT(res.dual_change, 1e-15);
  EXPECT_NEAR(res.constraint,
              (state.gamma.rowwise().sum() - state.a_vec)
                  .lpNorm<Eigen::Infinity>(),
              1e-15);

  // gamma = a 1^T / K satisfies the row-sum constraint by construction.
  state.gamma = state.a_vec * Eigen::RowVector3d::Constant(1.0 / 3.0);
  EXPECT_LT(mvtm::kkt_residuals(state, w, config).constraint, 1e-14);
}

TEST(Run, RejectsZeroMaxIters) {
  SolverConfig config = fixture().config;
  config.max_iters = 0;
  EXPECT_THROW(mvtm::run(fixture().projected, config), mvtm::ConfigError);
}

TEST(Run, SingleIterationProducesOneRecord) {
  SolverConfig config = fixture().config;
  config.max_iters = 1;
  const mvtm::FitResult fit = mvtm::run(fixture().projected, config);
  ASSERT_EQ(fit.trace.size(), 1u);
  EXPECT_EQ(fit.trace[0].iter, 1);
  EXPECT_FALSE(fit.converged);
  EXPECT_EQ(fit.reason, mvtm::StopReason::max_iters);
  EXPECT_EQ(fit.state.iteration, 1);
  EXPECT_EQ((fit.gamma_hat - fit.state.gamma).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Run, DeterministicAcrossCalls) {
  SolverConfig config = fixture().config;
  config.max_iters = 40;
  const mvtm::FitResult a = mvtm::run(fixture().projected, config);
  const mvtm::FitResult b = mvtm::run(fixture().projected, config);
  EXPECT_EQ((a.gamma_hat - b.gamma_hat).cwiseAbs().maxCoeff(), 0.0);
  ASSERT_EQ(a.trace.size(), b.trace.size());
  for (std::size_t i = 0; i < a.trace.size(); ++i) {
    EXPECT_EQ(a.trace[i].objective, b.trace[i].objective);
    EXPECT_EQ(a.trace[i].r1, b.trace[i].r1);
    EXPECT_EQ(a.trace[i].r2, b.trace[i].r2);
    EXPECT_EQ(a.trace[i].sigma_min, b.trace[i].sigma_min);
    EXPECT_EQ(a.trace[i].rel_change, b.trace[i].rel_change);
  }
}

TEST(Run, ConvergesOnTheFixtureCorpus) {
  // The fixture corpus (short docs, dense topics) needs a stronger penalty
  // and a looser vertex bound than the defaults before the splits agree.
  SolverConfig config = fixture().config;
  config.rho = 50.0;
  config.radius = 100.0;
  config.max_iters = 2000;
  const mvtm::FitResult fit = mvtm::run(fixture().projected, config);
  EXPECT_TRUE(fit.converged);
  EXPECT_NE(fit.reason, mvtm::StopReason::max_iters);
  ASSERT_FALSE(fit.trace.empty());
  const mvtm::TraceRecord& last = fit.trace.back();
  if (fit.reason == mvtm::StopReason::residual) {
    EXPECT_LT(last.r1, config.tol_primal);
    EXPECT_LT(last.r2, config.tol_primal);
  } else {
    EXPECT_LT(last.rel_change, config.tol_change);
  }
  EXPECT_TRUE(fit.gamma_invertible);

  const std::size_t probe = std::min<std::size_t>(9, fit.trace.size() - 1);
  EXPECT_LT(fit.trace[probe].objective, fit.trace[0].objective);
}

TEST(Run, RowSumConstraintHoldsEveryIteration) {
  const Fixture& fix = fixture();
  SolverState state = mvtm::init_state(fix.projected, fix.config);
  for (int iter = 0; iter < 30; ++iter) {
    step(state, fix.projected.coords, fix.config);
    EXPECT_LT((state.gamma.rowwise().sum() - state.a_vec)
                  .lpNorm<Eigen::Infinity>(),
              1e-10);
  }
}

TEST(Run, SplitUpdatesNeverWorsenTheirSubproblems) {
  const Fixture& fix = fixture();
  const Eigen::MatrixXd& w = fix.projected.coords;
  const SolverConfig& config = fix.config;
  const double zeta = 1.0 / config.radius;
  SolverState state = mvtm::init_state(fix.projected, config);

  for (int iter = 0; iter < 25; ++iter) {
    const Eigen::MatrixXd p1 = w * state.gamma + state.lambda1 / config.rho;
    auto v1_value = [&](const Eigen::MatrixXd& v) {
      return config.mu * mvtm::hinge_norm(v) +
             0.5 * config.rho * (v - p1).squaredNorm();
    };
    const double before1 = v1_value(state.v1);
    state.v1 = mvtm::update_v1(state, w, config);
    EXPECT_LE(v1_value(state.v1), before1 + 1e-10);

    const Eigen::MatrixXd p2 = state.gamma + state.lambda2 / config.rho;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(state.v2);
    const bool old_feasible =
        svd.singularValues().minCoeff() >= zeta - 1e-12;
    const double before2 = (state.v2 - p2).norm();
    state.v2 = mvtm::update_v2(state, config);
    if (old_feasible) {
      EXPECT_LE((state.v2 - p2).norm(), before2 + 1e-10);
    }

    state.gamma_prev = state.gamma;
    state.gamma = mvtm::update_gamma(state, w, config);
    auto duals = mvtm::update_duals(state, w, config);
    state.lambda1 = std::move(duals.first);
    state.lambda2 = std::move(duals.second);
  }
}

TEST(Run, OverflowedCoordsRaiseNumericError) {
  Eigen::MatrixXd coords = 1e200 * Eigen::MatrixXd::Random(10, 3);
  SolverConfig config;
  config.radius = 1.0;
  config.max_iters = 5;
  EXPECT_THROW(mvtm::run(wrap(coords), config), mvtm::NumericError);
}

TEST(TraceCsv, RoundTripsThroughTheFile) {
  SolverConfig config = fixture().config;
  config.max_iters = 12;
  const mvtm::FitResult fit = mvtm::run(fixture().projected, config);
  const std::string path = testing::TempDir() + "trace_roundtrip.csv";
  mvtm::write_trace_csv(fit.trace, path);

  std::ifstream in(path);
  std::string header;
  ASSERT_TRUE(std::getline(in, header));
  EXPECT_EQ(header, "iter,objective,r1,r2,sigma_min,rel_change,ms");
  for (const mvtm::TraceRecord& rec : fit.trace) {
    std::string line;
    ASSERT_TRUE(std::getline(in, line));
    std::istringstream fields(line);
    std::string field;
    std::getline(fields, field, ',');
    EXPECT_EQ(std::stoi(field), rec.iter);
    std::getline(fields, field, ',');
    EXPECT_EQ(std::stod(field), rec.objective);
    std::getline(fields, field, ',');
    EXPECT_EQ(std::stod(field), rec.r1);
    std::getline(fields, field, ',');
    EXPECT_EQ(std::stod(field), rec.r2);
    std::getline(fields, field, ',');
    EXPECT_EQ(std::stod(field), rec.sigma_min);
    std::getline(fields, field, ',');
    EXPECT_EQ(std::stod(field), rec.rel_change);
  }
  std::string leftover;
  EXPECT_FALSE(std::getline(in, leftover));
}

TEST(TraceCsv, UnwritablePathIsIoError) {
  EXPECT_THROW(
      mvtm::write_trace_csv({}, testing::TempDir() + "missing_dir/trace.csv"),
      mvtm::IoError);
}

TEST(EndToEnd, SmallVocabularyRecoversTopics) {
  mvtm::LdaConfig lda;
  lda.topics = 3;
  lda.vocab_size = 12;
  lda.num_docs = 300;
  lda.doc_length = 500;
  lda.alpha = 0.1;
  lda.eta = 0.1;
  lda.seed = 2;
  const mvtm::SyntheticCorpus synth = mvtm::generate_lda_corpus(lda);
  const mvtm::DocMatrix docs = mvtm::normalize_counts(synth.corpus);
  const mvtm::Subspace subspace = mvtm::fit_subspace(docs, 3);
  const ProjectedDocs projected = mvtm::project(subspace, docs);

  SolverConfig config;
  config.rho = 7.0;
  config.mu = 0.3;
  config.radius = mvtm::recommended_radius(projected);
  SolverState state = mvtm::init_state(projected, config);
  for (int iter = 0; iter < 500; ++iter) {
    step(state, projected.coords, config);
  }

  const Eigen::MatrixXd beta_hat = mvtm::recover_beta(subspace, state.gamma);
  const mvtm::TopicMatch match = mvtm::match_topics(beta_hat, synth.beta_true);
  EXPECT_LT(match.mean_l1, 0.15);
}

}  // namespace
