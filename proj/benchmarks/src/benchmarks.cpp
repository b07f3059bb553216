#include <random>

#include <benchmark/benchmark.h>

#include "mvtm/corpus.hpp"
#include "mvtm/model.hpp"
#include "mvtm/projection.hpp"
#include "mvtm/proxops.hpp"
#include "mvtm/solver.hpp"

namespace {

// Reference-scale problem shared by the pipeline benchmarks.
struct Workload {
  mvtm::SyntheticCorpus synth;
  mvtm::DocMatrix docs;
  mvtm::Subspace subspace;
  mvtm::ProjectedDocs projected;
  mvtm::SolverConfig config;
};

const Workload& workload() {
  static const Workload* w = [] {
    auto* out = new Workload;
    mvtm::LdaConfig lda;
    lda.topics = 3;
    lda.vocab_size = 300;
    lda.num_docs = 500;
    lda.doc_length = 500;
    lda.alpha = 0.1;
    lda.eta = 0.1;
    lda.seed = 7;
    out->synth = mvtm::generate_lda_corpus(lda);
    out->docs = mvtm::normalize_counts(out->synth.corpus);
    out->subspace = mvtm::fit_subspace(out->docs, 3);
    out->projected = mvtm::project(out->subspace, out->docs);
    out->config.radius = mvtm::recommended_radius(out->projected);
    return out;
  }();
  return *w;
}

void BM_ProxHinge(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd p(500, 3);
  for (Eigen::Index i = 0; i < p.size(); ++i) p(i) = normal(rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mvtm::prox_hinge(p, 0.3));
  }
}
BENCHMARK(BM_ProxHinge);

void BM_ProjectSimplex(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(300);
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = normal(rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mvtm::project_simplex(v));
  }
}
BENCHMARK(BM_ProjectSimplex);

void BM_ProjectMinSingular(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd x(3, 3);
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = normal(rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mvtm::project_min_singular(x, 0.5));
  }
}
BENCHMARK(BM_ProjectMinSingular);

void BM_SolverIteration(benchmark::State& state) {
  const Workload& w = workload();
  mvtm::SolverState s = mvtm::init_state(w.projected, w.config);
  for (auto _ : state) {
    s.gamma_prev = s.gamma;
    s.v1 = mvtm::update_v1(s, w.projected.coords, w.config);
    s.v2 = mvtm::update_v2(s, w.config);
    s.gamma = mvtm::update_gamma(s, w.projected.coords, w.config);
    auto duals = mvtm::update_duals(s, w.projected.coords, w.config);
    s.lambda1 = std::move(duals.first);
    s.lambda2 = std::move(duals.second);
    benchmark::DoNotOptimize(s.gamma);
  }
}
BENCHMARK(BM_SolverIteration);

void BM_FitSubspace(benchmark::State& state) {
  const Workload& w = workload();
  for (auto _ : state) {
    benchmark::DoNotOptimize(mvtm::fit_subspace(w.docs, 3));
  }
}
BENCHMARK(BM_FitSubspace);

void BM_GenerateCorpus(benchmark::State& state) {
  mvtm::LdaConfig lda;
  lda.topics = 3;
  lda.vocab_size = 200;
  lda.num_docs = 100;
  lda.doc_length = 100;
  lda.seed = 11;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mvtm::generate_lda_corpus(lda));
  }
}
BENCHMARK(BM_GenerateCorpus);

void BM_RecoverBeta(benchmark::State& state) {
  const Workload& w = workload();
  const mvtm::FitResult fit = mvtm::run(w.projected, w.config);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mvtm::recover_beta(w.subspace, fit.gamma_hat));
  }
}
BENCHMARK(BM_RecoverBeta);

}  // namespace

BENCHMARK_MAIN();
