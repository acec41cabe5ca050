#include <benchmark/benchmark.h>

#include <numeric>
#include <vector>

#include "auctag/corpus.hpp"
#include "auctag/features.hpp"
#include "auctag/model.hpp"
#include "auctag/optimize.hpp"
#include "auctag/random.hpp"
#include "auctag/scenarios.hpp"

namespace {

struct Fixture {
  auctag::Corpus corpus;
  std::vector<auctag::LabeledWindow> windows;
  auctag::FeatureConfig features;
  std::vector<auctag::Example> examples;
  auctag::Model model;
};

const Fixture& fixture() {
  static const Fixture f = [] {
    Fixture out;
    auctag::SynthSpec spec;
    spec.n_sessions = 10;
    spec.sentences_per_session = 50;
    spec.seed = 3;
    out.corpus = auctag::synth_corpus(spec);
    out.windows = auctag::build_context_windows(out.corpus, true);
    out.features.dim = 4096;
    out.examples = auctag::featurize_all(out.windows, out.features);
    out.model = auctag::init_model(out.corpus.label_set, 32, out.features, 7);
    return out;
  }();
  return f;
}

void BM_Featurize(benchmark::State& state) {
  const auto& f = fixture();
  std::size_t i = 0;
  for (auto _ : state) {
    auto fv = auctag::featurize(f.windows[i % f.windows.size()].window, f.features);
    benchmark::DoNotOptimize(fv);
    ++i;
  }
}
BENCHMARK(BM_Featurize);

void BM_AucPairLoss(benchmark::State& state) {
  auctag::Rng rng(1);
  std::vector<double> pos(state.range(0)), neg(state.range(0));
  for (auto& v : pos) v = rng.uniform01();
  for (auto& v : neg) v = rng.uniform01();
  for (auto _ : state) {
    benchmark::DoNotOptimize(auctag::auc_pair_loss(pos, neg, 1.0));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_AucPairLoss)->Range(8, 4096)->Complexity();

std::vector<std::size_t> first_batch(std::size_t n) {
  std::vector<std::size_t> batch(n);
  std::iota(batch.begin(), batch.end(), 0);
  return batch;
}

void BM_CeGradient(benchmark::State& state) {
  const auto& f = fixture();
  auto batch = first_batch(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto lg = auctag::ce_loss_and_grad(f.model, f.examples, batch);
    benchmark::DoNotOptimize(lg.loss);
  }
}
BENCHMARK(BM_CeGradient)->Arg(32)->Arg(128);

void BM_AucGradient(benchmark::State& state) {
  const auto& f = fixture();
  auto batch = first_batch(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto lg = auctag::auc_loss_and_grad(f.model, f.examples, 1.0, batch);
    benchmark::DoNotOptimize(lg.loss);
  }
}
BENCHMARK(BM_AucGradient)->Arg(32)->Arg(128);

void BM_SgdStep(benchmark::State& state) {
  const auto& f = fixture();
  auto params = f.model.params;
  auto grad = params.zeros_like();
  auto velocity = params.zeros_like();
  for (auto _ : state) {
    auctag::sgd_step(params, grad, velocity, 0.1, 0.9);
    benchmark::ClobberMemory();
  }
}
BENCHMARK(BM_SgdStep);

}  // namespace

BENCHMARK_MAIN();
