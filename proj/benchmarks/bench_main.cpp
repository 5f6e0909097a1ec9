// Microbenchmarks for the hot paths: character-trigram extraction, PCA
// fitting, restarted k-means, divergence evaluation, and the end-to-end
// single-judge chain.  Corpora come from the synthetic generator, so every
// run measures identical inputs.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "otkit/cluster.hpp"
#include "otkit/features.hpp"
#include "otkit/labeling.hpp"
#include "otkit/pca.hpp"
#include "otkit/pipeline.hpp"
#include "otkit/rng.hpp"
#include "otkit/synth.hpp"

namespace {

using namespace otkit;

SyntheticData corpus(std::size_t chunks_per_class, std::size_t chunk_size) {
  SyntheticSpec spec;
  spec.n_chunks_per_class = chunks_per_class;
  spec.chunk_size = chunk_size;
  spec.fw_vocab_size = 120;
  spec.shifted_fw_count = 20;
  spec.shift_ratio = 1.4;
  spec.seed = 42;
  return gen_synthetic(spec);
}

void bm_char3_extraction(benchmark::State& state) {
  const auto data = corpus(static_cast<std::size_t>(state.range(0)), 1000);
  std::size_t terms = 0;
  for (auto _ : state) {
    const TermCounts counts =
        corpus_counts(data.chunks, Scheme::CHAR3, data.resources);
    terms = counts.size();
    benchmark::DoNotOptimize(counts);
  }
  state.counters["distinct_trigrams"] = static_cast<double>(terms);
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(data.chunks.chunks.size()));
}

void bm_vectorize_fw(benchmark::State& state) {
  const auto data = corpus(static_cast<std::size_t>(state.range(0)), 1000);
  const auto counts = corpus_counts(data.chunks, Scheme::FW, data.resources);
  const auto vocab = build_vocabulary(counts, Scheme::FW, 1000, data.resources);
  for (auto _ : state) {
    const FeatureMatrix m = vectorize(data.chunks, vocab, data.resources);
    benchmark::DoNotOptimize(m);
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(data.chunks.chunks.size()));
}

Eigen::MatrixXd random_matrix(int n, int d, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd m(n, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = rng.uniform();
  return m;
}

void bm_pca_fit(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const Eigen::MatrixXd rows = random_matrix(400, d, 7);
  for (auto _ : state) {
    const PcaModel model = pca_fit(rows, 0.1);
    benchmark::DoNotOptimize(model);
  }
}

void bm_kmeans_restarts(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Eigen::MatrixXd data = random_matrix(n, 8, 11);
  // Pull two halves apart so the problem has structure.
  for (int i = 0; i < n / 2; ++i) data.row(i).array() += 3.0;
  ClusterConfig cfg;
  cfg.seed = 3;
  for (auto _ : state) {
    const ClusteringRun run = best_of_restarts(data, 2, cfg);
    benchmark::DoNotOptimize(run);
  }
}

void bm_js_distance(benchmark::State& state) {
  const int v = static_cast<int>(state.range(0));
  std::vector<std::string> vocab(static_cast<std::size_t>(v));
  for (int i = 0; i < v; ++i) vocab[static_cast<std::size_t>(i)] = "w" + std::to_string(i);
  Rng rng(5);
  auto random_lm = [&] {
    std::map<std::string, std::int64_t> counts;
    for (const auto& w : vocab)
      counts[w] = static_cast<std::int64_t>(rng.below(1000));
    return unigram_lm(counts, vocab, 0.001);
  };
  const UnigramLM p = random_lm();
  const UnigramLM q = random_lm();
  for (auto _ : state) {
    benchmark::DoNotOptimize(js_distance(p, q));
  }
}

void bm_single_judge(benchmark::State& state) {
  const auto data = corpus(static_cast<std::size_t>(state.range(0)), 1000);
  RunConfig cfg;
  cfg.seed = 9;
  for (auto _ : state) {
    const JudgeResult judge =
        run_judge(cfg, data.chunks, data.resources, Scheme::FW, nullptr);
    benchmark::DoNotOptimize(judge);
  }
}

BENCHMARK(bm_char3_extraction)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_vectorize_fw)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_pca_fit)->Arg(60)->Arg(120)->Arg(240)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_kmeans_restarts)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_js_distance)->Arg(100)->Arg(1000);
BENCHMARK(bm_single_judge)->Arg(50)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
