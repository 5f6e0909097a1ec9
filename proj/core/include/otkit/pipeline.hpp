#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "otkit/cluster.hpp"
#include "otkit/corpus.hpp"
#include "otkit/features.hpp"
#include "otkit/labeling.hpp"
#include "otkit/resources.hpp"
#include "otkit/vote.hpp"

// End-to-end unsupervised runs.
//
// One "judge" is the full chain for a single feature scheme:
//   extract -> vocabulary -> tf (-> tf-idf) -> PCA -> k-means(k=2, restarts)
//   -> marker-based labeling.
// run_pipeline executes the configured judges and, when three or more are
// configured, fuses their labels by majority vote.  Gold labels, when
// present, are consumed only to score results (and upstream to select
// markers); every consuming step is listed in the report's label_usage
// audit field.

namespace otkit {

enum class Strategy : std::uint8_t { FLAT, TWO_PHASE };

Strategy parse_strategy(std::string_view name);
const char* strategy_name(Strategy s) noexcept;

struct RunConfig {
  std::uint64_t seed = 0;
  std::size_t chunk_target = 2000;
  std::vector<Scheme> schemes = {Scheme::FW};
  // FW defaults to tf-idf, every other scheme to plain tf; entries here
  // override per scheme.
  std::map<Scheme, Weighting> weighting;
  std::size_t vocab_cap = 1000;
  double variance_covered = 0.1;
  int n_restarts = 5;
  int max_iterations = 100;
  double delta = 0.05;
  double epsilon = 0.001;
  double alpha = 1.0;
  std::optional<int> k_domains;
  std::optional<Strategy> strategy;
  std::pair<std::uint64_t, std::uint64_t> ratio_o_to_t{1, 1};
};

Weighting effective_weighting(const RunConfig& cfg, Scheme scheme);

nlohmann::json run_config_to_json(const RunConfig& cfg);
RunConfig run_config_from_json(const nlohmann::json& j);

// FNV-1a of arbitrary bytes as 16 hex digits; the primitive behind
// config_hash, exposed for hashing other canonical-JSON artifacts.
std::string fnv1a_hex(std::string_view bytes);

// FNV-1a hash (hex) of the canonical JSON form; echoed into every report so
// downstream artifacts can be traced to their configuration.
std::string config_hash(const RunConfig& cfg);

struct JudgeResult {
  Scheme scheme = Scheme::FW;
  Weighting weighting = Weighting::TF;
  std::size_t vocab_size = 0;
  int pca_components = 0;
  ClusteringRun run;
  std::optional<double> majority_accuracy;       // requires gold labels
  std::map<std::string, Label> labels;           // empty without markers
  std::optional<double> ot_accuracy;             // requires markers + gold
  std::optional<LabelDecision> decision;
};

struct PipelineReport {
  RunConfig config;
  std::string hash;                      // config_hash(config)
  std::vector<std::string> chunk_ids;
  std::vector<JudgeResult> judges;
  std::map<std::string, Label> voted;    // empty unless >= 3 judges
  std::optional<double> voted_ot_accuracy;
  std::vector<std::string> label_usage;  // audit: steps that read gold labels
};

// Single-judge chain; the seed stream is derive_seed(cfg.seed, judge,
// scheme), so a one-scheme run_pipeline and the same judge inside a panel
// produce bit-identical results.
JudgeResult run_judge(const RunConfig& cfg, const ChunkSet& chunks,
                      const Resources& res, Scheme scheme,
                      const MarkerSets* markers);

PipelineReport run_pipeline(const RunConfig& cfg, const ChunkSet& chunks,
                            const Resources& res, const MarkerSets* markers);

// The one number a run is summarized by: voted O/T accuracy when a panel
// voted, the single judge's O/T accuracy when markers were available, and
// its majority-clustering accuracy otherwise.  Absent without gold labels.
std::optional<double> headline_accuracy(const PipelineReport& report);

enum class SweepAxis : std::uint8_t { N_CHUNKS, CHUNK_SIZE };

SweepAxis parse_sweep_axis(std::string_view name);
const char* sweep_axis_name(SweepAxis a) noexcept;

struct CurvePoint {
  std::size_t point = 0;
  double mean_accuracy = 0.0;  // meaningless when skipped
  double stddev = 0.0;
  int seeds = 0;               // 0 marks a skipped point
  bool skipped = false;
};

// Robustness curves: for N_CHUNKS, seeded stratified down-sampling to each
// requested count; for CHUNK_SIZE, re-chunking the chunks' token streams at
// each requested size (token-carrying chunks required).  Each point is run
// with five derived seeds; rows report mean and sample standard deviation.
// Points exceeding the available data yield a warning row with seeds=0.
std::vector<CurvePoint> sensitivity_sweep(const RunConfig& cfg,
                                          const ChunkSet& chunks,
                                          const Resources& res,
                                          const MarkerSets* markers,
                                          SweepAxis axis,
                                          const std::vector<std::size_t>& points);

}  // namespace otkit
