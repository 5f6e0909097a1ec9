#include "otkit/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>

#include "otkit/error.hpp"
#include "otkit/parallel.hpp"
#include "otkit/pca.hpp"
#include "otkit/rng.hpp"

namespace otkit {

Strategy parse_strategy(std::string_view name) {
  std::string n(name);
  for (char& c : n) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (n == "flat") return Strategy::FLAT;
  if (n == "two-phase" || n == "two_phase" || n == "twophase")
    return Strategy::TWO_PHASE;
  fail(Errc::config, "unknown strategy '" + std::string(name) + "'");
}

const char* strategy_name(Strategy s) noexcept {
  return s == Strategy::FLAT ? "flat" : "two-phase";
}

Weighting effective_weighting(const RunConfig& cfg, Scheme scheme) {
  const auto it = cfg.weighting.find(scheme);
  if (it != cfg.weighting.end()) return it->second;
  // Function words profit from down-weighting the ubiquitous terms; the
  // sparser schemes are left as plain tf.
  return scheme == Scheme::FW ? Weighting::TFIDF : Weighting::TF;
}

nlohmann::json run_config_to_json(const RunConfig& cfg) {
  nlohmann::json j;
  j["seed"] = cfg.seed;
  j["chunk_target"] = cfg.chunk_target;
  auto schemes = nlohmann::json::array();
  for (const Scheme s : cfg.schemes) schemes.push_back(scheme_name(s));
  j["schemes"] = std::move(schemes);
  nlohmann::json weighting = nlohmann::json::object();
  for (const Scheme s : cfg.schemes)
    weighting[scheme_name(s)] = weighting_name(effective_weighting(cfg, s));
  j["weighting"] = std::move(weighting);
  j["vocab_cap"] = cfg.vocab_cap;
  j["variance_covered"] = cfg.variance_covered;
  j["n_restarts"] = cfg.n_restarts;
  j["max_iterations"] = cfg.max_iterations;
  j["delta"] = cfg.delta;
  j["epsilon"] = cfg.epsilon;
  j["alpha"] = cfg.alpha;
  if (cfg.k_domains) j["k_domains"] = *cfg.k_domains;
  if (cfg.strategy) j["strategy"] = strategy_name(*cfg.strategy);
  j["ratio_o_to_t"] = {cfg.ratio_o_to_t.first, cfg.ratio_o_to_t.second};
  return j;
}

RunConfig run_config_from_json(const nlohmann::json& j) {
  RunConfig cfg;
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("chunk_target"))
    cfg.chunk_target = j["chunk_target"].get<std::size_t>();
  if (j.contains("schemes")) {
    cfg.schemes.clear();
    for (const auto& s : j["schemes"])
      cfg.schemes.push_back(parse_scheme(s.get<std::string>()));
    require(!cfg.schemes.empty(), Errc::config, "schemes list is empty");
  }
  if (j.contains("weighting"))
    for (const auto& [k, v] : j["weighting"].items())
      cfg.weighting[parse_scheme(k)] = parse_weighting(v.get<std::string>());
  if (j.contains("vocab_cap")) cfg.vocab_cap = j["vocab_cap"].get<std::size_t>();
  if (j.contains("variance_covered"))
    cfg.variance_covered = j["variance_covered"].get<double>();
  if (j.contains("n_restarts")) cfg.n_restarts = j["n_restarts"].get<int>();
  if (j.contains("max_iterations"))
    cfg.max_iterations = j["max_iterations"].get<int>();
  if (j.contains("delta")) cfg.delta = j["delta"].get<double>();
  if (j.contains("epsilon")) cfg.epsilon = j["epsilon"].get<double>();
  if (j.contains("alpha")) cfg.alpha = j["alpha"].get<double>();
  if (j.contains("k_domains")) cfg.k_domains = j["k_domains"].get<int>();
  if (j.contains("strategy"))
    cfg.strategy = parse_strategy(j["strategy"].get<std::string>());
  if (j.contains("ratio_o_to_t")) {
    const auto& r = j["ratio_o_to_t"];
    require(r.is_array() && r.size() == 2, Errc::config,
            "ratio_o_to_t must be a [numerator, denominator] pair");
    cfg.ratio_o_to_t = {r[0].get<std::uint64_t>(), r[1].get<std::uint64_t>()};
  }
  return cfg;
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string config_hash(const RunConfig& cfg) {
  return fnv1a_hex(run_config_to_json(cfg).dump());
}

namespace {

// Gold labels when every chunk carries one; empty otherwise.
std::vector<Label> gold_if_complete(const ChunkSet& chunks) {
  std::vector<Label> gold;
  gold.reserve(chunks.chunks.size());
  for (const auto& c : chunks.chunks) {
    if (!c.label) return {};
    gold.push_back(*c.label);
  }
  return gold;
}

double label_accuracy(const std::map<std::string, Label>& pred,
                      const ChunkSet& chunks, const std::vector<Label>& gold) {
  std::size_t hit = 0;
  for (std::size_t i = 0; i < chunks.chunks.size(); ++i)
    if (pred.at(chunks.chunks[i].id) == gold[i]) ++hit;
  return static_cast<double>(hit) / static_cast<double>(chunks.chunks.size());
}

}  // namespace

JudgeResult run_judge(const RunConfig& cfg, const ChunkSet& chunks,
                      const Resources& res, Scheme scheme,
                      const MarkerSets* markers) {
  require(!chunks.chunks.empty(), Errc::insufficient_data, "no chunks to classify");
  const std::uint64_t judge_seed =
      derive_seed(cfg.seed, SeedTag::judge, static_cast<std::uint64_t>(scheme));

  JudgeResult jr;
  jr.scheme = scheme;
  jr.weighting = effective_weighting(cfg, scheme);

  const Vocabulary vocab = build_vocabulary(corpus_counts(chunks, scheme, res),
                                            scheme, cfg.vocab_cap, res);
  jr.vocab_size = vocab.terms.size();
  FeatureMatrix m = vectorize(chunks, vocab, res);
  if (jr.weighting == Weighting::TFIDF) m = apply_tfidf(m);

  const PcaModel pca = pca_fit(m, cfg.variance_covered);
  jr.pca_components = static_cast<int>(pca_output_dims(pca));
  const Eigen::MatrixXd proj = pca_transform(pca, m);

  const ClusterConfig cc{cfg.n_restarts, cfg.max_iterations, judge_seed};
  jr.run = best_of_restarts(proj, 2, cc);

  const std::vector<Label> gold = gold_if_complete(chunks);
  if (!gold.empty()) jr.majority_accuracy = evaluate_majority(jr.run, gold);

  if (markers) {
    LabelDecision decision;
    const std::vector<Label> labels = label_clusters(
        jr.run, chunks, *markers, cfg.alpha, cfg.epsilon, &decision);
    jr.decision = decision;
    for (std::size_t i = 0; i < labels.size(); ++i)
      jr.labels[chunks.chunks[i].id] = labels[i];
    if (!gold.empty()) jr.ot_accuracy = label_accuracy(jr.labels, chunks, gold);
  }
  return jr;
}

PipelineReport run_pipeline(const RunConfig& cfg, const ChunkSet& chunks,
                            const Resources& res, const MarkerSets* markers) {
  require(!cfg.schemes.empty(), Errc::config, "no feature schemes configured");
  require(cfg.schemes.size() == 1 || cfg.schemes.size() % 2 == 1, Errc::config,
          "a judge panel needs an odd number of schemes to vote");

  PipelineReport report;
  report.config = cfg;
  report.hash = config_hash(cfg);
  report.chunk_ids.reserve(chunks.chunks.size());
  for (const auto& c : chunks.chunks) report.chunk_ids.push_back(c.id);

  report.judges.resize(cfg.schemes.size());
  parallel_for(cfg.schemes.size(), [&](std::size_t i) {
    report.judges[i] = run_judge(cfg, chunks, res, cfg.schemes[i], markers);
  });

  const std::vector<Label> gold = gold_if_complete(chunks);
  if (markers && cfg.schemes.size() >= 3) {
    std::vector<JudgeVerdict> verdicts;
    verdicts.reserve(report.judges.size());
    for (const auto& j : report.judges)
      verdicts.push_back(JudgeVerdict{j.scheme, j.labels});
    report.voted = vote(verdicts);
    if (!gold.empty())
      report.voted_ot_accuracy = label_accuracy(report.voted, chunks, gold);
  }

  if (markers) report.label_usage.push_back("marker-selection:reference");
  if (!gold.empty()) report.label_usage.push_back("evaluation:gold-labels");
  return report;
}

std::optional<double> headline_accuracy(const PipelineReport& report) {
  if (report.voted_ot_accuracy) return report.voted_ot_accuracy;
  if (!report.judges.empty()) {
    if (report.judges.front().ot_accuracy)
      return report.judges.front().ot_accuracy;
    return report.judges.front().majority_accuracy;
  }
  return std::nullopt;
}

SweepAxis parse_sweep_axis(std::string_view name) {
  std::string n(name);
  for (char& c : n) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (n == "n_chunks" || n == "n-chunks" || n == "chunks") return SweepAxis::N_CHUNKS;
  if (n == "chunk_size" || n == "chunk-size" || n == "size")
    return SweepAxis::CHUNK_SIZE;
  fail(Errc::config, "unknown sweep axis '" + std::string(name) + "'");
}

const char* sweep_axis_name(SweepAxis a) noexcept {
  return a == SweepAxis::N_CHUNKS ? "n_chunks" : "chunk_size";
}

namespace {

// Stratified down-sampling to exactly `want` chunks, class proportions
// preserved by largest-remainder apportionment, corpus order kept.
ChunkSet subsample_chunks(const ChunkSet& chunks, std::size_t want,
                          std::uint64_t seed) {
  std::vector<std::size_t> o_idx, t_idx;
  for (std::size_t i = 0; i < chunks.chunks.size(); ++i) {
    const auto& c = chunks.chunks[i];
    require(c.label.has_value(), Errc::missing_annotation,
            "sweep down-sampling needs gold labels on every chunk");
    (*c.label == Label::O ? o_idx : t_idx).push_back(i);
  }
  const double n = static_cast<double>(chunks.chunks.size());
  const double frac_o = static_cast<double>(o_idx.size()) * static_cast<double>(want) / n;
  std::size_t want_o = static_cast<std::size_t>(frac_o);
  std::size_t want_t = want - want_o;
  if (want_t > t_idx.size()) {  // remainder landed on too few T chunks
    want_o += want_t - t_idx.size();
    want_t = t_idx.size();
  }
  if (want_o > o_idx.size()) {
    want_t += want_o - o_idx.size();
    want_o = o_idx.size();
  }

  std::vector<std::size_t> keep;
  {
    Rng rng(derive_seed(seed, SeedTag::subsample, 0));
    for (const auto k : rng.sample_indices(o_idx.size(), want_o))
      keep.push_back(o_idx[k]);
  }
  {
    Rng rng(derive_seed(seed, SeedTag::subsample, 1));
    for (const auto k : rng.sample_indices(t_idx.size(), want_t))
      keep.push_back(t_idx[k]);
  }
  std::sort(keep.begin(), keep.end());

  ChunkSet out;
  out.target_size = chunks.target_size;
  out.provenance = chunks.provenance;
  out.chunks.reserve(keep.size());
  for (const auto i : keep) out.chunks.push_back(chunks.chunks[i]);
  return out;
}

// Re-chunk at a new target by treating every chunk as a document.  Chunks
// produced across a class or domain boundary lose their gold label and are
// dropped, since sweep points are only comparable when every chunk can be
// scored.
ChunkSet rechunk(const ChunkSet& chunks, std::size_t new_size) {
  std::vector<Document> docs;
  docs.reserve(chunks.chunks.size());
  for (const auto& c : chunks.chunks) {
    require(!c.tokens.empty(), Errc::missing_annotation,
            "chunk-size sweep needs token-carrying chunks");
    Document d;
    d.id = c.id;
    d.tokens = c.tokens;
    d.pos = c.pos;
    d.label = c.label;
    d.domain = c.domain;
    docs.push_back(std::move(d));
  }
  ChunkSet rechunked = make_chunks(docs, new_size);
  ChunkSet filtered;
  filtered.target_size = rechunked.target_size;
  filtered.provenance = chunks.provenance;
  for (auto& c : rechunked.chunks)
    if (c.label) filtered.chunks.push_back(std::move(c));
  return filtered;
}

bool runnable_point(const ChunkSet& set) {
  if (set.chunks.size() < 4) return false;
  std::size_t n_o = 0, n_t = 0;
  for (const auto& c : set.chunks) {
    if (!c.label) return false;
    (*c.label == Label::O ? n_o : n_t) += 1;
  }
  return n_o >= 2 && n_t >= 2;
}

}  // namespace

std::vector<CurvePoint> sensitivity_sweep(const RunConfig& cfg,
                                          const ChunkSet& chunks,
                                          const Resources& res,
                                          const MarkerSets* markers,
                                          SweepAxis axis,
                                          const std::vector<std::size_t>& points) {
  constexpr int kSeedsPerPoint = 5;
  require(std::is_sorted(points.begin(), points.end()), Errc::config,
          "sweep points must be sorted ascending");

  std::vector<CurvePoint> curve;
  curve.reserve(points.size());

  for (std::size_t pi = 0; pi < points.size(); ++pi) {
    const std::size_t point = points[pi];
    CurvePoint row;
    row.point = point;

    if (axis == SweepAxis::N_CHUNKS && point > chunks.chunks.size()) {
      row.skipped = true;
      curve.push_back(row);
      continue;
    }

    std::vector<double> acc(kSeedsPerPoint, 0.0);
    bool skipped = false;
    for (int rep = 0; rep < kSeedsPerPoint && !skipped; ++rep) {
      const std::uint64_t rep_seed = derive_seed(
          derive_seed(cfg.seed, SeedTag::sweep, pi), SeedTag::sweep,
          static_cast<std::uint64_t>(rep));
      ChunkSet working = axis == SweepAxis::N_CHUNKS
                             ? subsample_chunks(chunks, point, rep_seed)
                             : rechunk(chunks, point);
      if (!runnable_point(working)) {
        skipped = true;
        break;
      }
      RunConfig rep_cfg = cfg;
      rep_cfg.seed = rep_seed;
      const PipelineReport report = run_pipeline(rep_cfg, working, res, markers);
      const auto a = headline_accuracy(report);
      require(a.has_value(), Errc::evaluation,
              "sweep points need gold labels to score");
      acc[static_cast<std::size_t>(rep)] = *a;
    }

    if (skipped) {
      row.skipped = true;
      curve.push_back(row);
      continue;
    }

    double mean = 0.0;
    for (const double a : acc) mean += a;
    mean /= kSeedsPerPoint;
    double var = 0.0;
    for (const double a : acc) var += (a - mean) * (a - mean);
    var /= (kSeedsPerPoint - 1);

    row.mean_accuracy = mean;
    row.stddev = std::sqrt(var);
    row.seeds = kSeedsPerPoint;
    curve.push_back(row);
  }
  return curve;
}

}  // namespace otkit
