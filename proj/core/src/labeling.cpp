#include "otkit/labeling.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <unordered_set>

#include "otkit/error.hpp"

namespace otkit {

namespace {

std::string lowercase_ascii(std::string s) {
  for (char& c : s)
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

// Sorted union of the two marker sets: the shared LM vocabulary.
std::vector<std::string> marker_vocabulary(const MarkerSets& m) {
  std::vector<std::string> v;
  v.reserve(m.o_markers.size() + m.t_markers.size());
  v.insert(v.end(), m.o_markers.begin(), m.o_markers.end());
  v.insert(v.end(), m.t_markers.begin(), m.t_markers.end());
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

void check_markers(const MarkerSets& m) {
  require(!m.o_markers.empty() && !m.t_markers.empty(), Errc::marker_selection,
          "both marker sets must be non-empty");
  std::unordered_set<std::string> o(m.o_markers.begin(), m.o_markers.end());
  for (const auto& w : m.t_markers)
    require(!o.count(w), Errc::marker_selection,
            "marker '" + w + "' appears in both sets");
}

}  // namespace

ReferenceFrequencies reference_frequencies(const ChunkSet& reference,
                                           const std::vector<std::string>& fw_list) {
  require(!reference.chunks.empty(), Errc::insufficient_data,
          "reference sample is empty");
  std::unordered_set<std::string> fw(fw_list.begin(), fw_list.end());

  std::map<std::string, std::int64_t> count_o, count_t;
  std::int64_t tokens_o = 0, tokens_t = 0;
  for (const auto& c : reference.chunks) {
    require(c.label.has_value(), Errc::missing_annotation,
            "reference chunk '" + c.id + "' has no gold label");
    require(!c.tokens.empty(), Errc::missing_annotation,
            "reference chunk '" + c.id + "' carries no tokens");
    auto& counts = *c.label == Label::O ? count_o : count_t;
    (*c.label == Label::O ? tokens_o : tokens_t) +=
        static_cast<std::int64_t>(c.token_count);
    for (const auto& tok : c.tokens) {
      std::string low = lowercase_ascii(tok);
      if (fw.count(low)) ++counts[low];
    }
  }
  require(tokens_o > 0 && tokens_t > 0, Errc::insufficient_data,
          "reference sample must contain both classes");

  // The maps are total over the list: a word never observed in one class
  // reads as 0.0, so callers need no existence checks.
  ReferenceFrequencies freq;
  for (const auto& w : fw) {
    const auto o_it = count_o.find(w);
    freq.o[w] = o_it == count_o.end()
                    ? 0.0
                    : static_cast<double>(o_it->second) /
                          static_cast<double>(tokens_o);
    const auto t_it = count_t.find(w);
    freq.t[w] = t_it == count_t.end()
                    ? 0.0
                    : static_cast<double>(t_it->second) /
                          static_cast<double>(tokens_t);
  }
  return freq;
}

MarkerSets select_markers(const ReferenceFrequencies& freq, double delta) {
  require(delta > 0.0, Errc::config, "delta must be positive");
  MarkerSets m;
  m.delta = delta;

  // Walk the union of both key sets in sorted order.
  auto io = freq.o.begin();
  auto it = freq.t.begin();
  auto classify = [&](const std::string& w, double fo, double ft) {
    if (fo <= 0.0 && ft <= 0.0) return;
    if (ft <= 0.0) {
      m.o_markers.push_back(w);
    } else if (fo <= 0.0) {
      m.t_markers.push_back(w);
    } else {
      const double ratio = fo / ft;
      if (ratio > 1.0 + delta)
        m.o_markers.push_back(w);
      else if (ratio < 1.0 - delta)
        m.t_markers.push_back(w);
      // near 1: discriminates nothing, drop
    }
  };
  while (io != freq.o.end() || it != freq.t.end()) {
    if (it == freq.t.end() || (io != freq.o.end() && io->first < it->first)) {
      classify(io->first, io->second, 0.0);
      ++io;
    } else if (io == freq.o.end() || it->first < io->first) {
      classify(it->first, 0.0, it->second);
      ++it;
    } else {
      classify(io->first, io->second, it->second);
      ++io;
      ++it;
    }
  }
  require(!m.o_markers.empty() && !m.t_markers.empty(), Errc::marker_selection,
          "no usable markers at delta=" + std::to_string(delta) +
              "; the reference sample separates the classes too weakly");
  return m;
}

UnigramLM unigram_lm(const std::map<std::string, std::int64_t>& counts,
                     const std::vector<std::string>& vocabulary, double epsilon) {
  require(!vocabulary.empty(), Errc::config, "language model vocabulary is empty");
  require(epsilon > 0.0, Errc::config, "epsilon must be positive");

  UnigramLM lm;
  lm.vocabulary = vocabulary;
  lm.epsilon = epsilon;
  lm.probabilities.resize(static_cast<Eigen::Index>(vocabulary.size()));

  std::int64_t total = 0;
  for (std::size_t i = 0; i < vocabulary.size(); ++i) {
    auto it = counts.find(vocabulary[i]);
    const std::int64_t n = it == counts.end() ? 0 : it->second;
    require(n >= 0, Errc::config, "negative count for '" + vocabulary[i] + "'");
    total += n;
    lm.probabilities(static_cast<Eigen::Index>(i)) = static_cast<double>(n);
  }
  const double denom = static_cast<double>(total) +
                       epsilon * static_cast<double>(vocabulary.size());
  lm.probabilities = (lm.probabilities.array() + epsilon) / denom;
  return lm;
}

UnigramLM prototype_lm(const std::vector<std::string>& markers,
                       const std::vector<std::string>& vocabulary, double epsilon) {
  std::map<std::string, std::int64_t> counts;
  for (const auto& w : markers) counts[w] = 1;
  return unigram_lm(counts, vocabulary, epsilon);
}

double js_distance(const UnigramLM& p, const UnigramLM& q) {
  require(p.vocabulary == q.vocabulary, Errc::dim_mismatch,
          "language models must share one vocabulary");
  const Eigen::Index n = p.probabilities.size();
  double div = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double pi = p.probabilities(i);
    const double qi = q.probabilities(i);
    const double mi = 0.5 * (pi + qi);
    // One commutative sum per term, so swapping p and q accumulates the
    // bit-identical sequence: symmetry holds exactly, not just approximately.
    const double from_p = pi > 0.0 ? 0.5 * pi * std::log2(pi / mi) : 0.0;
    const double from_q = qi > 0.0 ? 0.5 * qi * std::log2(qi / mi) : 0.0;
    div += from_p + from_q;
  }
  // Base-2 JS divergence lies in [0, 1]; clip the numerical fuzz at both ends.
  div = std::min(std::max(div, 0.0), 1.0);
  return std::sqrt(div);
}

LabelDecision assign_labels(const UnigramLM& c1, const UnigramLM& c2,
                            const UnigramLM& p_o, const UnigramLM& p_t,
                            double alpha) {
  require(alpha > 0.0, Errc::config, "alpha must be positive");
  LabelDecision d;
  d.alpha = alpha;
  d.d_o_c1 = js_distance(p_o, c1);
  d.d_t_c1 = js_distance(p_t, c1);
  d.d_o_c2 = js_distance(p_o, c2);
  d.d_t_c2 = js_distance(p_t, c2);
  // Strict inequality: a tie gives cluster 1 the translated label.
  const bool c1_original = d.d_o_c1 * d.d_t_c2 < alpha * d.d_o_c2 * d.d_t_c1;
  d.cluster1 = c1_original ? Label::O : Label::T;
  d.cluster2 = c1_original ? Label::T : Label::O;
  return d;
}

std::vector<Label> label_clusters(const ClusteringRun& run, const ChunkSet& set,
                                  const MarkerSets& markers, double alpha,
                                  double epsilon, LabelDecision* decision) {
  require(run.k == 2, Errc::arity,
          "cluster labeling expects exactly 2 clusters, got " +
              std::to_string(run.k));
  require(run.assignments.size() == set.chunks.size(), Errc::dim_mismatch,
          "clustering size does not match the chunk set");
  check_markers(markers);

  const std::vector<std::string> vocab = marker_vocabulary(markers);
  std::unordered_set<std::string> in_vocab(vocab.begin(), vocab.end());

  std::map<std::string, std::int64_t> counts[2];
  for (std::size_t i = 0; i < set.chunks.size(); ++i) {
    auto& c = counts[run.assignments[i]];
    const Chunk& chunk = set.chunks[i];
    require(!chunk.tokens.empty(), Errc::missing_annotation,
            "chunk '" + chunk.id + "' carries no tokens");
    for (const auto& tok : chunk.tokens) {
      std::string low = lowercase_ascii(tok);
      if (in_vocab.count(low)) ++c[low];
    }
  }

  const UnigramLM lm1 = unigram_lm(counts[0], vocab, epsilon);
  const UnigramLM lm2 = unigram_lm(counts[1], vocab, epsilon);
  const UnigramLM p_o = prototype_lm(markers.o_markers, vocab, epsilon);
  const UnigramLM p_t = prototype_lm(markers.t_markers, vocab, epsilon);

  const LabelDecision d = assign_labels(lm1, lm2, p_o, p_t, alpha);
  if (decision) *decision = d;

  std::vector<Label> labels(set.chunks.size());
  for (std::size_t i = 0; i < labels.size(); ++i)
    labels[i] = run.assignments[i] == 0 ? d.cluster1 : d.cluster2;
  return labels;
}

nlohmann::json markers_to_json(const MarkerSets& m) {
  nlohmann::json j;
  j["o_markers"] = m.o_markers;
  j["t_markers"] = m.t_markers;
  j["delta"] = m.delta;
  j["reference"] = m.reference;
  return j;
}

MarkerSets markers_from_json(const nlohmann::json& j) {
  MarkerSets m;
  m.o_markers = j.at("o_markers").get<std::vector<std::string>>();
  m.t_markers = j.at("t_markers").get<std::vector<std::string>>();
  m.delta = j.at("delta").get<double>();
  if (j.contains("reference")) m.reference = j["reference"].get<std::string>();
  check_markers(m);
  return m;
}

}  // namespace otkit
