#include "otkit/synth.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "otkit/error.hpp"
#include "otkit/rng.hpp"

namespace otkit {

namespace {

// Fixed word-stream roots: word identities must not vary with the corpus
// seed, or corpora from different seeds would stop sharing a vocabulary.
constexpr std::uint64_t kFwWordStream = 0x5eedf00d00000001ull;
constexpr std::uint64_t kTopicWordStream = 0x5eedf00d00000002ull;
constexpr std::uint64_t kMarkerPickStream = 0x5eedf00d00000003ull;

// The top-ranked function words stay class-neutral, like the articles and
// prepositions of a real language; class effects live in the ranks below.
constexpr std::size_t kStableHead = 4;

// Translated text over-uses cohesive markers and prefers flatter, more
// formulaic syntax.  Both effects scale with (shift_ratio - 1), the same
// knob as the frequency shift, so a ratio of exactly 1 produces a corpus
// with no class signal of any kind.  The over-use factor is kept below 1
// so marker dilation stays a secondary effect, weaker than the primary
// frequency shift; it also keeps the two classes' renormalization nearly
// equal, so unshifted words barely drift.
constexpr double kMarkerOveruse = 0.8;   // T boost = 1 + 0.8 * (ratio - 1)
constexpr double kRegroupShare = 0.75;   // q = min(0.9, 0.75 * (ratio - 1))

constexpr const char* kClosedTags[6] = {"DT", "IN", "PRP", "CC", "MD", "RB"};
constexpr const char* kOpenTags[6] = {"NN", "VB", "JJ", "NNS", "VBD", "VBG"};

std::uint64_t hash_string(std::string_view s) {
  // FNV-1a, then one splitmix round to spread the bits.
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  return splitmix64_next(h);
}

// Pronounceable pseudo-word: alternating consonant/vowel, length uniform in
// [min_len, max_len], fully determined by the key.
std::string pseudo_word(std::uint64_t key, std::size_t min_len,
                        std::size_t max_len) {
  static constexpr char consonants[] = "bcdfghjklmnprstvz";
  static constexpr char vowels[] = "aeiou";
  Rng rng(key);
  const std::size_t len = min_len + rng.below(max_len - min_len + 1);
  std::string w;
  w.reserve(len);
  for (std::size_t i = 0; i < len; ++i)
    w.push_back(i % 2 == 0 ? consonants[rng.below(sizeof consonants - 1)]
                           : vowels[rng.below(sizeof vowels - 1)]);
  return w;
}

// Draw a fresh word, retrying with salted keys until it is new.
std::string unique_word(std::uint64_t key, std::size_t min_len, std::size_t max_len,
                        std::unordered_set<std::string>& taken) {
  for (std::uint64_t salt = 0;; ++salt) {
    std::string w =
        pseudo_word(derive_seed(key, SeedTag::design, salt), min_len, max_len);
    if (taken.insert(w).second) return w;
  }
}

// Inclusive-prefix-sum sampler; log-time draws keep million-token corpora
// cheap.  Zero-weight entries are never selected (upper_bound skips flat
// steps of the CDF).
struct CdfSampler {
  std::vector<double> cdf;

  explicit CdfSampler(const std::vector<double>& weights) {
    cdf.resize(weights.size());
    double run = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      run += weights[i];
      cdf[i] = run;
    }
    require(run > 0.0, Errc::internal, "sampler built from zero total weight");
  }

  std::size_t draw(Rng& rng) const {
    const double u = rng.uniform() * cdf.back();
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    const auto idx = static_cast<std::size_t>(it - cdf.begin());
    return idx < cdf.size() ? idx : cdf.size() - 1;
  }
};

std::string capitalize(std::string w) {
  if (!w.empty())
    w[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(w[0])));
  return w;
}

}  // namespace

SyntheticData gen_synthetic(const SyntheticSpec& spec, std::uint64_t replica) {
  require(spec.n_chunks_per_class >= 1, Errc::config,
          "n_chunks_per_class must be >= 1");
  require(spec.chunk_size >= 1, Errc::config, "chunk_size must be >= 1");
  require(spec.fw_vocab_size >= 2, Errc::config, "fw_vocab_size must be >= 2");
  require(spec.shifted_fw_count >= 1 &&
              spec.shifted_fw_count <= spec.fw_vocab_size,
          Errc::config, "shifted_fw_count must lie in [1, fw_vocab_size]");
  require(spec.shift_ratio >= 1.0, Errc::config, "shift_ratio must be >= 1");

  std::vector<DomainSpec> domains = spec.domains;
  if (domains.empty()) domains.push_back(DomainSpec{});  // unnamed, no topics
  {
    std::unordered_set<std::string> names;
    for (const auto& d : domains) {
      require(d.topic_mass >= 0.0 && d.topic_mass < 1.0, Errc::config,
              "topic_mass must lie in [0, 1)");
      require(d.topic_mass == 0.0 || d.topic_vocab_size >= 1, Errc::config,
              "domain '" + d.name +
                  "' assigns topic_mass but has no topic vocabulary");
      require(names.insert(d.name).second, Errc::config,
              "duplicate domain name '" + d.name + "'");
    }
  }

  const std::size_t V = spec.fw_vocab_size;
  const std::size_t S = spec.shifted_fw_count;

  SyntheticData data;

  // ---- design: vocabulary, tags, shifted set (sample-independent) --------

  std::unordered_set<std::string> taken;
  std::vector<std::string> fw(V);
  std::vector<std::string> fw_tag(V);
  for (std::size_t i = 0; i < V; ++i) {
    const std::uint64_t key = derive_seed(kFwWordStream, SeedTag::design, i);
    fw[i] = unique_word(key, 2, 5, taken);
    std::uint64_t h = key;
    fw_tag[i] = kClosedTags[splitmix64_next(h) % 6];
  }

  std::vector<std::vector<std::string>> topic(domains.size());
  std::vector<std::vector<std::string>> topic_tag(domains.size());
  for (std::size_t d = 0; d < domains.size(); ++d) {
    topic[d].resize(domains[d].topic_vocab_size);
    topic_tag[d].resize(domains[d].topic_vocab_size);
    const std::uint64_t root = kTopicWordStream ^ hash_string(domains[d].name);
    for (std::size_t j = 0; j < domains[d].topic_vocab_size; ++j) {
      const std::uint64_t key = derive_seed(root, SeedTag::design, j);
      topic[d][j] = unique_word(key, 6, 9, taken);
      std::uint64_t h = key;
      topic_tag[d][j] = kOpenTags[splitmix64_next(h) % 6];
    }
  }

  // Zipf base over the function words: p_i proportional to 1/(i+1).
  std::vector<double> base(V);
  for (std::size_t i = 0; i < V; ++i) base[i] = 1.0 / static_cast<double>(i + 1);

  // Shifted ranks: one seeded pick per contiguous rank band below the
  // stable head, so every part of the class-bearing spectrum contributes
  // and different seeds pick nearly disjoint sets.  Every shifted word is
  // over-represented in O by the ratio; nothing is shifted the other way —
  // the T side of the signal comes from the marker over-use below.
  std::vector<bool> up(V, false);
  const std::size_t head = std::min(kStableHead, V - S);
  // A ratio of exactly 1 tilts nothing, so no word is over-represented in
  // either class and the shifted lists stay empty (the null corpus).
  if (spec.shift_ratio > 1.0) {
    for (std::size_t b = 0; b < S; ++b) {
      const std::size_t lo = head + b * (V - head) / S;
      const std::size_t hi = head + (b + 1) * (V - head) / S;
      Rng band_rng(derive_seed(spec.seed, SeedTag::design, b));
      const std::size_t pick = lo + band_rng.below(hi - lo);
      up[pick] = true;
      data.shifted_up.push_back(fw[pick]);
    }
  }

  // Cohesive-marker singles: a seeded sample of unshifted below-head words.
  // Seeding them per corpus keeps the over-use effect corpus-specific, the
  // way a supervised model trained on one corpus cannot cash it in on
  // another; skipping the shifted words keeps the two effects separately
  // measurable.
  std::vector<bool> marker_single(V, false);
  {
    std::vector<std::size_t> pool;
    const std::size_t lo = std::min(kStableHead, V / 3);
    for (std::size_t i = lo; i < V; ++i)
      if (!up[i]) pool.push_back(i);
    if (pool.empty())  // degenerate vocabulary: everything shifted
      for (std::size_t i = 0; i < V; ++i) pool.push_back(i);
    Rng pick_rng(derive_seed(spec.seed ^ kMarkerPickStream, SeedTag::design, 0));
    const std::size_t want = std::min<std::size_t>(30, pool.size());
    for (const std::size_t k : pick_rng.sample_indices(pool.size(), want))
      marker_single[pool[k]] = true;
  }

  const double marker_boost =
      1.0 + kMarkerOveruse * (spec.shift_ratio - 1.0);
  if (spec.shift_ratio > 1.0)
    for (std::size_t i = 0; i < V; ++i)
      if (marker_single[i]) data.shifted_down.push_back(fw[i]);

  std::vector<double> p_o(V), p_t(V);
  for (std::size_t i = 0; i < V; ++i) {
    p_o[i] = up[i] ? base[i] * spec.shift_ratio : base[i];
    p_t[i] = marker_single[i] ? base[i] * marker_boost : base[i];
  }

  // ---- per-(class, domain) token distributions ---------------------------

  struct Stream {
    std::size_t domain;
    Label label;
    CdfSampler sampler;
    std::size_t quota = 0;  // chunks to emit
  };
  std::vector<Stream> streams;

  for (std::size_t d = 0; d < domains.size(); ++d) {
    const double tau = domains[d].topic_mass;
    // Domain register tilt: each function word is nudged up or down by the
    // domain's topic_mass, with a sign fixed by (domain, word).  The tilt
    // is class-independent, so within a domain the O:T ratios survive.
    std::vector<double> tilt(V);
    for (std::size_t i = 0; i < V; ++i) {
      const bool up_sign =
          (hash_string(domains[d].name + "\x1f" + fw[i]) & 1ull) != 0;
      tilt[i] = 1.0 + (up_sign ? tau : -tau);
    }
    for (const Label cls : {Label::O, Label::T}) {
      const std::vector<double>& p_cls = cls == Label::O ? p_o : p_t;
      std::vector<double> tilted(V);
      double fw_total = 0.0;
      for (std::size_t i = 0; i < V; ++i) {
        tilted[i] = p_cls[i] * tilt[i];
        fw_total += tilted[i];
      }
      // Final distribution: function words carry (1 - tau) of the mass,
      // topic words tau, topic weights Zipf again.
      std::vector<double> weights;
      weights.reserve(V + topic[d].size());
      for (std::size_t i = 0; i < V; ++i)
        weights.push_back((1.0 - tau) * tilted[i] / fw_total);
      if (tau > 0.0) {
        double topic_total = 0.0;
        for (std::size_t j = 0; j < topic[d].size(); ++j)
          topic_total += 1.0 / static_cast<double>(j + 1);
        for (std::size_t j = 0; j < topic[d].size(); ++j)
          weights.push_back(tau * (1.0 / static_cast<double>(j + 1)) / topic_total);
      }
      streams.push_back(Stream{d, cls, CdfSampler(weights), 0});
    }
  }

  // Spread each class's chunk quota over the domains, first domains taking
  // the remainder.
  for (std::size_t d = 0; d < domains.size(); ++d) {
    const std::size_t quota = spec.n_chunks_per_class / domains.size() +
                              (d < spec.n_chunks_per_class % domains.size() ? 1 : 0);
    streams[2 * d].quota = quota;      // O
    streams[2 * d + 1].quota = quota;  // T
  }

  // ---- sampling -----------------------------------------------------------

  data.chunks.target_size = spec.chunk_size;
  data.chunks.provenance.seed = spec.seed;

  for (std::size_t s = 0; s < streams.size(); ++s) {
    Stream& stream = streams[s];
    if (stream.quota == 0) continue;
    const DomainSpec& dom = domains[stream.domain];
    const std::string dom_part = dom.name.empty() ? "" : dom.name + "-";
    const char cls = label_char(stream.label);

    Document doc;
    doc.id = "synth-" + dom_part + cls;
    doc.tokens.emplace();
    doc.pos.emplace();
    doc.label = stream.label;
    if (!dom.name.empty()) doc.domain = dom.name;

    Rng rng(derive_seed(derive_seed(spec.seed, SeedTag::sample, replica),
                        SeedTag::sample, s));

    auto word_at = [&](std::size_t idx) -> const std::string& {
      return idx < V ? fw[idx] : topic[stream.domain][idx - V];
    };
    auto tag_at = [&](std::size_t idx) -> const std::string& {
      return idx < V ? fw_tag[idx] : topic_tag[stream.domain][idx - V];
    };

    std::vector<std::string> cur_tokens, cur_pos;
    std::size_t emitted = 0;

    auto emit_chunk = [&](std::vector<std::string>& toks,
                          std::vector<std::string>& tags) {
      Chunk c;
      char idbuf[16];
      std::snprintf(idbuf, sizeof idbuf, "%04zu", emitted);
      c.id = "synth-" + dom_part + cls + '-' + idbuf;
      c.token_count = toks.size();
      c.tokens = std::move(toks);
      c.pos = std::move(tags);
      c.label = stream.label;
      if (!dom.name.empty()) c.domain = dom.name;
      c.source_doc_ids.push_back(doc.id);
      doc.tokens->insert(doc.tokens->end(), c.tokens.begin(), c.tokens.end());
      doc.pos->insert(doc.pos->end(), c.pos->begin(), c.pos->end());
      data.chunks.chunks.push_back(std::move(c));
      ++emitted;
    };

    // Translated text prefers flatter, more formulaic word order: a share
    // of T sentences is regrouped by part of speech.  Reordering leaves
    // every unigram count untouched, so the effect is invisible to
    // bag-of-words features and surfaces only through tag and context
    // patterns.
    const double regroup_q =
        stream.label == Label::T && spec.shift_ratio > 1.0
            ? std::min(0.9, kRegroupShare * (spec.shift_ratio - 1.0))
            : 0.0;

    while (emitted < stream.quota) {
      // One sentence: uniform total length in [8, 30], terminator included,
      // first word capitalized so re-tokenized text keeps its boundaries.
      const std::size_t len = 8 + rng.below(23);
      std::vector<std::string> sent_tokens, sent_pos;
      sent_tokens.reserve(len);
      sent_pos.reserve(len);
      for (std::size_t i = 0; i + 1 < len; ++i) {
        const std::size_t idx = stream.sampler.draw(rng);
        sent_tokens.push_back(word_at(idx));
        sent_pos.push_back(tag_at(idx));
      }
      if (regroup_q > 0.0 && rng.uniform() < regroup_q) {
        std::vector<std::size_t> order(sent_tokens.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) {
                           return sent_pos[a] < sent_pos[b];
                         });
        std::vector<std::string> rt(sent_tokens.size()), rp(sent_pos.size());
        for (std::size_t i = 0; i < order.size(); ++i) {
          rt[i] = std::move(sent_tokens[order[i]]);
          rp[i] = std::move(sent_pos[order[i]]);
        }
        sent_tokens = std::move(rt);
        sent_pos = std::move(rp);
      }
      sent_tokens.front() = capitalize(sent_tokens.front());
      sent_tokens.emplace_back(".");
      sent_pos.emplace_back(".");

      if (!cur_tokens.empty() &&
          !chunk_accepts_next(cur_tokens.size(), len, spec.chunk_size)) {
        emit_chunk(cur_tokens, cur_pos);
        cur_tokens.clear();
        cur_pos.clear();
        if (emitted == stream.quota) break;  // pending sentence dropped
      }
      cur_tokens.insert(cur_tokens.end(), sent_tokens.begin(), sent_tokens.end());
      cur_pos.insert(cur_pos.end(), sent_pos.begin(), sent_pos.end());
    }

    data.documents.push_back(std::move(doc));
  }

  // ---- derived resources ---------------------------------------------------

  data.resources.function_words = fw;
  // Cohesive markers: the seeded over-used singles, in vocabulary order,
  // plus ten two-word phrases of frequent words.  Multi-word entries
  // exercise the longest-match scan.
  for (std::size_t i = 0; i < V; ++i)
    if (marker_single[i]) data.resources.cohesive_markers.push_back(fw[i]);
  const std::size_t n_singles = data.resources.cohesive_markers.size();
  for (std::size_t j = 1;
       j + 1 < V && data.resources.cohesive_markers.size() < n_singles + 10;
       j += 2)
    data.resources.cohesive_markers.push_back(fw[j] + ' ' + fw[j + 1]);

  return data;
}

nlohmann::json synthetic_spec_to_json(const SyntheticSpec& spec) {
  nlohmann::json j;
  j["n_chunks_per_class"] = spec.n_chunks_per_class;
  j["chunk_size"] = spec.chunk_size;
  j["fw_vocab_size"] = spec.fw_vocab_size;
  j["shifted_fw_count"] = spec.shifted_fw_count;
  j["shift_ratio"] = spec.shift_ratio;
  auto doms = nlohmann::json::array();
  for (const auto& d : spec.domains)
    doms.push_back({{"name", d.name},
                    {"topic_vocab_size", d.topic_vocab_size},
                    {"topic_mass", d.topic_mass}});
  j["domains"] = std::move(doms);
  j["seed"] = spec.seed;
  return j;
}

SyntheticSpec synthetic_spec_from_json(const nlohmann::json& j) {
  SyntheticSpec spec;
  if (j.contains("n_chunks_per_class"))
    spec.n_chunks_per_class = j["n_chunks_per_class"].get<std::size_t>();
  if (j.contains("chunk_size")) spec.chunk_size = j["chunk_size"].get<std::size_t>();
  if (j.contains("fw_vocab_size"))
    spec.fw_vocab_size = j["fw_vocab_size"].get<std::size_t>();
  if (j.contains("shifted_fw_count"))
    spec.shifted_fw_count = j["shifted_fw_count"].get<std::size_t>();
  if (j.contains("shift_ratio")) spec.shift_ratio = j["shift_ratio"].get<double>();
  if (j.contains("domains")) {
    for (const auto& dj : j["domains"]) {
      DomainSpec d;
      d.name = dj.at("name").get<std::string>();
      if (dj.contains("topic_vocab_size"))
        d.topic_vocab_size = dj["topic_vocab_size"].get<std::size_t>();
      if (dj.contains("topic_mass")) d.topic_mass = dj["topic_mass"].get<double>();
      spec.domains.push_back(std::move(d));
    }
  }
  if (j.contains("seed")) spec.seed = j["seed"].get<std::uint64_t>();
  return spec;
}

}  // namespace otkit
