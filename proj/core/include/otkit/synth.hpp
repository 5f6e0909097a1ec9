#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "otkit/corpus.hpp"
#include "otkit/resources.hpp"

// Deterministic synthetic corpora.
//
// Desk-scale stand-ins for the real bilingual corpora: token streams drawn
// from unigram distributions over an invented function-word vocabulary with
// a Zipf profile.  The two classes share the base distribution except for a
// configurable set of "shifted" words whose O-frequency is shift_ratio
// times their T-frequency (half the shifted words lean the other way, so
// the unshifted mass stays balanced and the planted words are exactly the
// recoverable markers).  Domains add two effects: a disjoint topic
// vocabulary receiving topic_mass of the probability, and a deterministic
// per-domain tilt of the function-word frequencies of the same relative
// magnitude — the latter is what lets domain membership dominate weak class
// signal, as real registers do.
//
// Word strings, their POS tags and the derived resource lists depend only
// on vocabulary indices, never on the seed, so corpora generated with
// different seeds stay comparable (same vocabulary, different shifted-word
// choices and different samples).  The seed chooses which ranks are shifted
// and drives sampling; the replica index varies the sample alone, which is
// how an out-of-sample reference corpus for marker selection is made.

namespace otkit {

struct DomainSpec {
  std::string name;
  std::size_t topic_vocab_size = 0;
  double topic_mass = 0.0;  // in [0,1): probability mass of topic words
};

struct SyntheticSpec {
  std::size_t n_chunks_per_class = 200;  // total per class, across domains
  std::size_t chunk_size = 2000;
  std::size_t fw_vocab_size = 300;
  std::size_t shifted_fw_count = 30;
  double shift_ratio = 1.3;  // >= 1
  std::vector<DomainSpec> domains;  // empty = one unnamed domain, no topics
  std::uint64_t seed = 0;
};

struct SyntheticData {
  ChunkSet chunks;                  // gold-labeled, domain-tagged, with pos
  std::vector<Document> documents;  // one per class x domain, pre-tokenized
  Resources resources;              // matching function-word / marker lists
  std::vector<std::string> shifted_up;    // words over-represented in O
  std::vector<std::string> shifted_down;  // words over-represented in T
};

// Generate a corpus.  Distinct replicas share every design choice (word
// identities, shifted set, tilts) and differ only in the sampled tokens.
SyntheticData gen_synthetic(const SyntheticSpec& spec, std::uint64_t replica = 0);

nlohmann::json synthetic_spec_to_json(const SyntheticSpec& spec);
SyntheticSpec synthetic_spec_from_json(const nlohmann::json& j);

}  // namespace otkit
