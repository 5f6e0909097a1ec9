#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "otkit/corpus.hpp"
#include "otkit/resources.hpp"

// Feature extraction: chunks to numeric rows.
//
// Five feature families, all content-light by design — they capture *how*
// text is written rather than what it is about:
//
//   FW     function-word unigrams (case-insensitive, fixed resource list)
//   CHAR3  character trigrams over the space-joined token stream
//   POS3   part-of-speech trigrams
//   CFW    contextual function words: token trigrams with at least two
//          function words, non-function tokens backed off to their POS tag
//   COH    cohesive markers (fixed phrase list, longest match first)
//
// Raw counts are normalized by chunk token count ("term frequency"); an
// optional tf-idf weighting multiplies each column by ln(1 + N/df).

namespace otkit {

enum class Scheme : std::uint8_t { FW, CHAR3, POS3, CFW, COH };

Scheme parse_scheme(std::string_view name);
const char* scheme_name(Scheme s) noexcept;
std::vector<Scheme> all_schemes();

enum class Weighting : std::uint8_t { TF, TFIDF };

Weighting parse_weighting(std::string_view name);
const char* weighting_name(Weighting w) noexcept;

using TermCounts = std::unordered_map<std::string, std::int64_t>;

// Raw term counts of one chunk under one scheme.  POS3 and CFW require pos
// tags on the chunk; FW, CFW and COH consult the resource lists.
TermCounts extract(const Chunk& chunk, Scheme scheme, const Resources& res);

struct Vocabulary {
  Scheme scheme = Scheme::FW;
  std::vector<std::string> terms;  // column order of every matrix built on it
};

// Fix the term set and column order.  For FW and COH the vocabulary is the
// resource list verbatim (cap ignored); for the n-gram schemes it is the
// `cap` most frequent terms of the aggregated corpus counts, ranked by
// count descending with lexicographic tie-break.
Vocabulary build_vocabulary(const TermCounts& corpus_counts, Scheme scheme,
                            std::size_t cap, const Resources& res);

// Aggregate extract() over all chunks (for build_vocabulary).
TermCounts corpus_counts(const ChunkSet& set, Scheme scheme, const Resources& res);

struct FeatureMatrix {
  std::vector<std::string> chunk_ids;  // row order
  Vocabulary vocabulary;               // column order
  Weighting weighting = Weighting::TF;
  Eigen::MatrixXd values;              // chunks x terms
};

// Term-frequency matrix: entry(i, t) = count(i, t) / token_count(i).
FeatureMatrix vectorize(const ChunkSet& set, const Vocabulary& vocab,
                        const Resources& res);

// Per-column idf factors ln(1 + N/df) of a tf matrix; df is the number of
// rows with a nonzero entry, and all-zero columns get factor 0.
Eigen::VectorXd idf_factors(const FeatureMatrix& m);

// Scale a tf matrix column-wise by the given factors (e.g. factors fitted on
// a training split, applied to a held-out split).
FeatureMatrix apply_idf(const FeatureMatrix& m, const Eigen::VectorXd& factors);

// apply_idf with factors fitted on m itself.
FeatureMatrix apply_tfidf(const FeatureMatrix& m);

// RFC-4180-style CSV with a chunk_id column followed by one column per term.
void write_matrix_csv(const std::filesystem::path& path, const FeatureMatrix& m);

}  // namespace otkit
