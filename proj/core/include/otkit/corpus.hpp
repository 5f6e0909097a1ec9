#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "otkit/error.hpp"

// Corpus ingestion: documents in, fixed-size evaluation chunks out.
//
// Classification operates on chunks of roughly uniform token count rather
// than on whole documents, so that accuracy numbers are comparable across
// corpora with wildly different document lengths.  Everything downstream
// (features, clustering, labeling) consumes ChunkSet.

namespace otkit {

// Gold class of a text: written originally in the corpus language (O) or
// translated into it (T).
enum class Label : std::uint8_t { O, T };

inline char label_char(Label l) noexcept { return l == Label::O ? 'O' : 'T'; }
Label parse_label(std::string_view s);

struct Document {
  std::string id;
  // Exactly one of text / tokens is present.
  std::optional<std::string> text;
  std::optional<std::vector<std::string>> tokens;
  // Per-token part-of-speech tags; only valid with pre-tokenized input and
  // must then match tokens in length.
  std::optional<std::vector<std::string>> pos;
  std::optional<Label> label;
  std::optional<std::string> domain;
};

struct Chunk {
  std::string id;
  std::vector<std::string> source_doc_ids;  // contributing docs, corpus order
  std::vector<std::string> tokens;
  std::optional<std::vector<std::string>> pos;  // aligned with tokens if set
  std::size_t token_count = 0;
  // Inherited from the source documents when they unanimously agree.
  std::optional<Label> label;
  std::optional<std::string> domain;
};

// How a ChunkSet came to be, echoed into every downstream report.
struct Provenance {
  std::uint64_t seed = 0;
  std::string config_hash;  // hash of the producing configuration, hex
};

struct ChunkSet {
  std::vector<Chunk> chunks;
  std::size_t target_size = 0;  // requested tokens per chunk
  Provenance provenance;
};

// Whitespace tokenization with punctuation splitting:
//   - leading and trailing punctuation become single-character tokens;
//   - word-internal hyphens/apostrophes (and any internal punctuation) stay;
//   - a trailing period stays attached when the next non-space character is
//     a lowercase letter or digit, the abbreviation pattern ("e.g. the");
//   - bytes >= 0x80 are treated as letters, never as punctuation, so UTF-8
//     content passes through unharmed.
std::vector<std::string> tokenize(std::string_view text);

// Half-open token span [begin, end) of one sentence.
struct SentenceSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
};

// A sentence ends at a token whose last character is '.', '!' or '?' when
// the following token starts with an uppercase ASCII letter or a digit (or
// the input ends).  Trailing tokens with no terminator form a final
// sentence of their own.
std::vector<SentenceSpan> split_sentences(const std::vector<std::string>& tokens);

// The chunk-growing rule shared by make_chunks and the corpus generator: a
// sentence of next_len tokens joins a non-empty chunk of current_len tokens
// only when that brings the count strictly closer to target.
bool chunk_accepts_next(std::size_t current_len, std::size_t next_len,
                        std::size_t target) noexcept;

// Concatenate documents (in corpus order) into chunks of about target_size
// tokens, never breaking a sentence.  A sentence is pulled into the current
// chunk when that brings the token count strictly closer to the target;
// otherwise it opens the next chunk.  A sentence longer than target_size
// becomes a chunk by itself.  The final remainder is kept only when it
// reaches at least half the target.  Chunks never span document boundaries
// in reverse: document order is preserved and token order is exactly the
// input order.
ChunkSet make_chunks(const std::vector<Document>& docs, std::size_t target_size);

// Downsample to an O:T class ratio of ratio.first : ratio.second by seeded
// uniform sampling without replacement; surviving chunks keep their corpus
// order.  Requires every chunk to carry a gold label.
ChunkSet balance(const ChunkSet& in, std::pair<std::uint64_t, std::uint64_t> ratio,
                 std::uint64_t seed);

}  // namespace otkit
