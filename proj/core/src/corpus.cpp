#include "otkit/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <numeric>

#include "otkit/parallel.hpp"
#include "otkit/rng.hpp"

namespace otkit {

namespace {

// Character classes over raw bytes.  Anything >= 0x80 is part of a UTF-8
// sequence and is treated as a letter; the std:: ctype functions must not
// see negative chars.
inline bool byte_space(char c) noexcept {
  return std::isspace(static_cast<unsigned char>(c)) != 0;
}
inline bool byte_punct(char c) noexcept {
  const auto u = static_cast<unsigned char>(c);
  return u < 0x80 && std::ispunct(u) != 0;
}
inline bool byte_lower(char c) noexcept {
  const auto u = static_cast<unsigned char>(c);
  return u < 0x80 && std::islower(u) != 0;
}
inline bool byte_digit(char c) noexcept {
  const auto u = static_cast<unsigned char>(c);
  return u < 0x80 && std::isdigit(u) != 0;
}
inline bool byte_upper(char c) noexcept {
  const auto u = static_cast<unsigned char>(c);
  return u < 0x80 && std::isupper(u) != 0;
}

// Split one whitespace-delimited word into tokens.  next_char is the first
// non-space character after the word ('\0' at end of input); it decides
// whether a word-final period is an abbreviation period.
void emit_word(std::string_view word, char next_char,
               std::vector<std::string>& out) {
  std::size_t b = 0;
  std::size_t e = word.size();

  // Leading punctuation: one token per character, in input order.
  while (b < e && byte_punct(word[b])) {
    out.emplace_back(1, word[b]);
    ++b;
  }

  // Trailing punctuation, collected right to left.
  std::string trail;
  while (e > b && byte_punct(word[e - 1])) {
    const char c = word[e - 1];
    if (c == '.' && trail.empty() && e - 1 > b && !byte_punct(word[e - 2]) &&
        (byte_lower(next_char) || byte_digit(next_char))) {
      // Word-final period directly attached to a letter, followed in the
      // text by a lowercase letter or digit: abbreviation, keep it.
      break;
    }
    trail.push_back(c);
    --e;
  }

  if (e > b) out.emplace_back(word.substr(b, e - b));
  for (auto it = trail.rbegin(); it != trail.rend(); ++it)
    out.emplace_back(1, *it);
}

}  // namespace

Label parse_label(std::string_view s) {
  if (s == "O") return Label::O;
  if (s == "T") return Label::T;
  fail(Errc::io, "unknown label '" + std::string(s) + "' (expected O or T)");
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  out.reserve(text.size() / 5);
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    while (i < n && byte_space(text[i])) ++i;
    if (i >= n) break;
    std::size_t j = i;
    while (j < n && !byte_space(text[j])) ++j;
    std::size_t k = j;
    while (k < n && byte_space(text[k])) ++k;
    emit_word(text.substr(i, j - i), k < n ? text[k] : '\0', out);
    i = j;
  }
  return out;
}

std::vector<SentenceSpan> split_sentences(const std::vector<std::string>& tokens) {
  std::vector<SentenceSpan> spans;
  const std::size_t n = tokens.size();
  std::size_t begin = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string& tok = tokens[i];
    const char last = tok.back();
    if (last != '.' && last != '!' && last != '?') continue;
    const bool boundary =
        i + 1 == n ||
        byte_upper(tokens[i + 1].front()) || byte_digit(tokens[i + 1].front());
    if (boundary) {
      spans.push_back({begin, i + 1});
      begin = i + 1;
    }
  }
  if (begin < n) spans.push_back({begin, n});
  return spans;
}

namespace {

struct SentenceRef {
  std::size_t doc = 0;    // index into docs
  std::size_t begin = 0;  // token span within that document
  std::size_t end = 0;
  std::size_t size() const noexcept { return end - begin; }
};

}  // namespace

// |current + add - target| < |current - target|, in exact integer arithmetic.
bool chunk_accepts_next(std::size_t current_len, std::size_t next_len,
                        std::size_t target) noexcept {
  const auto t = static_cast<std::int64_t>(target);
  const auto with = std::llabs(static_cast<std::int64_t>(current_len + next_len) - t);
  const auto without = std::llabs(static_cast<std::int64_t>(current_len) - t);
  return with < without;
}

ChunkSet make_chunks(const std::vector<Document>& docs, std::size_t target_size) {
  require(target_size >= 1, Errc::config, "chunk target size must be >= 1");

  bool any_pos = false;
  bool all_pos = true;
  for (const auto& d : docs) {
    const bool has_text = d.text.has_value();
    const bool has_tokens = d.tokens.has_value();
    require(has_text != has_tokens, Errc::config,
            "document '" + d.id + "' must carry exactly one of text/tokens");
    if (d.pos) {
      require(has_tokens, Errc::config,
              "document '" + d.id + "' has pos tags but no token list");
      require(d.pos->size() == d.tokens->size(), Errc::config,
              "document '" + d.id + "' pos/token length mismatch");
      any_pos = true;
    } else {
      all_pos = false;
    }
  }
  require(!any_pos || all_pos, Errc::config,
          "pos tags must be present on all documents or on none");

  // Tokenize raw documents up front (slot-per-document keeps this
  // deterministic under any worker count).
  std::vector<std::vector<std::string>> owned(docs.size());
  std::vector<const std::vector<std::string>*> toks(docs.size());
  parallel_for(docs.size(), [&](std::size_t i) {
    if (docs[i].tokens) {
      toks[i] = &*docs[i].tokens;
    } else {
      owned[i] = tokenize(*docs[i].text);
      toks[i] = &owned[i];
    }
  });

  // One flat sentence stream over all documents, in corpus order.
  std::vector<SentenceRef> sentences;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    for (const auto& s : split_sentences(*toks[d]))
      sentences.push_back({d, s.begin, s.end});
  }

  ChunkSet out;
  out.target_size = target_size;

  std::vector<SentenceRef> current;
  std::size_t current_tokens = 0;

  auto flush = [&]() {
    if (current.empty()) return;
    Chunk c;
    char idbuf[32];
    std::snprintf(idbuf, sizeof idbuf, "chunk-%06zu", out.chunks.size());
    c.id = idbuf;
    c.tokens.reserve(current_tokens);
    const bool with_pos = any_pos;
    if (with_pos) c.pos.emplace();
    bool label_consistent = true;
    bool domain_consistent = true;
    std::optional<Label> label;
    std::optional<std::string> domain;
    bool first_doc = true;
    for (const auto& s : current) {
      const Document& doc = docs[s.doc];
      if (c.source_doc_ids.empty() || c.source_doc_ids.back() != doc.id)
        c.source_doc_ids.push_back(doc.id);
      const auto& dt = *toks[s.doc];
      c.tokens.insert(c.tokens.end(), dt.begin() + s.begin, dt.begin() + s.end);
      if (with_pos)
        c.pos->insert(c.pos->end(), doc.pos->begin() + s.begin,
                      doc.pos->begin() + s.end);
      if (first_doc) {
        label = doc.label;
        domain = doc.domain;
        first_doc = false;
      } else {
        if (label != doc.label) label_consistent = false;
        if (domain != doc.domain) domain_consistent = false;
      }
    }
    if (label_consistent) c.label = label;
    if (domain_consistent) c.domain = domain;
    c.token_count = c.tokens.size();
    out.chunks.push_back(std::move(c));
    current.clear();
    current_tokens = 0;
  };

  for (const auto& s : sentences) {
    if (current_tokens == 0) {
      current.push_back(s);
      current_tokens = s.size();
      continue;
    }
    if (chunk_accepts_next(current_tokens, s.size(), target_size)) {
      current.push_back(s);
      current_tokens += s.size();
    } else {
      flush();
      current.push_back(s);
      current_tokens = s.size();
    }
  }
  // Keep the remainder only when it amounts to at least half a chunk.
  if (current_tokens * 2 >= target_size) flush();

  return out;
}

ChunkSet balance(const ChunkSet& in, std::pair<std::uint64_t, std::uint64_t> ratio,
                 std::uint64_t seed) {
  require(ratio.first >= 1 && ratio.second >= 1, Errc::config,
          "balance ratio parts must be >= 1");
  const std::uint64_t g = std::gcd(ratio.first, ratio.second);
  const std::uint64_t p = ratio.first / g;
  const std::uint64_t q = ratio.second / g;

  std::vector<std::size_t> o_idx, t_idx;
  for (std::size_t i = 0; i < in.chunks.size(); ++i) {
    const auto& c = in.chunks[i];
    require(c.label.has_value(), Errc::balance,
            "chunk '" + c.id + "' has no gold label; cannot balance");
    (*c.label == Label::O ? o_idx : t_idx).push_back(i);
  }

  // Largest m with m*p O-chunks and m*q T-chunks available.
  const std::uint64_t m = std::min(o_idx.size() / p, t_idx.size() / q);
  require(m >= 1, Errc::balance,
          "corpus cannot satisfy the requested class ratio");

  auto draw = [&](const std::vector<std::size_t>& pool, std::uint64_t want,
                  std::uint64_t slot) {
    Rng rng(derive_seed(seed, SeedTag::balance, slot));
    auto picks = rng.sample_indices(pool.size(), static_cast<std::size_t>(want));
    std::vector<std::size_t> sel;
    sel.reserve(picks.size());
    for (auto k : picks) sel.push_back(pool[k]);
    return sel;
  };

  std::vector<std::size_t> keep = draw(o_idx, m * p, 0);
  {
    auto t_keep = draw(t_idx, m * q, 1);
    keep.insert(keep.end(), t_keep.begin(), t_keep.end());
  }
  std::sort(keep.begin(), keep.end());  // restore corpus order

  ChunkSet out;
  out.target_size = in.target_size;
  out.provenance.seed = seed;
  out.provenance.config_hash = in.provenance.config_hash;
  out.chunks.reserve(keep.size());
  for (auto i : keep) out.chunks.push_back(in.chunks[i]);
  return out;
}

}  // namespace otkit
