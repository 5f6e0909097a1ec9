#include "otkit/features.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <unordered_set>

#include "otkit/error.hpp"
#include "otkit/parallel.hpp"

namespace otkit {

namespace {

std::string lowercase_ascii(std::string s) {
  for (char& c : s)
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

const std::vector<std::string>& require_pos(const Chunk& chunk, Scheme scheme) {
  require(chunk.pos.has_value(), Errc::missing_annotation,
          std::string(scheme_name(scheme)) + " features need pos tags, chunk '" +
              chunk.id + "' has none");
  return *chunk.pos;
}

// Cohesive markers, tokenized and ordered longest-first for greedy matching.
struct MarkerPattern {
  std::vector<std::string> words;
  const std::string* canonical;
};

std::vector<MarkerPattern> compile_markers(const std::vector<std::string>& markers) {
  std::vector<MarkerPattern> out;
  out.reserve(markers.size());
  for (const auto& m : markers) {
    MarkerPattern p;
    p.canonical = &m;
    std::size_t b = 0;
    while (b < m.size()) {
      auto e = m.find(' ', b);
      if (e == std::string::npos) e = m.size();
      if (e > b) p.words.push_back(m.substr(b, e - b));
      b = e + 1;
    }
    if (!p.words.empty()) out.push_back(std::move(p));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const MarkerPattern& a, const MarkerPattern& b) {
                     return a.words.size() > b.words.size();
                   });
  return out;
}

}  // namespace

Scheme parse_scheme(std::string_view name) {
  std::string n(name);
  for (char& c : n) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (n == "FW") return Scheme::FW;
  if (n == "CHAR3") return Scheme::CHAR3;
  if (n == "POS3") return Scheme::POS3;
  if (n == "CFW") return Scheme::CFW;
  if (n == "COH") return Scheme::COH;
  fail(Errc::config, "unknown feature scheme '" + std::string(name) + "'");
}

const char* scheme_name(Scheme s) noexcept {
  switch (s) {
    case Scheme::FW: return "FW";
    case Scheme::CHAR3: return "CHAR3";
    case Scheme::POS3: return "POS3";
    case Scheme::CFW: return "CFW";
    case Scheme::COH: return "COH";
  }
  return "?";
}

std::vector<Scheme> all_schemes() {
  return {Scheme::FW, Scheme::CHAR3, Scheme::POS3, Scheme::CFW, Scheme::COH};
}

Weighting parse_weighting(std::string_view name) {
  std::string n(name);
  for (char& c : n) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (n == "tf") return Weighting::TF;
  if (n == "tfidf" || n == "tf-idf") return Weighting::TFIDF;
  fail(Errc::config, "unknown weighting '" + std::string(name) + "'");
}

const char* weighting_name(Weighting w) noexcept {
  return w == Weighting::TF ? "tf" : "tfidf";
}

TermCounts extract(const Chunk& chunk, Scheme scheme, const Resources& res) {
  TermCounts counts;
  switch (scheme) {
    case Scheme::FW: {
      std::unordered_set<std::string> fw(res.function_words.begin(),
                                         res.function_words.end());
      for (const auto& tok : chunk.tokens) {
        std::string low = lowercase_ascii(tok);
        if (fw.count(low)) ++counts[low];
      }
      break;
    }

    case Scheme::CHAR3: {
      // Trigrams over the space-joined token stream, case preserved:
      // inter-word transitions carry signal, so the join is part of the
      // definition, not an implementation detail.
      std::string joined;
      std::size_t total = 0;
      for (const auto& t : chunk.tokens) total += t.size() + 1;
      joined.reserve(total);
      for (std::size_t i = 0; i < chunk.tokens.size(); ++i) {
        if (i) joined.push_back(' ');
        joined += chunk.tokens[i];
      }
      if (joined.size() >= 3)
        for (std::size_t i = 0; i + 3 <= joined.size(); ++i)
          ++counts[joined.substr(i, 3)];
      break;
    }

    case Scheme::POS3: {
      const auto& pos = require_pos(chunk, scheme);
      for (std::size_t i = 0; i + 3 <= pos.size(); ++i)
        ++counts[pos[i] + ' ' + pos[i + 1] + ' ' + pos[i + 2]];
      break;
    }

    case Scheme::CFW: {
      // Token trigrams anchored on function words: keep the trigram when at
      // least two of its tokens are function words; the remaining token, if
      // any, is backed off to its POS tag.
      const auto& pos = require_pos(chunk, scheme);
      std::unordered_set<std::string> fw(res.function_words.begin(),
                                         res.function_words.end());
      std::vector<std::string> low(chunk.tokens.size());
      std::vector<bool> is_fw(chunk.tokens.size());
      for (std::size_t i = 0; i < chunk.tokens.size(); ++i) {
        low[i] = lowercase_ascii(chunk.tokens[i]);
        is_fw[i] = fw.count(low[i]) != 0;
      }
      for (std::size_t i = 0; i + 3 <= chunk.tokens.size(); ++i) {
        const int n_fw = int(is_fw[i]) + int(is_fw[i + 1]) + int(is_fw[i + 2]);
        if (n_fw < 2) continue;
        std::string term;
        for (std::size_t k = 0; k < 3; ++k) {
          if (k) term.push_back(' ');
          term += is_fw[i + k] ? low[i + k] : pos[i + k];
        }
        ++counts[std::move(term)];
      }
      break;
    }

    case Scheme::COH: {
      // Greedy longest-match scan, case-insensitive, non-overlapping.
      const auto patterns = compile_markers(res.cohesive_markers);
      std::vector<std::string> low(chunk.tokens.size());
      for (std::size_t i = 0; i < chunk.tokens.size(); ++i)
        low[i] = lowercase_ascii(chunk.tokens[i]);
      std::size_t i = 0;
      while (i < low.size()) {
        bool matched = false;
        for (const auto& p : patterns) {
          if (p.words.size() > low.size() - i) continue;
          bool ok = true;
          for (std::size_t k = 0; k < p.words.size(); ++k)
            if (low[i + k] != p.words[k]) { ok = false; break; }
          if (ok) {
            ++counts[*p.canonical];
            i += p.words.size();
            matched = true;
            break;
          }
        }
        if (!matched) ++i;
      }
      break;
    }
  }
  return counts;
}

TermCounts corpus_counts(const ChunkSet& set, Scheme scheme, const Resources& res) {
  // Per-chunk extraction in parallel slots, merged sequentially in chunk
  // order so the aggregate is schedule-independent.
  std::vector<TermCounts> per_chunk(set.chunks.size());
  parallel_for(set.chunks.size(), [&](std::size_t i) {
    per_chunk[i] = extract(set.chunks[i], scheme, res);
  });
  TermCounts total;
  for (const auto& counts : per_chunk)
    for (const auto& [term, n] : counts) total[term] += n;
  return total;
}

Vocabulary build_vocabulary(const TermCounts& counts, Scheme scheme,
                            std::size_t cap, const Resources& res) {
  Vocabulary v;
  v.scheme = scheme;
  if (scheme == Scheme::FW) {
    v.terms = res.function_words;
    require(!v.terms.empty(), Errc::empty_vocabulary, "function-word list is empty");
    return v;
  }
  if (scheme == Scheme::COH) {
    v.terms = res.cohesive_markers;
    require(!v.terms.empty(), Errc::empty_vocabulary, "cohesive-marker list is empty");
    return v;
  }
  require(cap >= 1, Errc::config, "vocabulary cap must be >= 1");
  require(!counts.empty(), Errc::empty_vocabulary,
          std::string("no ") + scheme_name(scheme) + " terms found in the corpus");

  std::vector<std::pair<std::string, std::int64_t>> ranked(counts.begin(),
                                                           counts.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  const std::size_t keep = std::min(cap, ranked.size());
  v.terms.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) v.terms.push_back(ranked[i].first);
  return v;
}

FeatureMatrix vectorize(const ChunkSet& set, const Vocabulary& vocab,
                        const Resources& res) {
  require(!vocab.terms.empty(), Errc::empty_vocabulary, "vocabulary has no terms");
  std::unordered_map<std::string, Eigen::Index> column;
  column.reserve(vocab.terms.size());
  for (std::size_t t = 0; t < vocab.terms.size(); ++t)
    column.emplace(vocab.terms[t], static_cast<Eigen::Index>(t));

  FeatureMatrix m;
  m.vocabulary = vocab;
  m.weighting = Weighting::TF;
  m.chunk_ids.reserve(set.chunks.size());
  for (const auto& c : set.chunks) m.chunk_ids.push_back(c.id);
  m.values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(set.chunks.size()),
                                   static_cast<Eigen::Index>(vocab.terms.size()));

  parallel_for(set.chunks.size(), [&](std::size_t i) {
    const Chunk& c = set.chunks[i];
    require(!c.tokens.empty(), Errc::missing_annotation,
            "chunk '" + c.id + "' carries no tokens; re-export with tokens");
    const TermCounts counts = extract(c, vocab.scheme, res);
    const double denom = static_cast<double>(c.token_count);
    for (const auto& [term, n] : counts) {
      auto it = column.find(term);
      if (it != column.end())
        m.values(static_cast<Eigen::Index>(i), it->second) =
            static_cast<double>(n) / denom;
    }
  });
  return m;
}

Eigen::VectorXd idf_factors(const FeatureMatrix& m) {
  const Eigen::Index n = m.values.rows();
  Eigen::VectorXd f(m.values.cols());
  for (Eigen::Index t = 0; t < m.values.cols(); ++t) {
    Eigen::Index df = 0;
    for (Eigen::Index i = 0; i < n; ++i)
      if (m.values(i, t) != 0.0) ++df;
    f(t) = df == 0 ? 0.0
                   : std::log(1.0 + static_cast<double>(n) /
                                        static_cast<double>(df));
  }
  return f;
}

FeatureMatrix apply_idf(const FeatureMatrix& m, const Eigen::VectorXd& factors) {
  require(m.weighting == Weighting::TF, Errc::config,
          "idf weighting applied to an already-weighted matrix");
  require(factors.size() == m.values.cols(), Errc::dim_mismatch,
          "idf factor count does not match the matrix columns");
  FeatureMatrix out = m;
  out.weighting = Weighting::TFIDF;
  out.values = m.values.array().rowwise() * factors.transpose().array();
  return out;
}

FeatureMatrix apply_tfidf(const FeatureMatrix& m) {
  require(m.values.rows() >= 1, Errc::insufficient_data,
          "tf-idf needs at least one row");
  return apply_idf(m, idf_factors(m));
}

namespace {

void csv_field(std::ofstream& out, const std::string& s) {
  const bool needs_quote =
      s.find_first_of(",\"\n\r") != std::string::npos;
  if (!needs_quote) {
    out << s;
    return;
  }
  out << '"';
  for (char c : s) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

void csv_double(std::ofstream& out, double v) {
  // Shortest round-trip representation; locale-independent.
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  out.write(buf, p - buf);
}

}  // namespace

void write_matrix_csv(const std::filesystem::path& path, const FeatureMatrix& m) {
  std::ofstream out(path);
  require(out.good(), Errc::io, "cannot write matrix '" + path.string() + "'");
  out << "chunk_id";
  for (const auto& term : m.vocabulary.terms) {
    out << ',';
    csv_field(out, term);
  }
  out << '\n';
  for (Eigen::Index i = 0; i < m.values.rows(); ++i) {
    csv_field(out, m.chunk_ids[static_cast<std::size_t>(i)]);
    for (Eigen::Index t = 0; t < m.values.cols(); ++t) {
      out << ',';
      csv_double(out, m.values(i, t));
    }
    out << '\n';
  }
  out.flush();
  require(out.good(), Errc::io, "failed writing '" + path.string() + "'");
}

}  // namespace otkit
