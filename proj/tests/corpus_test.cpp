#include <doctest.h>

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "otkit/corpus.hpp"
#include "otkit/error.hpp"

using namespace otkit;

namespace {

// One sentence of `len` tokens: an uppercase opener, filler words, and a
// final '.'; consecutive sentences therefore split at every terminator.
std::vector<std::string> sentence(std::size_t len) {
  std::vector<std::string> out;
  out.reserve(len);
  out.emplace_back("Word");
  for (std::size_t i = 2; i < len; ++i) out.emplace_back("w");
  out.emplace_back(".");
  return out;
}

Document doc_of_sentences(std::string id, const std::vector<std::size_t>& lens,
                          std::optional<Label> label = std::nullopt,
                          std::optional<std::string> domain = std::nullopt) {
  Document d;
  d.id = std::move(id);
  d.tokens.emplace();
  for (std::size_t len : lens) {
    auto s = sentence(len);
    d.tokens->insert(d.tokens->end(), s.begin(), s.end());
  }
  d.label = label;
  d.domain = domain;
  return d;
}

}  // namespace

TEST_SUITE("corpus") {

TEST_CASE("tokenize splits on whitespace and strips edge punctuation") {
  CHECK(tokenize("").empty());
  CHECK(tokenize("hello, world!") ==
        std::vector<std::string>{"hello", ",", "world", "!"});
  // Internal apostrophes and abbreviation periods stay inside the token.
  CHECK(tokenize("it's e.g. fine") ==
        std::vector<std::string>{"it's", "e.g.", "fine"});
  CHECK(tokenize("one-two stays") ==
        std::vector<std::string>{"one-two", "stays"});
  CHECK(tokenize("  spaced\tout\nwords ") ==
        std::vector<std::string>{"spaced", "out", "words"});
  for (const auto& t : tokenize("(quoted)! 'edges', kept?"))
    CHECK(!t.empty());
}

TEST_CASE("split_sentences ends at terminators followed by capitals") {
  CHECK(split_sentences({}).empty());

  const auto two = split_sentences(tokenize("A b . C d !"));
  REQUIRE(two.size() == 2);
  CHECK(two[0].begin == 0);
  CHECK(two[0].end == 3);
  CHECK(two[1].begin == 3);
  CHECK(two[1].end == 6);

  const auto one = split_sentences(tokenize("no terminator here"));
  REQUIRE(one.size() == 1);
  CHECK(one[0].begin == 0);
  CHECK(one[0].end == 3);

  // A '.' not followed by an uppercase/digit opener does not split.
  const auto merged = split_sentences(tokenize("a . b . C"));
  CHECK(merged.size() == 2);

  // Spans partition the token list.
  const auto toks = tokenize("One two . Three four ! Five ?");
  const auto spans = split_sentences(toks);
  std::size_t covered = 0;
  for (const auto& s : spans) {
    CHECK(s.begin == covered);
    covered = s.end;
  }
  CHECK(covered == toks.size());
}

TEST_CASE("make_chunks closes at the boundary nearest the target") {
  // 4 x 900 tokens, target 2000: 1800 beats 2700, twice.
  const auto set =
      make_chunks({doc_of_sentences("d", {900, 900, 900, 900})}, 2000);
  REQUIRE(set.chunks.size() == 2);
  CHECK(set.chunks[0].token_count == 1800);
  CHECK(set.chunks[1].token_count == 1800);
  CHECK(set.target_size == 2000);
}

TEST_CASE("make_chunks never splits a sentence") {
  const auto set = make_chunks({doc_of_sentences("d", {2500})}, 2000);
  REQUIRE(set.chunks.size() == 1);
  CHECK(set.chunks[0].token_count == 2500);
}

TEST_CASE("make_chunks keeps a remainder of at least half the target") {
  const auto kept = make_chunks({doc_of_sentences("d", {600, 600})}, 2000);
  REQUIRE(kept.chunks.size() == 1);
  CHECK(kept.chunks[0].token_count == 1200);

  // 400 trailing tokens fall below 1000 and are dropped.
  const auto dropped =
      make_chunks({doc_of_sentences("d", {900, 900, 400})}, 2000);
  REQUIRE(dropped.chunks.size() == 1);
  CHECK(dropped.chunks[0].token_count == 1800);
}

TEST_CASE("make_chunks rejects a non-positive target") {
  CHECK_THROWS_AS(make_chunks({doc_of_sentences("d", {10})}, 0), Error);
}

TEST_CASE("chunk tokens reproduce the input stream in order") {
  const std::vector<Document> docs = {
      doc_of_sentences("a", {130, 70, 200}),
      doc_of_sentences("b", {90, 310, 60}),
  };
  std::vector<std::string> stream;
  for (const auto& d : docs)
    stream.insert(stream.end(), d.tokens->begin(), d.tokens->end());

  const auto set = make_chunks(docs, 150);
  std::vector<std::string> chunked;
  for (const auto& c : set.chunks)
    chunked.insert(chunked.end(), c.tokens.begin(), c.tokens.end());

  // Only a trailing remainder may be dropped, so the concatenation of all
  // chunks is a prefix of the merged input stream.
  REQUIRE(chunked.size() <= stream.size());
  CHECK(std::equal(chunked.begin(), chunked.end(), stream.begin()));

  // Unique ids, boundaries on sentence ends.
  std::set<std::string> ids;
  for (const auto& c : set.chunks) {
    ids.insert(c.id);
    CHECK(c.token_count == c.tokens.size());
  }
  CHECK(ids.size() == set.chunks.size());
}

TEST_CASE("chunks inherit label and domain only on agreement") {
  auto o_doc = doc_of_sentences("o", {600}, Label::O, "news");
  auto t_doc = doc_of_sentences("t", {600}, Label::T, "news");

  // Both sentences fit one 1200-token chunk: labels disagree, domain agrees.
  const auto mixed = make_chunks({o_doc, t_doc}, 1200);
  REQUIRE(mixed.chunks.size() == 1);
  CHECK(!mixed.chunks[0].label.has_value());
  REQUIRE(mixed.chunks[0].domain.has_value());
  CHECK(*mixed.chunks[0].domain == "news");

  // Separate chunks keep their document's label.
  const auto split = make_chunks({o_doc, t_doc}, 600);
  REQUIRE(split.chunks.size() == 2);
  CHECK(split.chunks[0].label == Label::O);
  CHECK(split.chunks[1].label == Label::T);
}

TEST_CASE("balance downsamples to the exact requested ratio") {
  ChunkSet set;
  set.target_size = 10;
  for (int i = 0; i < 10; ++i)
    set.chunks.push_back(
        test::chunk_of("o" + std::to_string(i), test::repeat("w", 10), Label::O));
  for (int i = 0; i < 6; ++i)
    set.chunks.push_back(
        test::chunk_of("t" + std::to_string(i), test::repeat("w", 10), Label::T));

  auto count = [](const ChunkSet& s, Label l) {
    return std::count_if(s.chunks.begin(), s.chunks.end(),
                         [&](const Chunk& c) { return c.label == l; });
  };

  const auto even = balance(set, {1, 1}, 42);
  CHECK(count(even, Label::O) == 6);
  CHECK(count(even, Label::T) == 6);

  // Largest exact 2:1 subset of 10 O + 6 T is 10 O + 5 T.
  const auto skewed = balance(set, {2, 1}, 42);
  CHECK(count(skewed, Label::O) == 10);
  CHECK(count(skewed, Label::T) == 5);

  auto ids = [](const ChunkSet& s) {
    std::vector<std::string> v;
    for (const auto& c : s.chunks) v.push_back(c.id);
    return v;
  };
  CHECK(ids(balance(set, {2, 1}, 42)) == ids(skewed));

  ChunkSet one_class;
  one_class.chunks.push_back(test::chunk_of("o", test::repeat("w", 3), Label::O));
  CHECK_THROWS_AS(balance(one_class, {1, 1}, 0), Error);

  ChunkSet unlabeled;
  unlabeled.chunks.push_back(test::chunk_of("u", test::repeat("w", 3)));
  CHECK_THROWS_AS(balance(unlabeled, {1, 1}, 0), Error);
}

TEST_CASE("parse_label accepts only O and T") {
  CHECK(parse_label("O") == Label::O);
  CHECK(parse_label("T") == Label::T);
  CHECK_THROWS_AS(parse_label("X"), Error);
}

}  // TEST_SUITE
