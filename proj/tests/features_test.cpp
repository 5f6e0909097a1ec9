#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "otkit/error.hpp"
#include "otkit/features.hpp"

using namespace otkit;
using test::chunk_of;
using test::tiny_resources;

TEST_SUITE("features") {

TEST_CASE("scheme and weighting names round-trip") {
  for (Scheme s : all_schemes()) CHECK(parse_scheme(scheme_name(s)) == s);
  CHECK(parse_scheme("fw") == Scheme::FW);
  CHECK(parse_scheme("char3") == Scheme::CHAR3);
  CHECK_THROWS_AS(parse_scheme("bigram"), Error);
  CHECK(parse_weighting("tf") == Weighting::TF);
  CHECK(parse_weighting("tfidf") == Weighting::TFIDF);
  CHECK_THROWS_AS(parse_weighting("idf"), Error);
}

TEST_CASE("function-word counts are case-insensitive bag counts") {
  const auto res = tiny_resources({"the", "of"});
  const auto counts =
      extract(chunk_of("c", {"The", "cat", "saw", "the", "dog"}), Scheme::FW, res);
  REQUIRE(counts.size() == 1);
  CHECK(counts.at("the") == 2);

  // Bag semantics: permuting the tokens changes nothing.
  const auto permuted =
      extract(chunk_of("c", {"dog", "the", "saw", "cat", "The"}), Scheme::FW, res);
  CHECK(permuted == counts);
}

TEST_CASE("character trigrams slide over the space-joined stream") {
  const auto res = tiny_resources({});
  const auto counts = extract(chunk_of("c", {"ab", "cd"}), Scheme::CHAR3, res);
  REQUIRE(counts.size() == 3);
  CHECK(counts.at("ab ") == 1);
  CHECK(counts.at("b c") == 1);
  CHECK(counts.at(" cd") == 1);

  // Case preserved; order matters for trigrams.
  const auto upper = extract(chunk_of("c", {"Ab", "cd"}), Scheme::CHAR3, res);
  CHECK(upper.count("Ab "));
  const auto swapped = extract(chunk_of("c", {"cd", "ab"}), Scheme::CHAR3, res);
  CHECK(swapped != counts);
}

TEST_CASE("pos trigrams require annotations") {
  const auto res = tiny_resources({});
  const auto counts = extract(
      chunk_of("c", {"a", "b", "c", "d"}, std::nullopt,
               std::vector<std::string>{"DT", "NN", "IN", "NN"}),
      Scheme::POS3, res);
  CHECK(counts.at("DT NN IN") == 1);
  CHECK(counts.at("NN IN NN") == 1);
  CHECK(counts.size() == 2);

  CHECK_THROWS_AS(extract(chunk_of("c", {"a", "b", "c"}), Scheme::POS3, res), Error);
}

TEST_CASE("contextual function words keep at most one pos backoff") {
  const auto res = tiny_resources({"the", "of", "it"});
  const auto counts = extract(
      chunk_of("c", {"the", "cat", "of", "it"}, std::nullopt,
               std::vector<std::string>{"DT", "NN", "IN", "PRP"}),
      Scheme::CFW, res);
  REQUIRE(counts.size() == 2);
  CHECK(counts.at("the NN of") == 1);
  CHECK(counts.at("NN of it") == 1);

  // A triple with fewer than two function words is not emitted.
  const auto sparse = extract(
      chunk_of("c", {"cat", "saw", "the"}, std::nullopt,
               std::vector<std::string>{"NN", "VB", "DT"}),
      Scheme::CFW, res);
  CHECK(sparse.empty());

  CHECK_THROWS_AS(extract(chunk_of("c", {"the", "of", "it"}), Scheme::CFW, res),
                  Error);
}

TEST_CASE("cohesive markers match longest-first without overlap") {
  const auto res = tiny_resources({}, {"moreover", "in addition", "addition"});
  const auto counts = extract(
      chunk_of("c", {"Moreover", ",", "in", "addition", ","}), Scheme::COH, res);
  CHECK(counts.at("moreover") == 1);
  CHECK(counts.at("in addition") == 1);
  // "addition" was consumed by the longer marker.
  CHECK(counts.count("addition") == 0);
}

TEST_CASE("vocabulary ranks by count with lexicographic ties") {
  const auto res = tiny_resources({"the", "of"});
  TermCounts agg{{"aa", 5}, {"bb", 5}, {"cc", 1}};

  const auto capped = build_vocabulary(agg, Scheme::CHAR3, 2, res);
  CHECK(capped.terms == std::vector<std::string>{"aa", "bb"});

  const auto loose = build_vocabulary(agg, Scheme::CHAR3, 1000, res);
  CHECK(loose.terms == std::vector<std::string>{"aa", "bb", "cc"});

  // List-based schemes ignore both the counts and the cap.
  const auto fw = build_vocabulary(agg, Scheme::FW, 1, res);
  CHECK(fw.terms == std::vector<std::string>{"the", "of"});

  CHECK_THROWS_AS(build_vocabulary({}, Scheme::CHAR3, 10, res), Error);
}

TEST_CASE("tf rows divide counts by chunk length") {
  const auto res = tiny_resources({"the", "of"});
  ChunkSet set;
  auto tokens = test::repeat("x", 1990);
  for (int i = 0; i < 10; ++i) tokens.push_back("the");
  set.chunks.push_back(chunk_of("a", tokens));
  set.chunks.push_back(chunk_of("b", test::repeat("y", 5)));

  Vocabulary vocab;
  vocab.scheme = Scheme::FW;
  vocab.terms = {"the", "of"};

  const auto m = vectorize(set, vocab, res);
  REQUIRE(m.values.rows() == 2);
  REQUIRE(m.values.cols() == 2);
  CHECK(m.values(0, 0) == doctest::Approx(0.005).epsilon(1e-12));
  CHECK(m.values(0, 1) == 0.0);
  // No vocabulary terms at all: an all-zero row.
  CHECK(m.values.row(1).isZero(0.0));
  CHECK(m.weighting == Weighting::TF);

  // Proportional counts and lengths give identical rows.
  ChunkSet prop;
  auto big = test::repeat("z", 1990);
  for (int i = 0; i < 10; ++i) big.push_back("the");
  auto small = test::repeat("z", 995);
  for (int i = 0; i < 5; ++i) small.push_back("the");
  prop.chunks.push_back(chunk_of("big", big));
  prop.chunks.push_back(chunk_of("small", small));
  const auto pm = vectorize(prop, vocab, res);
  CHECK((pm.values.row(0) - pm.values.row(1)).cwiseAbs().maxCoeff() < 1e-15);

  // Function words cannot exceed the chunk length: tf row sums stay <= 1.
  CHECK(m.values.rowwise().sum().maxCoeff() <= 1.0 + 1e-12);
}

TEST_CASE("idf factors follow ln(1 + N/df)") {
  Eigen::MatrixXd values(10, 3);
  values.setZero();
  values.col(0).setConstant(0.1);  // df = 10
  values(0, 1) = 0.2;              // df = 1
  // col 2: df = 0
  auto m = test::matrix_of(values);

  const auto f = idf_factors(m);
  CHECK(f(0) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(f(1) == doctest::Approx(std::log(11.0)).epsilon(1e-12));
  CHECK(f(2) == 0.0);

  const auto weighted = apply_tfidf(m);
  CHECK(weighted.weighting == Weighting::TFIDF);
  CHECK(weighted.values(0, 0) ==
        doctest::Approx(0.1 * std::log(2.0)).epsilon(1e-12));
  CHECK(weighted.values(0, 1) ==
        doctest::Approx(0.2 * std::log(11.0)).epsilon(1e-12));
  CHECK(weighted.values.col(2).isZero(0.0));
  // Zeros are preserved and nothing goes negative.
  CHECK((weighted.values.array() >= 0.0).all());
  CHECK(weighted.values(1, 1) == 0.0);

  // A single row makes every populated column's factor ln 2.
  auto single = test::matrix_of(Eigen::MatrixXd::Constant(1, 2, 0.3));
  const auto sf = idf_factors(single);
  CHECK(sf(0) == doctest::Approx(std::log(2.0)));
  CHECK(sf(1) == doctest::Approx(std::log(2.0)));
}

TEST_CASE("term in all of 100 rows is scaled by ln 2") {
  Eigen::MatrixXd values = Eigen::MatrixXd::Constant(100, 1, 0.01);
  const auto f = idf_factors(test::matrix_of(values));
  CHECK(f(0) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

}  // TEST_SUITE
