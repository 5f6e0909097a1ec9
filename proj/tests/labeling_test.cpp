#include <doctest.h>

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "otkit/cluster.hpp"
#include "otkit/error.hpp"
#include "otkit/labeling.hpp"
#include "otkit/rng.hpp"

using namespace otkit;
using test::chunk_of;
using test::repeat;

namespace {

UnigramLM lm_of(std::vector<std::string> vocab, std::vector<double> probs) {
  UnigramLM lm;
  lm.vocabulary = std::move(vocab);
  lm.probabilities.resize(static_cast<Eigen::Index>(probs.size()));
  for (std::size_t i = 0; i < probs.size(); ++i)
    lm.probabilities(static_cast<Eigen::Index>(i)) = probs[i];
  return lm;
}

UnigramLM random_lm(const std::vector<std::string>& vocab, Rng& rng) {
  std::map<std::string, std::int64_t> counts;
  for (const auto& w : vocab)
    counts[w] = static_cast<std::int64_t>(rng.below(50));
  return unigram_lm(counts, vocab, 0.001);
}

}  // namespace

TEST_SUITE("labeling") {

TEST_CASE("marker selection applies the ratio band") {
  ReferenceFrequencies freq;
  freq.o = {{"the", 0.06}, {"of", 0.05}, {"and", 0.045}, {"onlyO", 0.01}};
  freq.t = {{"the", 0.05}, {"of", 0.05}, {"and", 0.05}, {"onlyT", 0.02}};

  const auto m = select_markers(freq, 0.05);
  // 0.06/0.05 = 1.2 > 1.05.
  CHECK(std::count(m.o_markers.begin(), m.o_markers.end(), "the") == 1);
  // Ratio exactly 1: excluded from both.
  CHECK(std::count(m.o_markers.begin(), m.o_markers.end(), "of") == 0);
  CHECK(std::count(m.t_markers.begin(), m.t_markers.end(), "of") == 0);
  // 0.045/0.05 = 0.9 < 0.95.
  CHECK(std::count(m.t_markers.begin(), m.t_markers.end(), "and") == 1);
  // One-sided words are markers of the side that has them.
  CHECK(std::count(m.o_markers.begin(), m.o_markers.end(), "onlyO") == 1);
  CHECK(std::count(m.t_markers.begin(), m.t_markers.end(), "onlyT") == 1);
  CHECK(m.delta == 0.05);
}

TEST_CASE("larger delta yields a subset of markers") {
  Rng rng(4);
  ReferenceFrequencies freq;
  for (int i = 0; i < 60; ++i) {
    const std::string w = "w" + std::to_string(i);
    freq.o[w] = 0.001 + 0.01 * rng.uniform();
    freq.t[w] = 0.001 + 0.01 * rng.uniform();
  }
  const auto tight = select_markers(freq, 0.30);
  const auto loose = select_markers(freq, 0.05);
  for (const auto& w : tight.o_markers)
    CHECK(std::count(loose.o_markers.begin(), loose.o_markers.end(), w) == 1);
  for (const auto& w : tight.t_markers)
    CHECK(std::count(loose.t_markers.begin(), loose.t_markers.end(), w) == 1);
  CHECK(tight.o_markers.size() + tight.t_markers.size() <=
        loose.o_markers.size() + loose.t_markers.size());
}

TEST_CASE("empty marker vocabulary is an error") {
  ReferenceFrequencies freq;
  freq.o = {{"the", 0.05}};
  freq.t = {{"the", 0.05}};
  CHECK_THROWS_AS(select_markers(freq, 0.05), Error);
}

TEST_CASE("smoothed unigram model matches the closed form") {
  const std::vector<std::string> vocab{"a", "b", "c"};  // O_m = {a,b}, T_m = {c}
  const auto p = prototype_lm({"a", "b"}, vocab, 0.001);

  auto prob = [&](const std::string& w) {
    for (std::size_t i = 0; i < vocab.size(); ++i)
      if (vocab[i] == w) return p.probabilities(static_cast<Eigen::Index>(i));
    FAIL("term missing");
    return 0.0;
  };
  CHECK(prob("a") == doctest::Approx(1.001 / 2.003).epsilon(1e-12));
  CHECK(prob("b") == doctest::Approx(1.001 / 2.003).epsilon(1e-12));
  CHECK(prob("c") == doctest::Approx(0.001 / 2.003).epsilon(1e-12));
  CHECK(p.probabilities.sum() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK((p.probabilities.array() > 0.0).all());
}

TEST_CASE("unigram probabilities sum to one on random counts") {
  Rng rng(17);
  std::vector<std::string> vocab;
  for (int i = 0; i < 30; ++i) vocab.push_back("w" + std::to_string(i));
  for (int trial = 0; trial < 50; ++trial) {
    std::map<std::string, std::int64_t> counts;
    for (const auto& w : vocab)
      counts[w] = static_cast<std::int64_t>(rng.below(1000));
    const auto lm = unigram_lm(counts, vocab, 0.001);
    CHECK(std::abs(lm.probabilities.sum() - 1.0) < 1e-9);
    CHECK((lm.probabilities.array() > 0.0).all());
  }

  // All-zero counts collapse to the uniform distribution.
  const auto uniform = unigram_lm({}, {"x", "y", "z", "q"}, 0.001);
  for (Eigen::Index i = 0; i < 4; ++i)
    CHECK(uniform.probabilities(i) == doctest::Approx(0.25).epsilon(1e-12));

  CHECK_THROWS_AS(unigram_lm({}, {}, 0.001), Error);
}

TEST_CASE("smoothing makes probabilities count-scale dependent") {
  const std::vector<std::string> vocab{"a", "b"};
  const auto once = unigram_lm({{"a", 1}, {"b", 2}}, vocab, 0.001);
  const auto twice = unigram_lm({{"a", 2}, {"b", 4}}, vocab, 0.001);
  CHECK(std::abs(once.probabilities(0) - twice.probabilities(0)) > 1e-9);
}

TEST_CASE("jensen-shannon distance reproduces the hand values") {
  const auto p = lm_of({"x", "y"}, {0.5, 0.5});
  const auto q = lm_of({"x", "y"}, {1.0, 0.0});

  // Independent evaluation: m = (0.75, 0.25),
  // JSD = 1/2 KL(p||m) + 1/2 KL(q||m) in base 2.
  const double kl_p = 0.5 * std::log2(0.5 / 0.75) + 0.5 * std::log2(0.5 / 0.25);
  const double kl_q = 1.0 * std::log2(1.0 / 0.75);
  const double jsd = 0.5 * kl_p + 0.5 * kl_q;

  const double d = js_distance(p, q);
  CHECK(jsd == doctest::Approx(0.311278).epsilon(1e-6));
  CHECK(d == doctest::Approx(std::sqrt(jsd)).epsilon(1e-12));
  CHECK(d == doctest::Approx(0.557923).epsilon(1e-6));

  CHECK(js_distance(p, p) == 0.0);
  // Disjoint supports reach the base-2 maximum exactly.
  CHECK(js_distance(lm_of({"x", "y"}, {1.0, 0.0}),
                    lm_of({"x", "y"}, {0.0, 1.0})) == doctest::Approx(1.0));

  CHECK_THROWS_AS(js_distance(p, lm_of({"x", "z"}, {0.5, 0.5})), Error);
}

TEST_CASE("jensen-shannon distance is a metric on random models") {
  Rng rng(23);
  std::vector<std::string> vocab;
  for (int i = 0; i < 12; ++i) vocab.push_back("w" + std::to_string(i));
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = random_lm(vocab, rng);
    const auto b = random_lm(vocab, rng);
    const auto c = random_lm(vocab, rng);
    const double ab = js_distance(a, b);
    const double ba = js_distance(b, a);
    CHECK(ab == ba);  // symmetry holds exactly: the formula is symmetric
    CHECK(ab >= 0.0);
    CHECK(ab <= 1.0);
    CHECK(js_distance(a, c) <= ab + js_distance(b, c) + 1e-12);
  }
}

TEST_CASE("label assignment follows the prototype inequality") {
  const std::vector<std::string> vocab{"a", "b", "c"};
  const auto p_o = prototype_lm({"a", "b"}, vocab, 0.001);
  const auto p_t = prototype_lm({"c"}, vocab, 0.001);

  const auto direct = assign_labels(p_o, p_t, p_o, p_t, 1.0);
  CHECK(direct.cluster1 == Label::O);
  CHECK(direct.cluster2 == Label::T);

  const auto swapped = assign_labels(p_t, p_o, p_o, p_t, 1.0);
  CHECK(swapped.cluster1 == Label::T);
  CHECK(swapped.cluster2 == Label::O);

  // Four equal distances: the strict inequality fails, cluster 1 gets T.
  const auto mid = lm_of(vocab, {0.4, 0.3, 0.3});
  const auto tie = assign_labels(mid, mid, p_o, p_t, 1.0);
  CHECK(tie.d_o_c1 == tie.d_o_c2);
  CHECK(tie.d_t_c1 == tie.d_t_c2);
  CHECK(tie.cluster1 == Label::T);
  CHECK(tie.cluster2 == Label::O);

  // Labels are always complementary.
  CHECK(direct.cluster1 != direct.cluster2);
  CHECK(tie.cluster1 != tie.cluster2);

  CHECK_THROWS_AS(assign_labels(p_o, p_t, p_o, p_t, 0.0), Error);
}

TEST_CASE("cluster labeling maps chunks through their cluster") {
  MarkerSets markers;
  markers.o_markers = {"alpha", "beta"};
  markers.t_markers = {"gamma"};

  ChunkSet set;
  set.chunks.push_back(chunk_of("c0", repeat("alpha", 30), Label::O));
  set.chunks.push_back(chunk_of("c1", repeat("beta", 30), Label::O));
  set.chunks.push_back(chunk_of("c2", repeat("gamma", 30), Label::T));
  set.chunks.push_back(chunk_of("c3", repeat("gamma", 30), Label::T));

  ClusteringRun run;
  run.k = 2;
  run.assignments = {0, 0, 1, 1};

  LabelDecision decision;
  const auto labels = label_clusters(run, set, markers, 1.0, 0.001, &decision);
  REQUIRE(labels.size() == 4);
  CHECK(labels[0] == Label::O);
  CHECK(labels[1] == Label::O);
  CHECK(labels[2] == Label::T);
  CHECK(labels[3] == Label::T);
  CHECK(decision.cluster1 == Label::O);

  // Swapping cluster indices swaps the decision but not the chunk labels.
  ClusteringRun flipped = run;
  flipped.assignments = {1, 1, 0, 0};
  const auto relabeled = label_clusters(flipped, set, markers, 1.0, 0.001);
  CHECK(relabeled == labels);

  ClusteringRun three;
  three.k = 3;
  three.assignments = {0, 1, 2, 0};
  CHECK_THROWS_AS(label_clusters(three, set, markers, 1.0, 0.001), Error);
}

TEST_CASE("marker serialization round-trips") {
  MarkerSets m;
  m.o_markers = {"a", "b"};
  m.t_markers = {"c"};
  m.delta = 0.07;
  m.reference = "reference-sample-1";
  const auto back = markers_from_json(markers_to_json(m));
  CHECK(back.o_markers == m.o_markers);
  CHECK(back.t_markers == m.t_markers);
  CHECK(back.delta == m.delta);
  CHECK(back.reference == m.reference);
}

TEST_CASE("reference frequencies normalize by class token mass") {
  ChunkSet ref;
  // O portion: 100 tokens, 10 "the"; T portion: 200 tokens, 10 "the".
  auto o_tokens = repeat("x", 90);
  auto the10 = repeat("the", 10);
  o_tokens.insert(o_tokens.end(), the10.begin(), the10.end());
  ref.chunks.push_back(chunk_of("o", o_tokens, Label::O));
  auto t_tokens = repeat("x", 190);
  t_tokens.insert(t_tokens.end(), the10.begin(), the10.end());
  ref.chunks.push_back(chunk_of("t", t_tokens, Label::T));

  const auto freq = reference_frequencies(ref, {"the", "of"});
  CHECK(freq.o.at("the") == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(freq.t.at("the") == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(freq.o.at("of") == 0.0);

  ChunkSet unlabeled;
  unlabeled.chunks.push_back(chunk_of("u", repeat("the", 5)));
  CHECK_THROWS_AS(reference_frequencies(unlabeled, {"the"}), Error);
}

}  // TEST_SUITE
