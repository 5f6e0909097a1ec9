#include <doctest.h>

#include <map>
#include <string>
#include <vector>

#include "otkit/error.hpp"
#include "otkit/labeling.hpp"
#include "otkit/mixed.hpp"
#include "otkit/pipeline.hpp"
#include "otkit/synth.hpp"

using namespace otkit;

namespace {

// One strongly separable domain: markers selected from a disjoint replica.
struct Fixture {
  SyntheticData data;
  SyntheticData reference;
  MarkerSets markers;
  RunConfig cfg;
};

Fixture single_domain_fixture(std::uint64_t seed) {
  SyntheticSpec spec;
  spec.n_chunks_per_class = 24;
  spec.chunk_size = 500;
  spec.fw_vocab_size = 60;
  spec.shifted_fw_count = 12;
  spec.shift_ratio = 2.0;
  spec.seed = seed;

  Fixture f;
  f.data = gen_synthetic(spec, 0);
  f.reference = gen_synthetic(spec, 1);
  const auto freq = reference_frequencies(
      f.reference.chunks, f.reference.resources.function_words);
  f.markers = select_markers(freq, 0.05);
  f.cfg.seed = seed;
  f.cfg.schemes = {Scheme::FW};
  return f;
}

std::vector<Label> gold_of(const ChunkSet& set) {
  std::vector<Label> gold;
  for (const auto& c : set.chunks) gold.push_back(*c.label);
  return gold;
}

}  // namespace

TEST_SUITE("mixed") {

TEST_CASE("domain accuracy maximizes over cluster-domain matchings") {
  // Perfect separation.
  CHECK(domain_accuracy({0, 0, 1, 1}, {"a", "a", "b", "b"}) ==
        doctest::Approx(1.0));
  // The matching is label-invariant: swapped cluster ids still line up.
  CHECK(domain_accuracy({1, 1, 0, 0}, {"a", "a", "b", "b"}) ==
        doctest::Approx(1.0));
  // Single domain, single cluster.
  CHECK(domain_accuracy({0, 0, 0}, {"x", "x", "x"}) == doctest::Approx(1.0));

  // Cluster 0 holds 3 a's and 1 b; cluster 1 holds 1 a and 3 b's: the best
  // matching scores 6 of 8.
  CHECK(domain_accuracy({0, 0, 0, 0, 1, 1, 1, 1},
                        {"a", "a", "a", "b", "a", "b", "b", "b"}) ==
        doctest::Approx(0.75));

  // Cluster count must match the distinct-domain count.
  CHECK_THROWS_AS(domain_accuracy({0, 0, 1}, {"a", "a", "a"}), Error);
  CHECK_THROWS_AS(domain_accuracy({0, 0}, {"a", "b", "c"}), Error);
}

TEST_CASE("ot accuracy is the plain match fraction") {
  using L = Label;
  CHECK(ot_accuracy({L::O, L::O, L::T, L::T}, {L::O, L::T, L::T, L::T}) ==
        doctest::Approx(0.75));
  CHECK(ot_accuracy({L::O, L::T}, {L::O, L::T}) == doctest::Approx(1.0));
  CHECK(ot_accuracy({L::O, L::O, L::O, L::O}, {L::O, L::O, L::T, L::T}) ==
        doctest::Approx(0.5));
  CHECK_THROWS_AS(ot_accuracy({L::O}, {L::O, L::T}), Error);
}

TEST_CASE("one assumed domain collapses to the single-domain pipeline") {
  const auto f = single_domain_fixture(41);

  const auto judge = run_judge(f.cfg, f.data.chunks, f.data.resources,
                               Scheme::FW, &f.markers);

  for (auto strategy : {Strategy::FLAT, Strategy::TWO_PHASE}) {
    const auto result = strategy == Strategy::FLAT
                            ? flat_pipeline(f.data.chunks, 1, &f.markers,
                                            f.cfg, f.data.resources)
                            : two_phase_pipeline(f.data.chunks, 1, &f.markers,
                                                 f.cfg, f.data.resources);
    REQUIRE(result.chunk_ids.size() == f.data.chunks.chunks.size());
    for (std::size_t i = 0; i < result.chunk_ids.size(); ++i) {
      const auto& id = result.chunk_ids[i];
      CHECK(result.ot_labels[i] == judge.labels.at(id));
    }
    CHECK(result.k_domains == 1);
    REQUIRE(result.ot_accuracy.has_value());
    CHECK(*result.ot_accuracy == doctest::Approx(*judge.ot_accuracy));
  }
}

TEST_CASE("strategies produce deterministic full-coverage results") {
  const auto f = single_domain_fixture(13);

  const auto a = flat_pipeline(f.data.chunks, 1, &f.markers, f.cfg,
                               f.data.resources);
  const auto b = flat_pipeline(f.data.chunks, 1, &f.markers, f.cfg,
                               f.data.resources);
  CHECK(a.ot_labels == b.ot_labels);
  CHECK(a.domain_assignments == b.domain_assignments);

  // Single-domain fixture with a strong shift: near-gold labeling.
  const auto gold = gold_of(f.data.chunks);
  REQUIRE(a.ot_labels.size() == gold.size());
  CHECK(ot_accuracy(a.ot_labels, gold) >= 0.9);
}

TEST_CASE("two-phase splits every adequately sized phase-1 cluster") {
  const auto f = single_domain_fixture(29);
  const auto result = two_phase_pipeline(f.data.chunks, 2, &f.markers, f.cfg,
                                         f.data.resources);
  CHECK(result.fallback_clusters.empty());
  CHECK(result.strategy == Strategy::TWO_PHASE);
  // Each phase-1 cluster contributes both labels only if its split found
  // structure; at minimum every chunk is labeled.
  CHECK(result.ot_labels.size() == f.data.chunks.chunks.size());
  std::map<int, int> domain_sizes;
  for (int d : result.domain_assignments) domain_sizes[d]++;
  CHECK(domain_sizes.size() == 2);
}

TEST_CASE("too few rows for the requested arity is an error") {
  const auto f = single_domain_fixture(3);
  ChunkSet tiny;
  tiny.chunks.assign(f.data.chunks.chunks.begin(),
                     f.data.chunks.chunks.begin() + 3);
  CHECK_THROWS_AS(
      flat_pipeline(tiny, 2, &f.markers, f.cfg, f.data.resources), Error);
}

TEST_CASE("gold-majority labeling stands in when markers are absent") {
  const auto f = single_domain_fixture(19);
  const auto result =
      flat_pipeline(f.data.chunks, 1, nullptr, f.cfg, f.data.resources);
  REQUIRE(result.ot_accuracy.has_value());
  // Majority labeling of a good 2-clustering recovers most chunks.
  CHECK(*result.ot_accuracy >= 0.9);
  bool notes_gold = false;
  for (const auto& step : result.label_usage)
    if (step.find("gold") != std::string::npos) notes_gold = true;
  CHECK(notes_gold);
}

TEST_CASE("mixed result serialization carries the full outcome") {
  const auto f = single_domain_fixture(23);
  const auto result = two_phase_pipeline(f.data.chunks, 1, &f.markers, f.cfg,
                                         f.data.resources);
  const auto j = mixed_to_json(result);

  CHECK(j.at("strategy").get<std::string>() == "two-phase");
  CHECK(j.at("k_domains").get<int>() == 1);
  REQUIRE(j.contains("assignments"));
  REQUIRE(j.contains("labels"));
  for (std::size_t i = 0; i < result.chunk_ids.size(); ++i) {
    const auto& id = result.chunk_ids[i];
    CHECK(j.at("assignments").at(id).get<int>() ==
          result.domain_assignments[i]);
    const auto l = j.at("labels").at(id).get<std::string>();
    CHECK(l == std::string(1, label_char(result.ot_labels[i])));
  }
  if (result.ot_accuracy)
    CHECK(j.at("ot_accuracy").get<double>() ==
          doctest::Approx(*result.ot_accuracy));
}

}  // TEST_SUITE
