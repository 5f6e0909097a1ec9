#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "otkit/cluster.hpp"
#include "otkit/corpus.hpp"

// Unsupervised cluster labeling.
//
// Clustering separates original from translated text but does not say which
// cluster is which.  The decision is made by language models over "marker"
// words: function words whose relative frequency differs clearly between
// the classes in a small labeled reference sample.  Each class gets a
// prototype language model built from its markers, each cluster gets a
// language model from its own text, and the cluster/class pairing that
// minimizes the product of Jensen-Shannon distances wins.  The only use of
// gold labels in the whole unsupervised pipeline is this reference sample
// (and evaluation); both uses are recorded in the run report.

namespace otkit {

struct MarkerSets {
  std::vector<std::string> o_markers;  // over-represented in original text
  std::vector<std::string> t_markers;  // over-represented in translations
  double delta = 0.05;                 // ratio band that counts as "clear"
  std::string reference;               // free-form provenance of the sample
};

// Relative frequencies of the function-word list terms in the O and the T
// portion of a labeled reference sample (counts normalized by the summed
// token_count of each portion).  Chunks without labels are rejected.
struct ReferenceFrequencies {
  std::map<std::string, double> o;  // sorted keys => deterministic iteration
  std::map<std::string, double> t;
};
ReferenceFrequencies reference_frequencies(const ChunkSet& reference,
                                           const std::vector<std::string>& fw_list);

// A word becomes an O-marker when freq_O / freq_T > 1 + delta and a T-marker
// when the ratio < 1 - delta; words missing from one class entirely count as
// markers of the other.  Words near ratio 1 are dropped.
MarkerSets select_markers(const ReferenceFrequencies& freq, double delta);

struct UnigramLM {
  std::vector<std::string> vocabulary;  // shared, sorted ascending
  Eigen::VectorXd probabilities;        // aligned with vocabulary, sums to 1
  double epsilon = 0.0;                 // additive smoothing used
};

// Smoothed unigram model over a fixed vocabulary:
//   p(w) = (count(w) + epsilon) / (total + epsilon * |V|).
// Every probability is strictly positive for epsilon > 0.
UnigramLM unigram_lm(const std::map<std::string, std::int64_t>& counts,
                     const std::vector<std::string>& vocabulary, double epsilon);

// Prototype model of a class: its marker words, once each, over the shared
// vocabulary.
UnigramLM prototype_lm(const std::vector<std::string>& markers,
                       const std::vector<std::string>& vocabulary, double epsilon);

// Jensen-Shannon *distance*: sqrt of the base-2 Jensen-Shannon divergence.
// Symmetric by construction, in [0, 1], and requires both models to share
// one vocabulary.
double js_distance(const UnigramLM& p, const UnigramLM& q);

// Outcome of the two-cluster labeling decision, kept for reports.
struct LabelDecision {
  double d_o_c1 = 0.0, d_t_c1 = 0.0, d_o_c2 = 0.0, d_t_c2 = 0.0;
  double alpha = 1.0;
  Label cluster1 = Label::T;  // label given to cluster index 0
  Label cluster2 = Label::O;  // label given to cluster index 1
};

// Cluster 1 is original iff
//   d(P_O, C1) * d(P_T, C2) < alpha * d(P_O, C2) * d(P_T, C1)
// (strict; equality labels cluster 1 as translated).  The two clusters
// always receive opposite labels.
LabelDecision assign_labels(const UnigramLM& c1, const UnigramLM& c2,
                            const UnigramLM& p_o, const UnigramLM& p_t,
                            double alpha);

// Full labeling of a 2-way clustering: build cluster LMs over the marker
// vocabulary from the chunks' tokens (case-insensitive), run assign_labels,
// and return one label per chunk in row order.
std::vector<Label> label_clusters(const ClusteringRun& run, const ChunkSet& set,
                                  const MarkerSets& markers, double alpha,
                                  double epsilon,
                                  LabelDecision* decision = nullptr);

nlohmann::json markers_to_json(const MarkerSets& m);
MarkerSets markers_from_json(const nlohmann::json& j);

}  // namespace otkit
