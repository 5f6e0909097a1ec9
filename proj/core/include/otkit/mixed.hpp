#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "otkit/labeling.hpp"
#include "otkit/pipeline.hpp"

// Mixed-domain classification.
//
// When chunks from several domains are pooled, domain structure dominates
// the feature space and a plain 2-way clustering separates domains, not
// translation status.  Two counter-strategies:
//
//   flat       one k-means run with 2*k clusters, then nearest-centroid
//              cluster pairs are treated as (O, T) halves of one domain;
//   two-phase  k-means with k clusters to find domains, then an independent
//              2-way clustering (with its own PCA fit) inside each.
//
// The two-phase PCA refit is the load-bearing step: once a single domain's
// rows stand alone, the class signal is the strongest direction left.

namespace otkit {

struct MixedResult {
  Strategy strategy = Strategy::FLAT;
  int k_domains = 0;
  std::vector<std::string> chunk_ids;      // row order of the inputs
  std::vector<int> domain_assignments;     // per chunk: domain cluster/pair
  std::vector<Label> ot_labels;            // per chunk
  std::optional<double> domain_accuracy;   // when gold domains fit the arity
  std::optional<double> ot_accuracy;       // when gold labels present
  std::vector<int> fallback_clusters;      // phase-1 clusters too small to split
  std::vector<std::string> label_usage;    // audit, as in PipelineReport
};

// Both strategies share the signature: chunks, the number of domains to
// assume, optional markers for unsupervised labeling (without them, gold
// labels are required and clusters are scored by their majority class), and
// the run configuration (scheme, weighting, PCA, clustering, labeling
// constants; cfg.schemes.front() is the scheme used).
MixedResult flat_pipeline(const ChunkSet& chunks, int k_domains,
                          const MarkerSets* markers, const RunConfig& cfg,
                          const Resources& res);

MixedResult two_phase_pipeline(const ChunkSet& chunks, int k_domains,
                               const MarkerSets* markers, const RunConfig& cfg,
                               const Resources& res);

// Accuracy of a domain assignment under the best one-to-one matching of
// clusters to gold domains (maximum over permutations).  The number of
// clusters must equal the number of distinct gold domains.
double domain_accuracy(const std::vector<int>& assignments,
                       const std::vector<std::string>& gold_domains);

// Plain fraction of chunks whose predicted label matches gold.
double ot_accuracy(const std::vector<Label>& labels, const std::vector<Label>& gold);

nlohmann::json mixed_to_json(const MixedResult& r);

}  // namespace otkit
