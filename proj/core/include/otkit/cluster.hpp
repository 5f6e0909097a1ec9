#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "otkit/corpus.hpp"

// K-means clustering with deterministic restarts, plus a BIC-driven variant
// that chooses k itself.
//
// Lloyd iteration over Euclidean distance; initialization is k-means++.
// Randomized steps never share generator state: restart j draws from
// derive_seed(seed, restart, j), so the selected run is a pure argmin over
// per-restart results and identical for any worker-thread count.

namespace otkit {

struct ClusteringRun {
  int k = 0;
  std::vector<int> assignments;           // per input row, in row order
  Eigen::MatrixXd centroids;              // k x dims
  std::vector<double> sse_per_cluster;    // within-cluster squared error
  double total_sse = 0.0;
  std::vector<double> sse_history;        // total SSE after each Lloyd sweep
  std::uint64_t seed = 0;                 // stream that produced this run
  int iterations = 0;
};

struct ClusterConfig {
  int n_restarts = 5;
  int max_iterations = 100;
  std::uint64_t seed = 0;
};

// k-means++ seeding: first centroid uniform, each next one drawn with
// probability proportional to squared distance from the nearest chosen
// centroid.  When every remaining point coincides with a centroid the draw
// falls back to uniform.
Eigen::MatrixXd kmeanspp_init(const Eigen::MatrixXd& data, int k,
                              std::uint64_t seed);

// Lloyd iteration from explicit initial centroids until assignments are
// stable or max_iterations sweeps have run.  Distance ties go to the lowest
// cluster index.  A cluster left empty by reassignment is reseeded with the
// point farthest from its current centroid.  Total SSE is checked to be
// non-increasing across sweeps; a violation throws (internal error), since
// it can only come from a bug.
ClusteringRun lloyd(const Eigen::MatrixXd& data, const Eigen::MatrixXd& init,
                    int max_iterations);

// Run n_restarts independent seeded k-means++ / Lloyd runs and keep the one
// with minimal total SSE (first such run on ties).
ClusteringRun best_of_restarts(const Eigen::MatrixXd& data, int k,
                               const ClusterConfig& cfg);

// Bayesian Information Criterion of a clustering under the identical
// spherical Gaussian model; higher is better.  Exposed for tests and used
// by xmeans to score candidate splits.
double spherical_bic(const Eigen::MatrixXd& data,
                     const std::vector<int>& assignments, int k);

// Decision data for one candidate 2-way split of a cluster.
struct SplitScore {
  double parent_bic = 0.0;
  double children_bic = 0.0;
  ClusteringRun split;  // the candidate 2-clustering of the subset
  bool accepted() const noexcept { return children_bic > parent_bic; }
};

// Score splitting one set of rows in two (used by xmeans; exposed so the
// accept/reject decision can be verified independently).
SplitScore score_split(const Eigen::MatrixXd& subset, const ClusterConfig& cfg,
                       std::uint64_t seed);

// Start from k_min clusters and repeatedly bisect any cluster whose split
// improves BIC, capped at k_max clusters, then polish the survivors with a
// final Lloyd pass over the full data.
ClusteringRun xmeans(const Eigen::MatrixXd& data, int k_min, int k_max,
                     const ClusterConfig& cfg);

// Clustering accuracy against gold labels: each cluster counts its majority
// class as correct; an exact tie credits half the cluster.
double evaluate_majority(const ClusteringRun& run, const std::vector<Label>& gold);

// Serialization: {k, assignments: {chunk_id: index}, total_sse,
// sse_per_cluster, seed}.
nlohmann::json clustering_to_json(const ClusteringRun& run,
                                  const std::vector<std::string>& chunk_ids);
// Restore assignments in chunk_ids order (centroids are not persisted).
ClusteringRun clustering_from_json(const nlohmann::json& j,
                                   const std::vector<std::string>& chunk_ids);

}  // namespace otkit
