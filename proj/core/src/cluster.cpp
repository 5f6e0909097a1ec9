#include "otkit/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "otkit/error.hpp"
#include "otkit/parallel.hpp"
#include "otkit/rng.hpp"

namespace otkit {

namespace {

// Index of the nearest centroid; ties go to the lowest index via strict <.
int nearest_centroid(const Eigen::MatrixXd& centroids,
                     const Eigen::RowVectorXd& x) {
  int best = 0;
  double best_d = (centroids.row(0) - x).squaredNorm();
  for (Eigen::Index c = 1; c < centroids.rows(); ++c) {
    const double d = (centroids.row(c) - x).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(c);
    }
  }
  return best;
}

}  // namespace

Eigen::MatrixXd kmeanspp_init(const Eigen::MatrixXd& data, int k,
                              std::uint64_t seed) {
  const Eigen::Index n = data.rows();
  require(k >= 1, Errc::config, "k must be >= 1");
  require(n >= k, Errc::insufficient_data,
          "cannot place " + std::to_string(k) + " centroids on " +
              std::to_string(n) + " rows");

  Rng rng(seed);
  Eigen::MatrixXd centroids(k, data.cols());
  centroids.row(0) = data.row(static_cast<Eigen::Index>(rng.below(n)));

  Eigen::VectorXd d2(n);
  for (Eigen::Index i = 0; i < n; ++i)
    d2(i) = (data.row(i) - centroids.row(0)).squaredNorm();

  for (int c = 1; c < k; ++c) {
    const double total = d2.sum();
    Eigen::Index pick;
    if (total <= 0.0) {
      // All remaining points sit exactly on a chosen centroid.
      pick = static_cast<Eigen::Index>(rng.below(n));
    } else {
      const double u = rng.uniform() * total;
      double cum = 0.0;
      pick = n - 1;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (d2(i) <= 0.0) continue;
        cum += d2(i);
        if (u < cum) {
          pick = i;
          break;
        }
      }
    }
    centroids.row(c) = data.row(pick);
    for (Eigen::Index i = 0; i < n; ++i)
      d2(i) = std::min(d2(i), (data.row(i) - centroids.row(c)).squaredNorm());
  }
  return centroids;
}

ClusteringRun lloyd(const Eigen::MatrixXd& data, const Eigen::MatrixXd& init,
                    int max_iterations) {
  const Eigen::Index n = data.rows();
  const int k = static_cast<int>(init.rows());
  require(k >= 1, Errc::config, "lloyd needs at least one centroid");
  require(n >= k, Errc::insufficient_data, "fewer rows than centroids");
  require(init.cols() == data.cols(), Errc::dim_mismatch,
          "centroid dimensionality does not match the data");
  require(max_iterations >= 1, Errc::config, "max_iterations must be >= 1");

  ClusteringRun run;
  run.k = k;
  run.centroids = init;
  run.assignments.assign(static_cast<std::size_t>(n), -1);

  std::vector<int> prev(static_cast<std::size_t>(n), -1);
  std::vector<Eigen::Index> sizes(static_cast<std::size_t>(k), 0);
  double prev_sse = std::numeric_limits<double>::infinity();

  for (int iter = 1; iter <= max_iterations; ++iter) {
    // Assignment sweep.
    std::fill(sizes.begin(), sizes.end(), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      const int c = nearest_centroid(run.centroids, data.row(i));
      run.assignments[static_cast<std::size_t>(i)] = c;
      ++sizes[static_cast<std::size_t>(c)];
    }

    // Reseed emptied clusters with the worst-fit point: the one farthest
    // from its currently assigned centroid.  Points that are the sole
    // member of their cluster stay put so the repair cannot cascade.
    for (int e = 0; e < k; ++e) {
      if (sizes[static_cast<std::size_t>(e)] > 0) continue;
      Eigen::Index worst = -1;
      double worst_d = -1.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const int owner = run.assignments[static_cast<std::size_t>(i)];
        if (sizes[static_cast<std::size_t>(owner)] <= 1) continue;
        const double d = (data.row(i) - run.centroids.row(owner)).squaredNorm();
        if (d > worst_d) {
          worst_d = d;
          worst = i;
        }
      }
      require(worst >= 0, Errc::internal, "cannot repair an empty cluster");
      --sizes[static_cast<std::size_t>(run.assignments[static_cast<std::size_t>(worst)])];
      run.assignments[static_cast<std::size_t>(worst)] = e;
      ++sizes[static_cast<std::size_t>(e)];
    }

    // Update sweep: centroids become the means of their members.
    run.centroids.setZero();
    for (Eigen::Index i = 0; i < n; ++i)
      run.centroids.row(run.assignments[static_cast<std::size_t>(i)]) += data.row(i);
    for (int c = 0; c < k; ++c)
      run.centroids.row(c) /= static_cast<double>(sizes[static_cast<std::size_t>(c)]);

    // SSE after the update; must never rise between sweeps.
    double sse = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      sse += (data.row(i) -
              run.centroids.row(run.assignments[static_cast<std::size_t>(i)]))
                 .squaredNorm();
    require(sse <= prev_sse * (1.0 + 1e-9) + 1e-12, Errc::internal,
            "SSE increased between sweeps");
    run.sse_history.push_back(sse);
    prev_sse = sse;
    run.iterations = iter;

    if (run.assignments == prev) break;
    prev = run.assignments;
  }

  run.sse_per_cluster.assign(static_cast<std::size_t>(k), 0.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int c = run.assignments[static_cast<std::size_t>(i)];
    run.sse_per_cluster[static_cast<std::size_t>(c)] +=
        (data.row(i) - run.centroids.row(c)).squaredNorm();
  }
  run.total_sse = std::accumulate(run.sse_per_cluster.begin(),
                                  run.sse_per_cluster.end(), 0.0);
  return run;
}

ClusteringRun best_of_restarts(const Eigen::MatrixXd& data, int k,
                               const ClusterConfig& cfg) {
  require(cfg.n_restarts >= 1, Errc::config, "n_restarts must be >= 1");
  std::vector<ClusteringRun> runs(static_cast<std::size_t>(cfg.n_restarts));
  parallel_for(runs.size(), [&](std::size_t j) {
    const std::uint64_t sj = derive_seed(cfg.seed, SeedTag::restart, j);
    runs[j] = lloyd(data, kmeanspp_init(data, k, sj), cfg.max_iterations);
    runs[j].seed = sj;
  });
  // Sequential argmin in restart order: ties keep the earliest run.
  std::size_t best = 0;
  for (std::size_t j = 1; j < runs.size(); ++j)
    if (runs[j].total_sse < runs[best].total_sse) best = j;
  return std::move(runs[best]);
}

double spherical_bic(const Eigen::MatrixXd& data,
                     const std::vector<int>& assignments, int k) {
  const Eigen::Index n = data.rows();
  const Eigen::Index d = data.cols();
  require(static_cast<Eigen::Index>(assignments.size()) == n, Errc::dim_mismatch,
          "assignment count does not match the data");
  require(k >= 1, Errc::config, "BIC needs k >= 1");

  std::vector<Eigen::Index> sizes(static_cast<std::size_t>(k), 0);
  Eigen::MatrixXd means = Eigen::MatrixXd::Zero(k, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int c = assignments[static_cast<std::size_t>(i)];
    require(c >= 0 && c < k, Errc::internal, "assignment index out of range");
    ++sizes[static_cast<std::size_t>(c)];
    means.row(c) += data.row(i);
  }
  for (int c = 0; c < k; ++c) {
    require(sizes[static_cast<std::size_t>(c)] > 0, Errc::internal,
            "BIC over a clustering with an empty cluster");
    means.row(c) /= static_cast<double>(sizes[static_cast<std::size_t>(c)]);
  }

  double sse = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    sse += (data.row(i) - means.row(assignments[static_cast<std::size_t>(i)]))
               .squaredNorm();

  // Identical spherical Gaussians: one pooled variance, uniform over the d
  // coordinates; k*(d+1) free parameters (k*d means + k-1 mixing weights +
  // the shared variance, rounded up to k*(d+1) in the usual formulation).
  const double R = static_cast<double>(n);
  const double D = static_cast<double>(d);
  const double sigma2 = std::max(sse / (D * R), 1e-30);

  double loglik =
      -0.5 * R * D * std::log(2.0 * std::numbers::pi * sigma2) - 0.5 * R * D;
  for (int c = 0; c < k; ++c) {
    const double rc = static_cast<double>(sizes[static_cast<std::size_t>(c)]);
    loglik += rc * std::log(rc / R);
  }
  const double params = static_cast<double>(k) * (D + 1.0);
  return loglik - 0.5 * params * std::log(R);
}

SplitScore score_split(const Eigen::MatrixXd& subset, const ClusterConfig& cfg,
                       std::uint64_t seed) {
  require(subset.rows() >= 2, Errc::insufficient_data,
          "cannot split fewer than two rows");
  SplitScore s;
  const std::vector<int> one(static_cast<std::size_t>(subset.rows()), 0);
  s.parent_bic = spherical_bic(subset, one, 1);
  ClusterConfig sub = cfg;
  sub.seed = seed;
  s.split = best_of_restarts(subset, 2, sub);
  s.children_bic = spherical_bic(subset, s.split.assignments, 2);
  return s;
}

ClusteringRun xmeans(const Eigen::MatrixXd& data, int k_min, int k_max,
                     const ClusterConfig& cfg) {
  require(k_min >= 1 && k_min <= k_max, Errc::config,
          "need 1 <= k_min <= k_max");
  require(data.rows() >= k_min, Errc::insufficient_data,
          "fewer rows than k_min");

  ClusteringRun base = best_of_restarts(data, k_min, cfg);

  // Member lists per cluster, kept in cluster-index order.
  std::vector<std::vector<Eigen::Index>> members(
      static_cast<std::size_t>(k_min));
  for (Eigen::Index i = 0; i < data.rows(); ++i)
    members[static_cast<std::size_t>(base.assignments[static_cast<std::size_t>(i)])]
        .push_back(i);

  std::uint64_t attempt = 0;
  bool grew = true;
  while (grew && static_cast<int>(members.size()) < k_max) {
    grew = false;
    const std::size_t snapshot = members.size();
    for (std::size_t c = 0; c < snapshot; ++c) {
      if (static_cast<int>(members.size()) >= k_max) break;
      if (members[c].size() < 2) { ++attempt; continue; }

      Eigen::MatrixXd subset(static_cast<Eigen::Index>(members[c].size()),
                             data.cols());
      for (std::size_t r = 0; r < members[c].size(); ++r)
        subset.row(static_cast<Eigen::Index>(r)) = data.row(members[c][r]);

      const std::uint64_t split_seed =
          derive_seed(cfg.seed, SeedTag::xmeans, attempt++);
      const SplitScore score = score_split(subset, cfg, split_seed);
      if (!score.accepted()) continue;

      std::vector<Eigen::Index> left, right;
      for (std::size_t r = 0; r < members[c].size(); ++r)
        (score.split.assignments[r] == 0 ? left : right).push_back(members[c][r]);
      members[c] = std::move(left);
      members.push_back(std::move(right));
      grew = true;
    }
  }

  // Final polish: one Lloyd run from the surviving centroids ties the local
  // decisions into a coherent global partition.
  const int k = static_cast<int>(members.size());
  Eigen::MatrixXd centroids = Eigen::MatrixXd::Zero(k, data.cols());
  for (int c = 0; c < k; ++c) {
    for (const auto i : members[static_cast<std::size_t>(c)])
      centroids.row(c) += data.row(i);
    centroids.row(c) /= static_cast<double>(members[static_cast<std::size_t>(c)].size());
  }
  ClusteringRun run = lloyd(data, centroids, cfg.max_iterations);
  run.seed = cfg.seed;
  return run;
}

double evaluate_majority(const ClusteringRun& run, const std::vector<Label>& gold) {
  require(gold.size() == run.assignments.size(), Errc::evaluation,
          "gold label count does not match the clustering");
  require(!gold.empty(), Errc::evaluation, "nothing to evaluate");
  std::vector<std::size_t> n_o(static_cast<std::size_t>(run.k), 0);
  std::vector<std::size_t> n_t(static_cast<std::size_t>(run.k), 0);
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const auto c = static_cast<std::size_t>(run.assignments[i]);
    (gold[i] == Label::O ? n_o : n_t)[c] += 1;
  }
  double correct = 0.0;
  for (std::size_t c = 0; c < static_cast<std::size_t>(run.k); ++c) {
    if (n_o[c] == n_t[c])
      correct += static_cast<double>(n_o[c] + n_t[c]) / 2.0;
    else
      correct += static_cast<double>(std::max(n_o[c], n_t[c]));
  }
  return correct / static_cast<double>(gold.size());
}

nlohmann::json clustering_to_json(const ClusteringRun& run,
                                  const std::vector<std::string>& chunk_ids) {
  require(chunk_ids.size() == run.assignments.size(), Errc::dim_mismatch,
          "chunk id count does not match the clustering");
  nlohmann::json j;
  j["k"] = run.k;
  nlohmann::json assign = nlohmann::json::object();
  for (std::size_t i = 0; i < chunk_ids.size(); ++i)
    assign[chunk_ids[i]] = run.assignments[i];
  j["assignments"] = std::move(assign);
  j["total_sse"] = run.total_sse;
  j["sse_per_cluster"] = run.sse_per_cluster;
  j["seed"] = run.seed;
  j["iterations"] = run.iterations;
  return j;
}

ClusteringRun clustering_from_json(const nlohmann::json& j,
                                   const std::vector<std::string>& chunk_ids) {
  ClusteringRun run;
  run.k = j.at("k").get<int>();
  run.total_sse = j.at("total_sse").get<double>();
  run.sse_per_cluster = j.at("sse_per_cluster").get<std::vector<double>>();
  run.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("iterations")) run.iterations = j["iterations"].get<int>();
  const auto& assign = j.at("assignments");
  run.assignments.reserve(chunk_ids.size());
  for (const auto& id : chunk_ids) {
    require(assign.contains(id), Errc::io,
            "clustering file has no assignment for chunk '" + id + "'");
    run.assignments.push_back(assign[id].get<int>());
  }
  return run;
}

}  // namespace otkit
