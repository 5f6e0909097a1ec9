#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "otkit/corpus.hpp"
#include "otkit/features.hpp"

// Supervised reference point: a linear max-margin classifier trained by
// stochastic subgradient descent on the regularized hinge loss
//   lambda/2 ||w||^2 + mean_i max(0, 1 - y_i (w.x_i + b)).
// The learning rate is 1/(lambda*t) with t counting updates globally, and
// the returned model averages the iterates, which is what makes this
// schedule converge.  The bias is updated on margin violations but not
// regularized.
//
// This baseline exists for contrast: trained and tested in-domain it beats
// the unsupervised pipeline, but transferred across domains it collapses,
// while the unsupervised pipeline does not.  Not a production classifier.

namespace otkit {

struct LinearModel {
  Eigen::VectorXd weights;
  double bias = 0.0;
  double lambda = 0.0;
  int epochs = 0;
  std::uint64_t seed = 0;
  std::string vocabulary_ref;  // free-form note: what the columns mean
};

struct TrainTrace {
  // Full-data objective of the averaged iterate after each epoch.
  std::vector<double> epoch_objective;
};

struct SvmOptions {
  double lambda = 1e-4;
  int epochs = 50;
  std::uint64_t seed = 0;
};

// Train on rows of m labeled by gold (O -> +1, T -> -1).  Both classes must
// be present.  Pass a trace to record per-epoch objectives.
LinearModel svm_train(const FeatureMatrix& m, const std::vector<Label>& gold,
                      const SvmOptions& opts, TrainTrace* trace = nullptr);

// Predict O when w.x + b >= 0.
std::vector<Label> svm_predict(const LinearModel& model, const FeatureMatrix& m);

double svm_accuracy(const LinearModel& model, const FeatureMatrix& m,
                    const std::vector<Label>& gold);

// Per-dimension centering and unit-variance rescaling, fitted on training
// features.  Subgradient descent on raw term frequencies is dominated by the
// few widest columns, so the supervised paths standardize before training —
// the usual preparation for a margin classifier.  Constant columns keep
// scale 1 (they center to zero and never influence the model).
struct FeatureStandardizer {
  Eigen::VectorXd mean;
  Eigen::VectorXd scale;
};

FeatureStandardizer fit_standardizer(const FeatureMatrix& m);
void standardize(FeatureMatrix& m, const FeatureStandardizer& s);

// Rewrite a model trained on standardized features as the exactly equivalent
// raw-space model: w_j / scale_j and b - sum_j w_j mean_j / scale_j produce
// identical decision scores on unstandardized features, so serialized models
// always apply directly to raw feature rows.
LinearModel to_raw_space(LinearModel z_model, const FeatureStandardizer& s);

struct CvResult {
  double mean_accuracy = 0.0;
  std::vector<double> fold_accuracies;
};

struct SupervisedPipelineOptions {
  Scheme scheme = Scheme::FW;
  Weighting weighting = Weighting::TF;
  std::size_t vocab_cap = 1000;
  SvmOptions svm;
};

// Stratified 10-fold cross-validation.  Folds are seeded and per-class
// sizes differ by at most one; vocabulary and idf statistics are fitted on
// the training folds only.  Requires >= 10 chunks per class.
CvResult ten_fold_cv(const ChunkSet& set, const Resources& res,
                     const SupervisedPipelineOptions& opts, std::uint64_t seed);

// Train on one corpus, evaluate on another (vocabulary and weighting
// statistics come from the training corpus).  Returns test accuracy.
double cross_domain_eval(const ChunkSet& train, const ChunkSet& test,
                         const Resources& res,
                         const SupervisedPipelineOptions& opts,
                         std::uint64_t seed);

nlohmann::json linear_model_to_json(const LinearModel& m);
LinearModel linear_model_from_json(const nlohmann::json& j);

}  // namespace otkit
