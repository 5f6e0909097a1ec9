#include "otkit/svm.hpp"

#include <algorithm>
#include <cmath>

#include "otkit/error.hpp"
#include "otkit/parallel.hpp"
#include "otkit/rng.hpp"

namespace otkit {

namespace {

double hinge_objective(const Eigen::VectorXd& w, double b, double lambda,
                       const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  const Eigen::VectorXd margins =
      Eigen::VectorXd::Ones(x.rows()) - y.cwiseProduct(x * w + Eigen::VectorXd::Constant(x.rows(), b));
  const double hinge = margins.cwiseMax(0.0).mean();
  return 0.5 * lambda * w.squaredNorm() + hinge;
}

std::vector<Label> gold_labels_of(const ChunkSet& set) {
  std::vector<Label> gold;
  gold.reserve(set.chunks.size());
  for (const auto& c : set.chunks) {
    require(c.label.has_value(), Errc::missing_annotation,
            "chunk '" + c.id + "' has no gold label; supervised training needs one");
    gold.push_back(*c.label);
  }
  return gold;
}

// Shared featurization for the supervised paths: vocabulary and weighting
// statistics always come from the training portion.
struct Featurized {
  FeatureMatrix train;
  FeatureMatrix test;
};

Featurized featurize_pair(const ChunkSet& train, const ChunkSet& test,
                          const Resources& res,
                          const SupervisedPipelineOptions& opts) {
  const Vocabulary vocab = build_vocabulary(
      corpus_counts(train, opts.scheme, res), opts.scheme, opts.vocab_cap, res);
  Featurized f;
  f.train = vectorize(train, vocab, res);
  f.test = vectorize(test, vocab, res);
  if (opts.weighting == Weighting::TFIDF) {
    const Eigen::VectorXd factors = idf_factors(f.train);
    f.train = apply_idf(f.train, factors);
    f.test = apply_idf(f.test, factors);
  }
  const FeatureStandardizer s = fit_standardizer(f.train);
  standardize(f.train, s);
  standardize(f.test, s);
  return f;
}

}  // namespace

FeatureStandardizer fit_standardizer(const FeatureMatrix& m) {
  require(m.values.rows() > 0, Errc::insufficient_data,
          "cannot fit a standardizer on an empty matrix");
  FeatureStandardizer s;
  s.mean = m.values.colwise().mean().transpose();
  const Eigen::ArrayXd var =
      (m.values.rowwise() - s.mean.transpose()).array().square().colwise().sum().transpose() /
      static_cast<double>(m.values.rows());
  const Eigen::ArrayXd sd = var.sqrt();
  s.scale = (sd < 1e-12).select(1.0, sd);
  return s;
}

void standardize(FeatureMatrix& m, const FeatureStandardizer& s) {
  require(m.values.cols() == s.mean.size(), Errc::dim_mismatch,
          "standardizer dimensionality does not match the matrix");
  m.values.rowwise() -= s.mean.transpose();
  m.values.array().rowwise() /= s.scale.transpose().array();
}

LinearModel to_raw_space(LinearModel z_model, const FeatureStandardizer& s) {
  require(z_model.weights.size() == s.mean.size(), Errc::dim_mismatch,
          "standardizer dimensionality does not match the model");
  z_model.weights = z_model.weights.cwiseQuotient(s.scale);
  z_model.bias -= z_model.weights.dot(s.mean);
  return z_model;
}

LinearModel svm_train(const FeatureMatrix& m, const std::vector<Label>& gold,
                      const SvmOptions& opts, TrainTrace* trace) {
  const Eigen::Index n = m.values.rows();
  const Eigen::Index d = m.values.cols();
  require(static_cast<Eigen::Index>(gold.size()) == n, Errc::dim_mismatch,
          "label count does not match the matrix rows");
  require(n >= 2, Errc::insufficient_data, "training needs at least two rows");
  require(opts.lambda > 0.0, Errc::config, "lambda must be positive");
  require(opts.epochs >= 1, Errc::config, "epochs must be >= 1");

  Eigen::VectorXd y(n);
  bool saw_o = false, saw_t = false;
  for (Eigen::Index i = 0; i < n; ++i) {
    const bool is_o = gold[static_cast<std::size_t>(i)] == Label::O;
    y(i) = is_o ? 1.0 : -1.0;
    (is_o ? saw_o : saw_t) = true;
  }
  require(saw_o && saw_t, Errc::training,
          "training data must contain both classes");

  Eigen::VectorXd w = Eigen::VectorXd::Zero(d);
  double b = 0.0;
  Eigen::VectorXd w_sum = Eigen::VectorXd::Zero(d);
  double b_sum = 0.0;

  std::vector<std::size_t> order(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  std::uint64_t t = 0;
  for (int epoch = 0; epoch < opts.epochs; ++epoch) {
    Rng rng(derive_seed(opts.seed, SeedTag::shuffle,
                        static_cast<std::uint64_t>(epoch)));
    rng.shuffle(order);
    for (const std::size_t idx : order) {
      ++t;
      const double eta = 1.0 / (opts.lambda * static_cast<double>(t));
      const auto i = static_cast<Eigen::Index>(idx);
      const double margin = y(i) * (m.values.row(i).dot(w) + b);
      // Subgradient step: shrink w, and pull it toward violating examples.
      w *= 1.0 - eta * opts.lambda;
      if (margin < 1.0) {
        w += eta * y(i) * m.values.row(i).transpose();
        // The intercept is unregularized, so it gets no shrinkage; the
        // 1/(lambda*t) rate would make its first step 1/lambda and poison the
        // averaged iterate. A plain 1/t rate keeps it bounded.
        b += y(i) / static_cast<double>(t);
      }
      w_sum += w;
      b_sum += b;
    }
    if (trace) {
      const double tt = static_cast<double>(t);
      trace->epoch_objective.push_back(
          hinge_objective(w_sum / tt, b_sum / tt, opts.lambda, m.values, y));
    }
  }

  LinearModel model;
  const double tt = static_cast<double>(t);
  model.weights = w_sum / tt;
  model.bias = b_sum / tt;
  model.lambda = opts.lambda;
  model.epochs = opts.epochs;
  model.seed = opts.seed;
  model.vocabulary_ref = std::string(scheme_name(m.vocabulary.scheme)) + ":" +
                         std::to_string(m.vocabulary.terms.size());
  return model;
}

std::vector<Label> svm_predict(const LinearModel& model, const FeatureMatrix& m) {
  require(m.values.cols() == model.weights.size(), Errc::dim_mismatch,
          "feature dimensionality does not match the model");
  std::vector<Label> out(static_cast<std::size_t>(m.values.rows()));
  const Eigen::VectorXd scores =
      m.values * model.weights + Eigen::VectorXd::Constant(m.values.rows(), model.bias);
  for (Eigen::Index i = 0; i < scores.size(); ++i)
    out[static_cast<std::size_t>(i)] = scores(i) >= 0.0 ? Label::O : Label::T;
  return out;
}

double svm_accuracy(const LinearModel& model, const FeatureMatrix& m,
                    const std::vector<Label>& gold) {
  const auto pred = svm_predict(model, m);
  require(pred.size() == gold.size(), Errc::dim_mismatch,
          "gold label count does not match the matrix");
  require(!gold.empty(), Errc::evaluation, "nothing to evaluate");
  std::size_t hit = 0;
  for (std::size_t i = 0; i < gold.size(); ++i)
    if (pred[i] == gold[i]) ++hit;
  return static_cast<double>(hit) / static_cast<double>(gold.size());
}

CvResult ten_fold_cv(const ChunkSet& set, const Resources& res,
                     const SupervisedPipelineOptions& opts, std::uint64_t seed) {
  constexpr int kFolds = 10;
  const std::vector<Label> gold = gold_labels_of(set);

  // Stratified fold assignment: shuffle each class independently, then deal
  // round-robin, so per-class fold sizes differ by at most one.
  std::vector<int> fold_of(set.chunks.size(), -1);
  for (const Label cls : {Label::O, Label::T}) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < gold.size(); ++i)
      if (gold[i] == cls) members.push_back(i);
    require(members.size() >= static_cast<std::size_t>(kFolds),
            Errc::insufficient_data,
            std::string("10-fold CV needs >= 10 chunks per class; class ") +
                label_char(cls) + " has " + std::to_string(members.size()));
    Rng rng(derive_seed(seed, SeedTag::fold, cls == Label::O ? 0 : 1));
    rng.shuffle(members);
    for (std::size_t r = 0; r < members.size(); ++r)
      fold_of[members[r]] = static_cast<int>(r % kFolds);
  }

  CvResult result;
  result.fold_accuracies.assign(kFolds, 0.0);
  parallel_for(kFolds, [&](std::size_t f) {
    ChunkSet train, test;
    train.target_size = test.target_size = set.target_size;
    std::vector<Label> gold_train, gold_test;
    for (std::size_t i = 0; i < set.chunks.size(); ++i) {
      if (fold_of[i] == static_cast<int>(f)) {
        test.chunks.push_back(set.chunks[i]);
        gold_test.push_back(gold[i]);
      } else {
        train.chunks.push_back(set.chunks[i]);
        gold_train.push_back(gold[i]);
      }
    }
    const Featurized feats = featurize_pair(train, test, res, opts);
    SvmOptions svm = opts.svm;
    svm.seed = derive_seed(seed, SeedTag::fold, 100 + f);
    const LinearModel model = svm_train(feats.train, gold_train, svm);
    result.fold_accuracies[f] = svm_accuracy(model, feats.test, gold_test);
  });

  double sum = 0.0;
  for (const double a : result.fold_accuracies) sum += a;
  result.mean_accuracy = sum / kFolds;
  return result;
}

double cross_domain_eval(const ChunkSet& train, const ChunkSet& test,
                         const Resources& res,
                         const SupervisedPipelineOptions& opts,
                         std::uint64_t seed) {
  const std::vector<Label> gold_train = gold_labels_of(train);
  const std::vector<Label> gold_test = gold_labels_of(test);
  const Featurized feats = featurize_pair(train, test, res, opts);
  SvmOptions svm = opts.svm;
  svm.seed = derive_seed(seed, SeedTag::fold, 0);
  const LinearModel model = svm_train(feats.train, gold_train, svm);
  return svm_accuracy(model, feats.test, gold_test);
}

nlohmann::json linear_model_to_json(const LinearModel& m) {
  nlohmann::json j;
  j["weights"] = std::vector<double>(m.weights.data(),
                                     m.weights.data() + m.weights.size());
  j["bias"] = m.bias;
  j["lambda"] = m.lambda;
  j["epochs"] = m.epochs;
  j["seed"] = m.seed;
  j["vocabulary_ref"] = m.vocabulary_ref;
  return j;
}

LinearModel linear_model_from_json(const nlohmann::json& j) {
  LinearModel m;
  const auto w = j.at("weights").get<std::vector<double>>();
  m.weights = Eigen::Map<const Eigen::VectorXd>(
      w.data(), static_cast<Eigen::Index>(w.size()));
  m.bias = j.at("bias").get<double>();
  m.lambda = j.at("lambda").get<double>();
  m.epochs = j.at("epochs").get<int>();
  m.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("vocabulary_ref"))
    m.vocabulary_ref = j["vocabulary_ref"].get<std::string>();
  return m;
}

}  // namespace otkit
