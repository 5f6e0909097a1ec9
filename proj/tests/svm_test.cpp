#include <doctest.h>

#include <cmath>
#include <vector>

#include "helpers.hpp"
#include "otkit/error.hpp"
#include "otkit/svm.hpp"
#include "otkit/synth.hpp"

using namespace otkit;

namespace {

FeatureMatrix mat_1d(std::vector<double> xs) {
  Eigen::MatrixXd v(static_cast<Eigen::Index>(xs.size()), 1);
  for (std::size_t i = 0; i < xs.size(); ++i)
    v(static_cast<Eigen::Index>(i), 0) = xs[i];
  return test::matrix_of(v);
}

// Small, strongly separable synthetic corpus for end-to-end checks.
SyntheticData tiny_corpus(std::uint64_t seed) {
  SyntheticSpec spec;
  spec.n_chunks_per_class = 30;
  spec.chunk_size = 300;
  spec.fw_vocab_size = 40;
  spec.shifted_fw_count = 10;
  spec.shift_ratio = 3.0;
  spec.seed = seed;
  return gen_synthetic(spec);
}

}  // namespace

TEST_SUITE("svm") {

TEST_CASE("a separable pair is classified correctly") {
  const auto m = mat_1d({-1.0, 1.0});
  const std::vector<Label> y{Label::T, Label::O};
  SvmOptions opts;
  opts.lambda = 1e-4;
  opts.epochs = 50;
  opts.seed = 3;
  const auto model = svm_train(m, y, opts);
  CHECK(svm_predict(model, m) == y);
  CHECK(svm_accuracy(model, m, y) == doctest::Approx(1.0));
}

TEST_CASE("huge regularization degenerates to the majority class") {
  const auto m = mat_1d({-1.0, 1.0, 2.0, 3.0});
  const std::vector<Label> y{Label::T, Label::O, Label::O, Label::O};
  SvmOptions opts;
  opts.lambda = 1e6;
  opts.epochs = 50;
  opts.seed = 3;
  const auto model = svm_train(m, y, opts);
  CHECK(model.weights.norm() < 1e-3);
  // sign(bias) carries the decision, and the majority class is O.
  for (Label l : svm_predict(model, m)) CHECK(l == Label::O);
}

TEST_CASE("training is deterministic in the seed") {
  const auto m = mat_1d({-2.0, -1.0, 1.0, 2.0});
  const std::vector<Label> y{Label::T, Label::T, Label::O, Label::O};
  SvmOptions opts;
  opts.seed = 11;
  const auto a = svm_train(m, y, opts);
  const auto b = svm_train(m, y, opts);
  CHECK(a.weights == b.weights);
  CHECK(a.bias == b.bias);
}

TEST_CASE("prediction ties go to O and negation flips everything") {
  const auto m = mat_1d({-1.0, 0.0, 2.0});
  LinearModel zero;
  zero.weights = Eigen::VectorXd::Zero(1);
  zero.bias = 0.0;
  for (Label l : svm_predict(zero, m)) CHECK(l == Label::O);

  LinearModel model;
  model.weights = Eigen::VectorXd::Constant(1, 1.5);
  model.bias = -0.5;
  const auto pred = svm_predict(model, m);

  LinearModel negated = model;
  negated.weights = -model.weights;
  negated.bias = -model.bias;
  const auto flipped = svm_predict(negated, m);
  REQUIRE(pred.size() == flipped.size());
  for (std::size_t i = 0; i < pred.size(); ++i) {
    CHECK(pred[i] != flipped[i]);
  }

  // Positive scaling never changes a decision.
  LinearModel scaled = model;
  scaled.weights *= 7.25;
  scaled.bias *= 7.25;
  CHECK(svm_predict(scaled, m) == pred);
}

TEST_CASE("degenerate training inputs are rejected") {
  const auto m = mat_1d({1.0, 2.0});
  CHECK_THROWS_AS(svm_train(m, {Label::O, Label::O}, SvmOptions{}), Error);
  CHECK_THROWS_AS(svm_train(m, {Label::O}, SvmOptions{}), Error);
  SvmOptions bad;
  bad.lambda = 0.0;
  CHECK_THROWS_AS(svm_train(m, {Label::O, Label::T}, bad), Error);

  LinearModel model;
  model.weights = Eigen::VectorXd::Zero(3);
  CHECK_THROWS_AS(svm_predict(model, m), Error);
}

TEST_CASE("averaged-iterate objective is non-increasing") {
  const auto m = mat_1d({-2.0, -1.5, -1.0, -0.5, 0.5, 1.0, 1.5, 2.0});
  const std::vector<Label> y{Label::T, Label::T, Label::T, Label::T,
                             Label::O, Label::O, Label::O, Label::O};
  SvmOptions opts;
  opts.lambda = 1e-2;
  opts.epochs = 40;
  opts.seed = 5;
  TrainTrace trace;
  svm_train(m, y, opts, &trace);
  REQUIRE(trace.epoch_objective.size() == 40);
  for (std::size_t i = 1; i < trace.epoch_objective.size(); ++i)
    CHECK(trace.epoch_objective[i] <= trace.epoch_objective[i - 1] + 1e-6);
}

TEST_CASE("cross-validation learns a separable corpus") {
  const auto data = tiny_corpus(7);
  SupervisedPipelineOptions opts;
  opts.scheme = Scheme::FW;
  opts.weighting = Weighting::TF;

  const auto cv = ten_fold_cv(data.chunks, data.resources, opts, 21);
  CHECK(cv.fold_accuracies.size() == 10);
  CHECK(cv.mean_accuracy >= 0.9);

  double sum = 0.0;
  for (double a : cv.fold_accuracies) sum += a;
  CHECK(cv.mean_accuracy == doctest::Approx(sum / 10.0).epsilon(1e-12));

  // Determinism.
  const auto again = ten_fold_cv(data.chunks, data.resources, opts, 21);
  CHECK(again.fold_accuracies == cv.fold_accuracies);
}

TEST_CASE("cross-validation is chance on feature-identical rows") {
  // Every chunk is the same token stream; labels alternate.  No information
  // exists, so stratified folds must come out at exactly one half.
  ChunkSet set;
  for (int i = 0; i < 40; ++i)
    set.chunks.push_back(test::chunk_of("c" + std::to_string(i),
                                        test::repeat("the", 50),
                                        i % 2 ? Label::T : Label::O));
  const auto res = test::tiny_resources({"the", "of"});
  SupervisedPipelineOptions opts;
  opts.scheme = Scheme::FW;

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto cv = ten_fold_cv(set, res, opts, seed);
    CHECK(cv.mean_accuracy == doctest::Approx(0.5).epsilon(0.1));
  }
}

TEST_CASE("cross-domain evaluation on the training set is training accuracy") {
  const auto data = tiny_corpus(9);
  SupervisedPipelineOptions opts;
  opts.scheme = Scheme::FW;
  const double self =
      cross_domain_eval(data.chunks, data.chunks, data.resources, opts, 33);
  CHECK(self >= 0.95);  // separable fixture: near-perfect on itself
}

TEST_CASE("model serialization round-trips") {
  const auto m = mat_1d({-1.0, 1.0, 3.0});
  const std::vector<Label> y{Label::T, Label::O, Label::O};
  SvmOptions opts;
  opts.seed = 2;
  const auto model = svm_train(m, y, opts);
  const auto back = linear_model_from_json(linear_model_to_json(model));
  CHECK(back.weights == model.weights);
  CHECK(back.bias == model.bias);
  CHECK(back.lambda == model.lambda);
  CHECK(back.epochs == model.epochs);
  CHECK(back.seed == model.seed);
  CHECK(back.vocabulary_ref == model.vocabulary_ref);
}

TEST_CASE("standardization centers columns and leaves constants alone") {
  Eigen::MatrixXd v(4, 3);
  v << 1.0, 5.0, 2.0,
       3.0, 5.0, 4.0,
       5.0, 5.0, 6.0,
       7.0, 5.0, 8.0;
  FeatureMatrix m = test::matrix_of(v);
  const auto s = fit_standardizer(m);
  CHECK(s.scale(1) == doctest::Approx(1.0));  // constant column
  standardize(m, s);
  for (Eigen::Index j = 0; j < 3; ++j)
    CHECK(m.values.col(j).mean() == doctest::Approx(0.0).epsilon(1e-12));
  // Non-constant columns get unit population variance.
  for (Eigen::Index j : {Eigen::Index{0}, Eigen::Index{2}}) {
    const double var = m.values.col(j).squaredNorm() / 4.0;
    CHECK(var == doctest::Approx(1.0));
  }
  CHECK(m.values.col(1).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
}

TEST_CASE("a raw-space model scores raw rows like the standardized one") {
  Eigen::MatrixXd v(6, 2);
  v << 0.01, 100.0,
       0.02, 250.0,
       0.03, 150.0,
       0.04, 400.0,
       0.05, 300.0,
       0.06, 200.0;
  FeatureMatrix raw = test::matrix_of(v);
  const std::vector<Label> y{Label::T, Label::T, Label::T,
                             Label::O, Label::O, Label::O};
  const auto s = fit_standardizer(raw);
  FeatureMatrix z = raw;
  standardize(z, s);
  SvmOptions opts;
  opts.seed = 7;
  const auto z_model = svm_train(z, y, opts);
  const auto raw_model = to_raw_space(z_model, s);
  for (Eigen::Index i = 0; i < v.rows(); ++i) {
    const double zs = z_model.weights.dot(z.values.row(i)) + z_model.bias;
    const double rs = raw_model.weights.dot(raw.values.row(i)) + raw_model.bias;
    CHECK(rs == doctest::Approx(zs).epsilon(1e-9));
  }
  CHECK(svm_predict(raw_model, raw) == svm_predict(z_model, z));
}

}  // TEST_SUITE
