#pragma once

// Shared fixture builders for the test suite.

#include <initializer_list>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "otkit/corpus.hpp"
#include "otkit/features.hpp"
#include "otkit/resources.hpp"

namespace otkit::test {

// A chunk made of the given tokens, token_count kept consistent.
inline Chunk chunk_of(std::string id, std::vector<std::string> tokens,
                      std::optional<Label> label = std::nullopt,
                      std::optional<std::vector<std::string>> pos = std::nullopt) {
  Chunk c;
  c.id = std::move(id);
  c.tokens = std::move(tokens);
  c.token_count = c.tokens.size();
  c.label = label;
  c.pos = std::move(pos);
  return c;
}

// n copies of `word` as a token list.
inline std::vector<std::string> repeat(const std::string& word, std::size_t n) {
  return std::vector<std::string>(n, word);
}

inline Resources tiny_resources(std::vector<std::string> fw,
                                std::vector<std::string> markers = {}) {
  Resources r;
  r.function_words = std::move(fw);
  r.cohesive_markers = std::move(markers);
  return r;
}

// Column vector of 1-D points (Eigen matrix with one column).
inline Eigen::MatrixXd points_1d(std::initializer_list<double> xs) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(xs.size()), 1);
  Eigen::Index i = 0;
  for (double x : xs) m(i++, 0) = x;
  return m;
}

// Feature matrix wrapping raw values, for code paths that need chunk ids.
inline FeatureMatrix matrix_of(const Eigen::MatrixXd& values,
                               Scheme scheme = Scheme::FW) {
  FeatureMatrix m;
  m.values = values;
  m.vocabulary.scheme = scheme;
  for (Eigen::Index c = 0; c < values.cols(); ++c)
    m.vocabulary.terms.push_back("t" + std::to_string(c));
  for (Eigen::Index r = 0; r < values.rows(); ++r)
    m.chunk_ids.push_back("c" + std::to_string(r));
  return m;
}

// Exhaustive minimum over all 2-partitions with both sides non-empty:
// the brute-force oracle for k=2 clustering on small data.
inline double brute_force_sse_k2(const Eigen::MatrixXd& data) {
  const int n = static_cast<int>(data.rows());
  double best = std::numeric_limits<double>::infinity();
  for (unsigned mask = 1; mask + 1 < (1u << n); ++mask) {
    Eigen::RowVectorXd m0 = Eigen::RowVectorXd::Zero(data.cols());
    Eigen::RowVectorXd m1 = Eigen::RowVectorXd::Zero(data.cols());
    int n0 = 0, n1 = 0;
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) {
        m1 += data.row(i);
        ++n1;
      } else {
        m0 += data.row(i);
        ++n0;
      }
    }
    m0 /= n0;
    m1 /= n1;
    double sse = 0.0;
    for (int i = 0; i < n; ++i)
      sse += (data.row(i) - ((mask & (1u << i)) ? m1 : m0)).squaredNorm();
    best = std::min(best, sse);
  }
  return best;
}

}  // namespace otkit::test
