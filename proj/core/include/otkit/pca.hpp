#pragma once

#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "otkit/features.hpp"

// Dimensionality reduction on the correlation matrix.
//
// Feature columns live on wildly different scales (a frequent trigram vs. a
// rare marker), so each kept column is standardized to zero mean / unit
// sample variance before the eigendecomposition — PCA on the correlation
// rather than the covariance matrix.  Components are retained smallest-
// prefix-first until their eigenvalue mass reaches variance_covered; the
// default of 0.1 deliberately keeps only the strongest directions, which is
// where register differences concentrate while topical noise spreads thin.

namespace otkit {

struct PcaModel {
  Eigen::VectorXd means;   // per input column
  Eigen::VectorXd scales;  // sample std dev per input column; 0 => dropped
  // Principal axes as rows over the kept (nonzero-variance) columns,
  // eigenvalue-descending.  cols() == number of kept input columns.
  Eigen::MatrixXd components;
  std::vector<double> eigenvalues;  // all eigenvalues of the kept block, desc
  double variance_covered = 0.0;    // the configured stopping threshold
};

// Number of input columns the model standardizes.
inline Eigen::Index pca_input_dims(const PcaModel& m) { return m.means.size(); }
// Number of retained components (output dimensionality).
inline Eigen::Index pca_output_dims(const PcaModel& m) { return m.components.rows(); }

// Fit on raw rows (chunks x features).  Requires >= 2 rows and at least one
// non-constant column; variance_covered must lie in (0, 1].
PcaModel pca_fit(const Eigen::MatrixXd& rows, double variance_covered);

inline PcaModel pca_fit(const FeatureMatrix& m, double variance_covered) {
  return pca_fit(m.values, variance_covered);
}

// Standardize + project.  Column count must match the fitted input.
Eigen::MatrixXd pca_transform(const PcaModel& model, const Eigen::MatrixXd& rows);

inline Eigen::MatrixXd pca_transform(const PcaModel& model, const FeatureMatrix& m) {
  return pca_transform(model, m.values);
}

nlohmann::json pca_to_json(const PcaModel& model);
PcaModel pca_from_json(const nlohmann::json& j);

}  // namespace otkit
