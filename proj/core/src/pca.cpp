#include "otkit/pca.hpp"

#include <cmath>

#include "otkit/error.hpp"

namespace otkit {

namespace {

// Columns whose sample standard deviation is this small (relative to the
// column's magnitude) carry no signal and would blow up under 1/sigma.
bool is_constant(double stddev, double mean) {
  return stddev <= 1e-12 * std::max(1.0, std::abs(mean));
}

// Standardized kept-column block of `rows` under the model.
Eigen::MatrixXd standardize(const PcaModel& m, const Eigen::MatrixXd& rows,
                            const std::vector<Eigen::Index>& kept) {
  Eigen::MatrixXd z(rows.rows(), static_cast<Eigen::Index>(kept.size()));
  for (std::size_t k = 0; k < kept.size(); ++k) {
    const Eigen::Index j = kept[k];
    z.col(static_cast<Eigen::Index>(k)) =
        (rows.col(j).array() - m.means(j)) / m.scales(j);
  }
  return z;
}

std::vector<Eigen::Index> kept_columns(const PcaModel& m) {
  std::vector<Eigen::Index> kept;
  for (Eigen::Index j = 0; j < m.scales.size(); ++j)
    if (m.scales(j) > 0.0) kept.push_back(j);
  return kept;
}

}  // namespace

PcaModel pca_fit(const Eigen::MatrixXd& rows, double variance_covered) {
  require(variance_covered > 0.0 && variance_covered <= 1.0, Errc::config,
          "variance_covered must lie in (0, 1]");
  const Eigen::Index n = rows.rows();
  const Eigen::Index d = rows.cols();
  require(n >= 2, Errc::insufficient_data, "PCA needs at least two rows");
  require(d >= 1, Errc::dim_mismatch, "PCA needs at least one column");

  PcaModel m;
  m.variance_covered = variance_covered;
  m.means = rows.colwise().mean();
  m.scales = Eigen::VectorXd::Zero(d);

  std::vector<Eigen::Index> kept;
  for (Eigen::Index j = 0; j < d; ++j) {
    const double var =
        (rows.col(j).array() - m.means(j)).square().sum() / double(n - 1);
    const double sd = std::sqrt(var);
    if (!is_constant(sd, m.means(j))) {
      m.scales(j) = sd;
      kept.push_back(j);
    }
  }
  require(!kept.empty(), Errc::degenerate_data,
          "every feature column is constant; nothing to decompose");

  const Eigen::MatrixXd z = standardize(m, rows, kept);
  const Eigen::MatrixXd corr = (z.transpose() * z) / double(n - 1);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(corr);
  require(eig.info() == Eigen::Success, Errc::degenerate_data,
          "eigendecomposition failed to converge");

  // Eigen returns eigenvalues ascending; flip to descending and clamp the
  // numerical dust at the bottom of the spectrum to exactly zero.
  const Eigen::Index kd = static_cast<Eigen::Index>(kept.size());
  const double trace = eig.eigenvalues().sum();
  const double floor = 1e-12 * std::max(trace, 0.0);
  std::vector<double> lambda(static_cast<std::size_t>(kd));
  for (Eigen::Index i = 0; i < kd; ++i) {
    double v = eig.eigenvalues()(kd - 1 - i);
    lambda[static_cast<std::size_t>(i)] = v < floor ? 0.0 : v;
  }

  double total = 0.0;
  for (double v : lambda) total += v;
  require(total > 0.0, Errc::degenerate_data, "correlation matrix has zero trace");

  Eigen::Index retained = 0;
  double cum = 0.0;
  while (retained < kd) {
    cum += lambda[static_cast<std::size_t>(retained)];
    ++retained;
    if (cum / total >= variance_covered) break;
  }

  m.eigenvalues = std::move(lambda);
  m.components.resize(retained, kd);
  for (Eigen::Index r = 0; r < retained; ++r) {
    Eigen::VectorXd axis = eig.eigenvectors().col(kd - 1 - r);
    // Deterministic sign: the entry of largest magnitude is positive
    // (lowest index wins ties), so serialized models are stable.
    Eigen::Index imax = 0;
    for (Eigen::Index i = 1; i < kd; ++i)
      if (std::abs(axis(i)) > std::abs(axis(imax))) imax = i;
    if (axis(imax) < 0.0) axis = -axis;
    m.components.row(r) = axis.transpose();
  }
  return m;
}

Eigen::MatrixXd pca_transform(const PcaModel& model, const Eigen::MatrixXd& rows) {
  require(rows.cols() == pca_input_dims(model), Errc::dim_mismatch,
          "input column count does not match the fitted model");
  const auto kept = kept_columns(model);
  require(static_cast<Eigen::Index>(kept.size()) == model.components.cols(),
          Errc::internal, "model kept-column bookkeeping is inconsistent");
  const Eigen::MatrixXd z = standardize(model, rows, kept);
  return z * model.components.transpose();
}

nlohmann::json pca_to_json(const PcaModel& m) {
  nlohmann::json j;
  j["means"] = std::vector<double>(m.means.data(), m.means.data() + m.means.size());
  j["scales"] =
      std::vector<double>(m.scales.data(), m.scales.data() + m.scales.size());
  auto comps = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.components.rows(); ++r) {
    std::vector<double> row(m.components.cols());
    for (Eigen::Index c = 0; c < m.components.cols(); ++c)
      row[static_cast<std::size_t>(c)] = m.components(r, c);
    comps.push_back(row);
  }
  j["components"] = std::move(comps);
  j["eigenvalues"] = m.eigenvalues;
  j["variance_covered"] = m.variance_covered;
  return j;
}

PcaModel pca_from_json(const nlohmann::json& j) {
  PcaModel m;
  const auto means = j.at("means").get<std::vector<double>>();
  const auto scales = j.at("scales").get<std::vector<double>>();
  require(means.size() == scales.size(), Errc::io,
          "means/scales length mismatch in PCA model");
  m.means = Eigen::Map<const Eigen::VectorXd>(means.data(),
                                              static_cast<Eigen::Index>(means.size()));
  m.scales = Eigen::Map<const Eigen::VectorXd>(
      scales.data(), static_cast<Eigen::Index>(scales.size()));
  m.eigenvalues = j.at("eigenvalues").get<std::vector<double>>();
  m.variance_covered = j.at("variance_covered").get<double>();

  const auto& comps = j.at("components");
  const Eigen::Index rows = static_cast<Eigen::Index>(comps.size());
  Eigen::Index cols = 0;
  for (Eigen::Index jj = 0; jj < m.scales.size(); ++jj)
    if (m.scales(jj) > 0.0) ++cols;
  m.components.resize(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto row = comps[static_cast<std::size_t>(r)].get<std::vector<double>>();
    require(static_cast<Eigen::Index>(row.size()) == cols, Errc::io,
            "component row length mismatch in PCA model");
    for (Eigen::Index c = 0; c < cols; ++c)
      m.components(r, c) = row[static_cast<std::size_t>(c)];
  }
  return m;
}

}  // namespace otkit
