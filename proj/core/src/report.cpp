#include "otkit/report.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <string>

#include "otkit/error.hpp"
#include "otkit/io.hpp"

namespace otkit {

namespace {

nlohmann::json decision_to_json(const LabelDecision& d) {
  nlohmann::json j;
  j["d_o_c1"] = d.d_o_c1;
  j["d_t_c1"] = d.d_t_c1;
  j["d_o_c2"] = d.d_o_c2;
  j["d_t_c2"] = d.d_t_c2;
  j["alpha"] = d.alpha;
  j["cluster1"] = std::string(1, label_char(d.cluster1));
  j["cluster2"] = std::string(1, label_char(d.cluster2));
  return j;
}

nlohmann::json labels_to_json(const std::map<std::string, Label>& labels) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [id, l] : labels) j[id] = std::string(1, label_char(l));
  return j;
}

void csv_double(std::ofstream& out, double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  out.write(buf, p - buf);
}

// Pull every "config_hash" value out of an artifact, wherever it sits.
void collect_hashes(const nlohmann::json& j, std::set<std::string>& hashes) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      if (k == "config_hash" && v.is_string())
        hashes.insert(v.get<std::string>());
      else
        collect_hashes(v, hashes);
    }
  } else if (j.is_array()) {
    for (const auto& v : j) collect_hashes(v, hashes);
  }
}

}  // namespace

nlohmann::json judge_to_json(const JudgeResult& judge,
                             const std::vector<std::string>& chunk_ids) {
  nlohmann::json j;
  j["scheme"] = scheme_name(judge.scheme);
  j["weighting"] = weighting_name(judge.weighting);
  j["vocab_size"] = judge.vocab_size;
  j["pca_components"] = judge.pca_components;
  j["clustering"] = clustering_to_json(judge.run, chunk_ids);
  if (judge.majority_accuracy) j["majority_accuracy"] = *judge.majority_accuracy;
  if (!judge.labels.empty()) j["labels"] = labels_to_json(judge.labels);
  if (judge.ot_accuracy) j["ot_accuracy"] = *judge.ot_accuracy;
  if (judge.decision) j["decision"] = decision_to_json(*judge.decision);
  return j;
}

nlohmann::json pipeline_report_to_json(const PipelineReport& report) {
  nlohmann::json j;
  j["config"] = run_config_to_json(report.config);
  j["config_hash"] = report.hash;
  j["chunk_ids"] = report.chunk_ids;
  auto judges = nlohmann::json::array();
  for (const auto& judge : report.judges)
    judges.push_back(judge_to_json(judge, report.chunk_ids));
  j["judges"] = std::move(judges);
  if (!report.voted.empty()) j["voted"] = labels_to_json(report.voted);
  if (report.voted_ot_accuracy) j["voted_ot_accuracy"] = *report.voted_ot_accuracy;
  j["label_usage"] = report.label_usage;
  return j;
}

nlohmann::json curve_to_json(SweepAxis axis, const std::vector<CurvePoint>& curve) {
  nlohmann::json j;
  j["axis"] = sweep_axis_name(axis);
  auto points = nlohmann::json::array();
  for (const auto& p : curve) {
    nlohmann::json row;
    row["point"] = p.point;
    row["seeds"] = p.seeds;
    row["skipped"] = p.skipped;
    if (!p.skipped) {
      row["mean_accuracy"] = p.mean_accuracy;
      row["std"] = p.stddev;
    }
    points.push_back(std::move(row));
  }
  j["points"] = std::move(points);
  return j;
}

std::vector<CurvePoint> curve_from_json(const nlohmann::json& j, SweepAxis* axis) {
  if (axis) *axis = parse_sweep_axis(j.at("axis").get<std::string>());
  std::vector<CurvePoint> curve;
  for (const auto& row : j.at("points")) {
    CurvePoint p;
    p.point = row.at("point").get<std::size_t>();
    p.seeds = row.at("seeds").get<int>();
    p.skipped = row.at("skipped").get<bool>();
    if (!p.skipped) {
      p.mean_accuracy = row.at("mean_accuracy").get<double>();
      p.stddev = row.at("std").get<double>();
    }
    curve.push_back(p);
  }
  return curve;
}

void write_curve_csv(const std::filesystem::path& path,
                     const std::vector<CurvePoint>& curve) {
  std::ofstream out(path);
  require(out.good(), Errc::io, "cannot write curve '" + path.string() + "'");
  out << "point,mean_accuracy,std,seeds\n";
  for (const auto& p : curve) {
    out << p.point << ',';
    if (!p.skipped) {
      csv_double(out, p.mean_accuracy);
      out << ',';
      csv_double(out, p.stddev);
    } else {
      out << ',';  // both statistics blank marks the warning row
    }
    out << ',' << p.seeds << '\n';
  }
  out.flush();
  require(out.good(), Errc::io, "failed writing '" + path.string() + "'");
}

nlohmann::json merge_reports(const std::vector<std::filesystem::path>& inputs) {
  nlohmann::json merged;
  nlohmann::json artifacts = nlohmann::json::object();
  std::set<std::string> hashes;
  for (const auto& path : inputs) {
    nlohmann::json artifact = read_json_file(path);
    collect_hashes(artifact, hashes);
    std::string key = path.stem().string();
    // Two inputs may share a stem (same name in different directories);
    // suffix the later one rather than silently dropping it.
    while (artifacts.contains(key)) key += "+";
    artifacts[key] = std::move(artifact);
  }
  merged["artifacts"] = std::move(artifacts);
  merged["config_hashes"] = std::vector<std::string>(hashes.begin(), hashes.end());
  return merged;
}

}  // namespace otkit
