#pragma once

#include <filesystem>
#include <vector>

#include <json.hpp>

#include "otkit/pipeline.hpp"

// Report emission.
//
// Every run artifact has one canonical JSON form (sorted keys, trailing
// newline via write_json_file), so identical runs produce identical bytes
// and reproducibility checks can diff files.  Sweep curves additionally get
// a small CSV for external plotting.

namespace otkit {

nlohmann::json judge_to_json(const JudgeResult& judge,
                             const std::vector<std::string>& chunk_ids);

// The full single-corpus run report: config echo + hash, per-judge blocks,
// voted labels, and the gold-label usage audit.
nlohmann::json pipeline_report_to_json(const PipelineReport& report);

nlohmann::json curve_to_json(SweepAxis axis, const std::vector<CurvePoint>& curve);
std::vector<CurvePoint> curve_from_json(const nlohmann::json& j,
                                        SweepAxis* axis = nullptr);

// Fixed schema "point,mean_accuracy,std,seeds".  A skipped point keeps its
// row so a gap is visible: statistics empty, seeds 0.
void write_curve_csv(const std::filesystem::path& path,
                     const std::vector<CurvePoint>& curve);

// Collect previously written artifact JSON files into one document: each
// input appears under its file stem in "artifacts", and every config hash
// found inside is echoed in a top-level "config_hashes" list.
nlohmann::json merge_reports(const std::vector<std::filesystem::path>& inputs);

}  // namespace otkit
