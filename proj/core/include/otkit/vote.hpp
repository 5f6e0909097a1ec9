#pragma once

#include <map>
#include <string>
#include <vector>

#include "otkit/corpus.hpp"
#include "otkit/features.hpp"

// Majority voting across feature schemes.
//
// Each feature scheme acts as an independent judge: its own vocabulary,
// PCA, clustering and labeling.  The judges' per-chunk verdicts are fused
// by simple majority; an odd judge count is required so no tie rule can
// smuggle in a bias.

namespace otkit {

struct JudgeVerdict {
  Scheme scheme = Scheme::FW;
  std::map<std::string, Label> labels;  // chunk id -> predicted label
};

// Majority label per chunk.  Requires an odd number of judges and identical
// chunk-id sets across all of them.
std::map<std::string, Label> vote(const std::vector<JudgeVerdict>& judges);

}  // namespace otkit
