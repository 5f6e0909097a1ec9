#include "otkit/vote.hpp"

#include "otkit/error.hpp"

namespace otkit {

std::map<std::string, Label> vote(const std::vector<JudgeVerdict>& judges) {
  require(!judges.empty(), Errc::config, "no judges to vote over");
  require(judges.size() % 2 == 1, Errc::config,
          "voting needs an odd number of judges, got " +
              std::to_string(judges.size()));

  const auto& first = judges.front().labels;
  for (const auto& j : judges) {
    require(j.labels.size() == first.size(), Errc::evaluation,
            std::string("judge ") + scheme_name(j.scheme) +
                " labeled a different chunk set");
    for (const auto& [id, label] : j.labels) {
      (void)label;
      require(first.count(id) != 0, Errc::evaluation,
              std::string("judge ") + scheme_name(j.scheme) +
                  " labeled unknown chunk '" + id + "'");
    }
  }

  std::map<std::string, Label> result;
  for (const auto& [id, label] : first) {
    (void)label;
    std::size_t votes_o = 0;
    for (const auto& j : judges)
      if (j.labels.at(id) == Label::O) ++votes_o;
    result[id] = 2 * votes_o > judges.size() ? Label::O : Label::T;
  }
  return result;
}

}  // namespace otkit
