#include <doctest.h>

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "otkit/error.hpp"
#include "otkit/vote.hpp"

using namespace otkit;

namespace {

JudgeVerdict verdict(Scheme scheme, std::map<std::string, Label> labels) {
  JudgeVerdict v;
  v.scheme = scheme;
  v.labels = std::move(labels);
  return v;
}

}  // namespace

TEST_SUITE("vote") {

TEST_CASE("majority wins across judges") {
  const auto out = vote({
      verdict(Scheme::FW, {{"c", Label::O}}),
      verdict(Scheme::CHAR3, {{"c", Label::O}}),
      verdict(Scheme::POS3, {{"c", Label::T}}),
  });
  CHECK(out.at("c") == Label::O);

  const auto five = vote({
      verdict(Scheme::FW, {{"c", Label::O}}),
      verdict(Scheme::CHAR3, {{"c", Label::O}}),
      verdict(Scheme::POS3, {{"c", Label::T}}),
      verdict(Scheme::CFW, {{"c", Label::T}}),
      verdict(Scheme::COH, {{"c", Label::O}}),
  });
  CHECK(five.at("c") == Label::O);
}

TEST_CASE("voting is idempotent on agreement and identity for one judge") {
  const std::map<std::string, Label> labels{{"a", Label::T}, {"b", Label::O}};
  const auto unanimous = vote({
      verdict(Scheme::FW, labels),
      verdict(Scheme::CHAR3, labels),
      verdict(Scheme::COH, labels),
  });
  CHECK(unanimous == labels);

  const auto single = vote({verdict(Scheme::FW, labels)});
  CHECK(single == labels);
}

TEST_CASE("voting is invariant under judge permutation") {
  std::vector<JudgeVerdict> judges = {
      verdict(Scheme::FW, {{"a", Label::O}, {"b", Label::T}}),
      verdict(Scheme::CHAR3, {{"a", Label::T}, {"b", Label::T}}),
      verdict(Scheme::POS3, {{"a", Label::O}, {"b", Label::O}}),
  };
  const auto base = vote(judges);
  std::sort(judges.begin(), judges.end(),
            [](const JudgeVerdict& x, const JudgeVerdict& y) {
              return static_cast<int>(x.scheme) > static_cast<int>(y.scheme);
            });
  CHECK(vote(judges) == base);
  CHECK(base.at("a") == Label::O);
  CHECK(base.at("b") == Label::T);
}

TEST_CASE("even panels and mismatched chunk sets are rejected") {
  CHECK_THROWS_AS(vote({
                      verdict(Scheme::FW, {{"c", Label::O}}),
                      verdict(Scheme::CHAR3, {{"c", Label::T}}),
                  }),
                  Error);
  CHECK_THROWS_AS(vote({}), Error);
  CHECK_THROWS_AS(vote({
                      verdict(Scheme::FW, {{"c", Label::O}}),
                      verdict(Scheme::CHAR3, {{"c", Label::O}}),
                      verdict(Scheme::POS3, {{"d", Label::O}}),
                  }),
                  Error);
}

}  // TEST_SUITE
