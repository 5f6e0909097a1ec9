#pragma once

#include <stdexcept>
#include <string>

namespace otkit {

// Coarse failure categories.  Callers that want to distinguish "bad input
// data" from "bad configuration" can switch on code(); everyone else just
// sees a runtime_error with a readable message.
enum class Errc {
  config,             // invalid parameter or option combination
  io,                 // file missing, unparsable, or unwritable
  missing_annotation, // operation needs tokens/pos/labels the data lacks
  balance,            // class-ratio constraint cannot be met
  empty_vocabulary,   // no terms survived vocabulary construction
  degenerate_data,    // input carries no usable signal (e.g. all-constant)
  dim_mismatch,       // matrix/model dimensions disagree
  insufficient_data,  // fewer rows than the operation requires
  arity,              // wrong cluster/judge/domain count for the operation
  marker_selection,   // marker sets empty, overlapping, or unusable
  training,           // supervised training cannot proceed
  evaluation,         // gold annotations required for scoring are absent
  internal,           // invariant violation; indicates a bug, not bad input
};

const char* errc_name(Errc c) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) {
  throw Error(code, msg);
}

inline void require(bool ok, Errc code, const std::string& msg) {
  if (!ok) fail(code, msg);
}

inline const char* errc_name(Errc c) noexcept {
  switch (c) {
    case Errc::config: return "config error";
    case Errc::io: return "io error";
    case Errc::missing_annotation: return "missing annotation";
    case Errc::balance: return "balance error";
    case Errc::empty_vocabulary: return "empty vocabulary";
    case Errc::degenerate_data: return "degenerate data";
    case Errc::dim_mismatch: return "dimension mismatch";
    case Errc::insufficient_data: return "insufficient data";
    case Errc::arity: return "arity error";
    case Errc::marker_selection: return "marker selection error";
    case Errc::training: return "training error";
    case Errc::evaluation: return "evaluation error";
    case Errc::internal: return "internal error";
  }
  return "error";
}

}  // namespace otkit
