#pragma once

#include <string>

namespace localix {

/// Pass/fail outcome of a property check with the first violating witness
/// found under a deterministic iteration order.
struct Verdict {
  bool passed = true;
  std::string check;
  std::string anchor;
  std::string witness;

  explicit operator bool() const noexcept { return passed; }

  static Verdict pass(std::string check, std::string anchor) {
    return {true, std::move(check), std::move(anchor), {}};
  }
  static Verdict fail(std::string check, std::string anchor, std::string witness) {
    return {false, std::move(check), std::move(anchor), std::move(witness)};
  }
};

}  // namespace localix
