#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ctx/types.hpp"

namespace ctx {

struct CheckResult {
  bool passed = false;
  double residual = 0;  // worst deviation observed, when meaningful
  std::string detail;
};

struct Check {
  std::string module;  // core-algebra | measurement | contextuality | optimizer
  std::string name;
  std::function<CheckResult(const Tolerances&)> run;
};

/// The full invariant suite behind `ctx verify`. Optimizer searches are
/// included only when with_optimizer is set (they dominate the runtime).
std::vector<Check> verification_suite(bool with_optimizer);

}  // namespace ctx
