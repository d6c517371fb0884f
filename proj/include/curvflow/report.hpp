#pragma once

#include <optional>
#include <string>
#include <vector>

namespace curvflow {

/// How a check compares computed against target.
enum class CheckKind {
  Abs,         ///< |computed - target| <= tolerance
  Rel,         ///< |computed - target| <= tolerance * |target|
  LowerBound,  ///< computed >= target - tolerance
  UpperBound,  ///< computed <= target + tolerance
};

std::string to_string(CheckKind k);

struct Check {
  std::string name;
  std::string anchor;  ///< the identity or condition being checked
  double computed = 0.0;
  double target = 0.0;
  double tolerance = 0.0;
  CheckKind kind = CheckKind::Abs;
  bool pass = false;
  std::optional<double> location;  ///< curve parameter where the value was attained
};

bool evaluate_check(double computed, double target, double tolerance, CheckKind kind);

/// Named pass/fail checks shared by construction certificates and the
/// diagnostics suite.
class DiagnosticReport {
 public:
  const Check& add(std::string name, std::string anchor, double computed, double target, double tolerance,
                   CheckKind kind, std::optional<double> location = std::nullopt);
  /// Append every check of another report, prefixing the names.
  void merge(const DiagnosticReport& other, const std::string& prefix);

  const std::vector<Check>& checks() const { return checks_; }
  const Check* find(const std::string& name) const;
  bool passed() const;

 private:
  std::vector<Check> checks_;
};

}  // namespace curvflow
