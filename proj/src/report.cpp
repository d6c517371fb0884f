#include "curvflow/report.hpp"

#include <algorithm>
#include <cmath>

namespace curvflow {

std::string to_string(CheckKind k) {
  switch (k) {
    case CheckKind::Abs: return "abs";
    case CheckKind::Rel: return "rel";
    case CheckKind::LowerBound: return "lower_bound";
    case CheckKind::UpperBound: return "upper_bound";
  }
  return "?";
}

bool evaluate_check(double computed, double target, double tolerance, CheckKind kind) {
  if (!std::isfinite(computed)) return false;
  switch (kind) {
    case CheckKind::Abs: return std::abs(computed - target) <= tolerance;
    case CheckKind::Rel: return std::abs(computed - target) <= tolerance * std::abs(target);
    case CheckKind::LowerBound: return computed >= target - tolerance;
    case CheckKind::UpperBound: return computed <= target + tolerance;
  }
  return false;
}

const Check& DiagnosticReport::add(std::string name, std::string anchor, double computed, double target,
                                   double tolerance, CheckKind kind, std::optional<double> location) {
  Check c{std::move(name), std::move(anchor), computed, target, tolerance, kind, false, location};
  c.pass = evaluate_check(computed, target, tolerance, kind);
  checks_.push_back(std::move(c));
  return checks_.back();
}

void DiagnosticReport::merge(const DiagnosticReport& other, const std::string& prefix) {
  for (Check c : other.checks_) {
    c.name = prefix + c.name;
    checks_.push_back(std::move(c));
  }
}

const Check* DiagnosticReport::find(const std::string& name) const {
  auto it = std::find_if(checks_.begin(), checks_.end(), [&](const Check& c) { return c.name == name; });
  return it == checks_.end() ? nullptr : &*it;
}

bool DiagnosticReport::passed() const {
  return std::all_of(checks_.begin(), checks_.end(), [](const Check& c) { return c.pass; });
}

}  // namespace curvflow
