#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace cqg {

/// One verified property: a measured value against the threshold it must meet.
struct CheckItem {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

/// Ordered list of checks with a title; the unit all validators report in.
class Report {
 public:
  Report() = default;
  explicit Report(std::string title) : title_(std::move(title)) {}

  /// Records a residual-style check: passes iff value <= threshold.
  void require_leq(const std::string& name, double value, double threshold) {
    items_.push_back({name, value, threshold, value <= threshold});
  }

  /// Records a lower-bound check: passes iff value > threshold.
  void require_gt(const std::string& name, double value, double threshold) {
    items_.push_back({name, value, threshold, value > threshold});
  }

  /// Records an externally decided check, keeping the measured value around.
  void require(const std::string& name, bool pass, double value = 0.0,
               double threshold = 0.0) {
    items_.push_back({name, value, threshold, pass});
  }

  void append(const Report& other);

  bool passed() const;
  const std::string& title() const { return title_; }
  const std::vector<CheckItem>& items() const { return items_; }

  /// Worst offending item, or nullptr when everything passed.
  const CheckItem* first_failure() const;

  void print(std::ostream& out) const;
  nlohmann::json to_json() const;

 private:
  std::string title_;
  std::vector<CheckItem> items_;
};

}  // namespace cqg
