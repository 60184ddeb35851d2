#include "cqg/report.hpp"

#include <cstdio>
#include <ostream>

namespace cqg {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6e", v);
  return buf;
}

}  // namespace

void Report::append(const Report& other) {
  for (const auto& item : other.items_) {
    std::string name = other.title_.empty() ? item.name
                                            : other.title_ + ": " + item.name;
    items_.push_back({std::move(name), item.value, item.threshold, item.pass});
  }
}

bool Report::passed() const {
  for (const auto& item : items_)
    if (!item.pass) return false;
  return true;
}

const CheckItem* Report::first_failure() const {
  for (const auto& item : items_)
    if (!item.pass) return &item;
  return nullptr;
}

void Report::print(std::ostream& out) const {
  if (!title_.empty()) out << "# " << title_ << "\n";
  for (const auto& item : items_) {
    out << (item.pass ? "PASS" : "FAIL") << "  " << item.name << "  value="
        << fmt_double(item.value) << "  threshold=" << fmt_double(item.threshold)
        << "\n";
  }
  out << (passed() ? "OK" : "FAILED") << "  (" << items_.size() << " checks)\n";
}

nlohmann::json Report::to_json() const {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& item : items_) {
    checks.push_back({{"name", item.name},
                      {"value", item.value},
                      {"threshold", item.threshold},
                      {"pass", item.pass}});
  }
  return {{"title", title_}, {"checks", checks}, {"passed", passed()}};
}

}  // namespace cqg
