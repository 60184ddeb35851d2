#include "cqg/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cqg/analysis.hpp"
#include "cqg/conv.hpp"
#include "cqg/group.hpp"
#include "cqg/hopf.hpp"
#include "cqg/model.hpp"
#include "cqg/suites.hpp"
#include "json_util.hpp"

namespace cqg {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6e", v);
  return buf;
}

void emit(const std::string& text, const std::string& out_path,
          std::ostream& out) {
  if (out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(out_path, std::ios::binary);
  if (!file) throw ParseError("cannot write file: " + out_path);
  file << text;
}

Report report_from_json(const nlohmann::json& doc) {
  Report report(doc.value("title", std::string()));
  if (!doc.contains("checks") || !doc["checks"].is_array())
    throw ParseError("stored report has no checks");
  for (const auto& item : doc["checks"]) {
    if (!item.contains("name") || !item.contains("pass"))
      throw ParseError("stored report entry is malformed");
    report.require(item["name"].get<std::string>(), item["pass"].get<bool>(),
                   item.value("value", 0.0), item.value("threshold", 0.0));
  }
  return report;
}

FiniteGroup resolve_group(const std::string& name_or_path) {
  const auto names = builtin_group_names();
  if (std::find(names.begin(), names.end(), name_or_path) != names.end())
    return builtin_group(name_or_path);
  return load_group(detail::read_text_file(name_or_path));
}

int finish_report(const Report& report, bool as_json, std::ostream& out) {
  if (as_json)
    out << report.to_json().dump(2) << "\n";
  else
    report.print(out);
  return report.passed() ? 0 : 1;
}

int run_validate(const std::string& file, const std::string& instance_path,
                 bool as_json, std::ostream& out) {
  const std::string text = detail::read_text_file(file);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  const std::string format = doc.value("format", std::string());

  Report report;
  if (format == "cqg-instance/1") {
    report = validate_instance(parse_instance(text));
  } else if (format == "cqg-hopf/1") {
    report = validate_hopf(parse_hopf(text));
  } else if (format == "cqg-group/1") {
    const FiniteGroup fg = parse_group(text);
    report = validate_group(fg.table);
    report.append(validate_irreps(fg));
  } else if (format == "cqg-element/1") {
    const ConvElement f = parse_element(text);
    report = Report("element document");
    report.require("document parses", true);
    if (!instance_path.empty()) {
      const InstanceSpec spec =
          load_instance(detail::read_text_file(instance_path));
      bool member = true;
      try {
        require_member(spec, f);
      } catch (const ValidationError&) {
        member = false;
      }
      report.require("blocks match the catalogue", member);
    }
  } else {
    throw ParseError("unknown document format: " +
                     (format.empty() ? "(missing)" : format));
  }
  return finish_report(report, as_json, out);
}

int run_conv(const std::string& instance_path, const std::string& left_path,
             const std::string& right_path, const std::string& out_path,
             std::ostream& out) {
  const InstanceSpec spec =
      load_instance(detail::read_text_file(instance_path));
  const ConvElement left =
      load_element(detail::read_text_file(left_path), spec);
  const ConvElement right =
      load_element(detail::read_text_file(right_path), spec);
  emit(save_element(convolve(spec, left, right)), out_path, out);
  return 0;
}

int run_norm(const std::string& instance_path, const std::string& element_path,
             bool as_json, std::ostream& out) {
  const InstanceSpec spec =
      load_instance(detail::read_text_file(instance_path));
  const ConvElement f = load_element(detail::read_text_file(element_path), spec);
  const double l2 = l2_norm(spec, f);
  const double cstar = cstar_norm(spec, f);
  if (as_json) {
    nlohmann::json blocks = nlohmann::json::object();
    for (const auto& [label, coeff] : f.blocks()) {
      (void)coeff;
      blocks[label] = operator_norm(represent(spec, f, label));
    }
    nlohmann::json doc = {{"format", "cqg-norms/1"},
                          {"l2", l2},
                          {"cstar", cstar},
                          {"blocks", std::move(blocks)}};
    out << doc.dump(2) << "\n";
  } else {
    out << "l2     " << fmt_double(l2) << "\n";
    out << "cstar  " << fmt_double(cstar) << "\n";
  }
  return 0;
}

int run_fourier(const std::string& group_name, const std::string& input_path,
                bool inverse, const std::string& out_path, std::ostream& out) {
  const FiniteGroup fg = resolve_group(group_name);
  const std::string text = detail::read_text_file(input_path);
  if (inverse) {
    const ConvElement coeffs = load_element(text, instance_from_group(fg));
    emit(save_function(inverse_fourier(fg, coeffs)), out_path, out);
  } else {
    const Vector f = parse_function(text);
    if (f.size() != fg.table.size())
      throw ValidationError("function length does not match the group order");
    emit(save_element(fourier(fg, f)), out_path, out);
  }
  return 0;
}

int run_unit(const std::string& instance_path,
             const std::vector<std::string>& window_labels,
             const std::string& out_path, std::ostream& out) {
  const InstanceSpec spec =
      load_instance(detail::read_text_file(instance_path));
  TruncationWindow window;
  if (window_labels.empty())
    window = full_window(spec);
  else
    window.insert(window_labels.begin(), window_labels.end());
  emit(save_element(approximate_unit(spec, window)), out_path, out);
  return 0;
}

int run_check(const SuiteConfig& config, const std::string& suite,
              const std::string& state_path, bool as_json, std::ostream& out) {
  const Report report = run_suite(suite, config);
  const nlohmann::json state = {
      {"format", "cqg-check/1"},
      {"suite", suite},
      {"seed", config.seed},
      {"samples", config.samples},
      {"tol", config.tol},
      {"groups", config.groups},
      {"instances", config.instance_files},
      {"passed", report.passed()},
      {"report", report.to_json()},
  };
  std::ofstream file(state_path, std::ios::binary);
  if (!file) throw ParseError("cannot write state file: " + state_path);
  file << state.dump(2) << "\n";
  return finish_report(report, as_json, out);
}

int run_report(const std::string& state_path, bool as_json, std::ostream& out) {
  const nlohmann::json state =
      detail::parse_document(detail::read_text_file(state_path),
                             "cqg-check/1");
  if (as_json) {
    out << state.dump(2) << "\n";
  } else {
    out << "suite " << state.value("suite", std::string("?"))
        << "  seed=" << state.value("seed", std::uint64_t{0})
        << "  samples=" << state.value("samples", 0)
        << "  tol=" << fmt_double(state.value("tol", 0.0)) << "\n";
    if (!state.contains("report"))
      throw ParseError("state file has no stored report");
    report_from_json(state["report"]).print(out);
  }
  return state.value("passed", false) ? 0 : 1;
}

}  // namespace

int dispatch(std::vector<std::string> args, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"block convolution algebra toolkit", "cqg"};
  app.require_subcommand(1);

  auto* validate_cmd = app.add_subcommand(
      "validate", "Check a document against its structural axioms");
  std::string validate_file, validate_instance_path;
  bool validate_json = false;
  validate_cmd
      ->add_option("file", validate_file,
                   "instance, element, group, or hopf document")
      ->required();
  validate_cmd->add_option("--instance", validate_instance_path,
                           "catalogue an element document must belong to");
  validate_cmd->add_flag("--json", validate_json, "emit the verdict as JSON");

  auto* conv_cmd =
      app.add_subcommand("conv", "Convolution product of two elements");
  std::string conv_instance, conv_left, conv_right, conv_out;
  conv_cmd->add_option("instance", conv_instance, "block catalogue")
      ->required();
  conv_cmd->add_option("left", conv_left, "left factor")->required();
  conv_cmd->add_option("right", conv_right, "right factor")->required();
  conv_cmd->add_option("--out", conv_out, "write the result here");

  auto* norm_cmd =
      app.add_subcommand("norm", "L2 and operator norms of an element");
  std::string norm_instance, norm_element;
  bool norm_json = false;
  norm_cmd->add_option("instance", norm_instance, "block catalogue")
      ->required();
  norm_cmd->add_option("element", norm_element, "element document")
      ->required();
  norm_cmd->add_flag("--json", norm_json, "emit per-block detail as JSON");

  auto* fourier_cmd = app.add_subcommand(
      "fourier", "Matrix coefficients of a function on a finite group");
  std::string fourier_group, fourier_input, fourier_out;
  bool fourier_inverse = false;
  fourier_cmd->add_option("input", fourier_input, "function document")
      ->required();
  fourier_cmd
      ->add_option("--group", fourier_group,
                   "built-in group name or group document path")
      ->required();
  fourier_cmd->add_flag("--inverse", fourier_inverse,
                        "element document in, function out");
  fourier_cmd->add_option("--out", fourier_out, "write the result here");

  auto* unit_cmd =
      app.add_subcommand("unit", "Approximate unit supported on a window");
  std::string unit_instance, unit_out;
  std::vector<std::string> unit_window;
  unit_cmd->add_option("instance", unit_instance, "block catalogue")
      ->required();
  unit_cmd
      ->add_option("--window", unit_window,
                   "comma-separated block labels (default: all)")
      ->delimiter(',');
  unit_cmd->add_option("--out", unit_out, "write the result here");

  auto* check_cmd =
      app.add_subcommand("check", "Run verification suites and persist the verdict");
  SuiteConfig config;
  std::string check_suite = "all";
  std::string check_state = "cqg-last-check.json";
  std::vector<std::string> check_groups;
  bool check_json = false;
  check_cmd->add_option("--suite", check_suite, "core, hopf, norms, oracle, or all")
      ->check(CLI::IsMember({"all", "core", "hopf", "norms", "oracle"}));
  check_cmd->add_option("--seed", config.seed, "master seed for sampled checks");
  check_cmd->add_option("--samples", config.samples, "random samples per check")
      ->check(CLI::PositiveNumber);
  check_cmd->add_option("--tol", config.tol, "threshold for sampled checks")
      ->check(CLI::PositiveNumber);
  check_cmd->add_option("--group", check_groups,
                        "built-in groups to test (repeatable)");
  check_cmd->add_option("--instance", config.instance_files,
                        "extra instance documents to test (repeatable)");
  check_cmd->add_option("--state", check_state, "where to persist the verdict");
  check_cmd->add_flag("--json", check_json, "emit the verdict as JSON");

  auto* report_cmd =
      app.add_subcommand("report", "Re-print the last persisted check verdict");
  std::string report_state = "cqg-last-check.json";
  bool report_json = false;
  report_cmd->add_option("--state", report_state, "state file to read");
  report_cmd->add_flag("--json", report_json, "emit the stored verdict as JSON");

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    const auto chosen = app.get_subcommands();
    out << (chosen.empty() ? app.help() : chosen.front()->help());
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (app.got_subcommand(validate_cmd))
      return run_validate(validate_file, validate_instance_path,
                          validate_json, out);
    if (app.got_subcommand(conv_cmd))
      return run_conv(conv_instance, conv_left, conv_right, conv_out, out);
    if (app.got_subcommand(norm_cmd))
      return run_norm(norm_instance, norm_element, norm_json, out);
    if (app.got_subcommand(fourier_cmd))
      return run_fourier(fourier_group, fourier_input, fourier_inverse,
                         fourier_out, out);
    if (app.got_subcommand(unit_cmd))
      return run_unit(unit_instance, unit_window, unit_out, out);
    if (app.got_subcommand(check_cmd)) {
      if (!check_groups.empty()) config.groups = check_groups;
      return run_check(config, check_suite, check_state, check_json, out);
    }
    if (app.got_subcommand(report_cmd))
      return run_report(report_state, report_json, out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace cqg
