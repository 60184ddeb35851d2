#include "cqg/model.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <json.hpp>

#include "json_util.hpp"

namespace cqg {

using nlohmann::json;
using detail::json_to_matrix;
using detail::matrix_to_json;
using detail::parse_document;

namespace {

constexpr double kHermTol = 1e-10;   // relative Hermiticity residual
constexpr double kPdTol = 1e-10;     // smallest pivot relative to trace
constexpr double kUnitBlockTol = 1e-12;

/// Uniform in [-1, 1] with a fixed, implementation-independent mapping.
double uniform_pm1(std::mt19937_64& rng) {
  const double u = (rng() >> 11) * 0x1.0p-53;  // [0, 1)
  return 2.0 * u - 1.0;
}

}  // namespace

// -- InstanceSpec --------------------------------------------------------------

InstanceSpec::InstanceSpec(std::vector<BlockSpec> blocks)
    : blocks_(std::move(blocks)) {
  std::stable_sort(blocks_.begin(), blocks_.end(),
                   [](const BlockSpec& a, const BlockSpec& b) {
                     return a.label < b.label;
                   });
  for (std::size_t i = 0; i < blocks_.size(); ++i)
    index_.emplace(blocks_[i].label, i);
}

const BlockSpec* InstanceSpec::find(const std::string& label) const {
  auto it = index_.find(label);
  return it == index_.end() ? nullptr : &blocks_[it->second];
}

const BlockSpec& InstanceSpec::at(const std::string& label) const {
  const BlockSpec* b = find(label);
  if (!b) throw ValidationError("unknown block label '" + label + "'");
  return *b;
}

std::vector<std::string> InstanceSpec::labels() const {
  std::vector<std::string> out;
  out.reserve(blocks_.size());
  for (const auto& b : blocks_) out.push_back(b.label);
  return out;
}

bool InstanceSpec::operator==(const InstanceSpec& other) const {
  if (blocks_.size() != other.blocks_.size()) return false;
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    const BlockSpec& a = blocks_[i];
    const BlockSpec& b = other.blocks_[i];
    if (a.label != b.label || a.dim != b.dim || a.dual != b.dual) return false;
    if (a.Q.rows() != b.Q.rows() || a.Q.cols() != b.Q.cols()) return false;
    if (a.Q != b.Q) return false;
  }
  return true;
}

// -- ConvElement ---------------------------------------------------------------

void ConvElement::set(const std::string& label, Matrix coeff) {
  if (coeff.size() == 0 || coeff.isZero(0.0)) {
    blocks_.erase(label);
    return;
  }
  blocks_[label] = std::move(coeff);
}

const Matrix* ConvElement::find(const std::string& label) const {
  auto it = blocks_.find(label);
  return it == blocks_.end() ? nullptr : &it->second;
}

std::set<std::string> ConvElement::support() const {
  std::set<std::string> out;
  for (const auto& [label, m] : blocks_) out.insert(label);
  return out;
}

bool ConvElement::operator==(const ConvElement& other) const {
  if (blocks_.size() != other.blocks_.size()) return false;
  for (const auto& [label, m] : blocks_) {
    const Matrix* o = other.find(label);
    if (!o || o->rows() != m.rows() || o->cols() != m.cols()) return false;
    if (*o != m) return false;
  }
  return true;
}

// -- file formats --------------------------------------------------------------

InstanceSpec parse_instance(const std::string& text) {
  json doc = parse_document(text, "cqg-instance/1");
  if (!doc.contains("blocks") || !doc["blocks"].is_array())
    throw ParseError("instance document needs a \"blocks\" array");
  std::vector<BlockSpec> blocks;
  for (const auto& jb : doc["blocks"]) {
    if (!jb.is_object()) throw ParseError("block entries must be objects");
    BlockSpec b;
    if (!jb.contains("label") || !jb["label"].is_string())
      throw ParseError("block needs a string \"label\"");
    b.label = jb["label"].get<std::string>();
    if (!jb.contains("dim") || !jb["dim"].is_number_integer())
      throw ParseError("block '" + b.label + "' needs an integer \"dim\"");
    b.dim = jb["dim"].get<int>();
    if (!jb.contains("dual") || !jb["dual"].is_string())
      throw ParseError("block '" + b.label + "' needs a string \"dual\"");
    b.dual = jb["dual"].get<std::string>();
    if (!jb.contains("Q"))
      throw ParseError("block '" + b.label + "' needs a \"Q\" matrix");
    b.Q = json_to_matrix(jb["Q"], "block '" + b.label + "' Q");
    blocks.push_back(std::move(b));
  }
  return InstanceSpec(std::move(blocks));
}

InstanceSpec load_instance(const std::string& text) {
  InstanceSpec spec = parse_instance(text);
  Report verdict = validate_instance(spec);
  if (!verdict.passed()) {
    const CheckItem* f = verdict.first_failure();
    throw ValidationError("invalid instance: " + (f ? f->name : "unknown"));
  }
  return spec;
}

std::string save_instance(const InstanceSpec& spec) {
  json blocks = json::array();
  for (const auto& b : spec.blocks()) {
    blocks.push_back({{"label", b.label},
                      {"dim", b.dim},
                      {"dual", b.dual},
                      {"Q", matrix_to_json(b.Q)}});
  }
  json doc = {{"format", "cqg-instance/1"}, {"blocks", blocks}};
  return doc.dump(2) + "\n";
}

ConvElement parse_element(const std::string& text) {
  json doc = parse_document(text, "cqg-element/1");
  if (!doc.contains("blocks") || !doc["blocks"].is_object())
    throw ParseError("element document needs a \"blocks\" object");
  ConvElement f;
  for (const auto& [label, jm] : doc["blocks"].items())
    f.set(label, json_to_matrix(jm, "element block '" + label + "'"));
  return f;
}

ConvElement load_element(const std::string& text, const InstanceSpec& spec) {
  ConvElement f = parse_element(text);
  require_member(spec, f);
  return f;
}

std::string save_element(const ConvElement& f) {
  json blocks = json::object();
  for (const auto& [label, m] : f.blocks()) blocks[label] = matrix_to_json(m);
  json doc = {{"format", "cqg-element/1"}, {"blocks", blocks}};
  return doc.dump(2) + "\n";
}

// -- operations ----------------------------------------------------------------

Report validate_instance(const InstanceSpec& spec) {
  Report report("instance validation");

  std::size_t duplicates = 0;
  for (std::size_t i = 1; i < spec.blocks().size(); ++i)
    if (spec.blocks()[i - 1].label == spec.blocks()[i].label) ++duplicates;
  report.require("labels unique", duplicates == 0,
                 static_cast<double>(duplicates), 0.0);

  const BlockSpec* zero = spec.find("0");
  report.require("block '0' present", zero != nullptr);
  if (zero) {
    const bool shape_ok = zero->dim == 1 && zero->Q.rows() == 1 &&
                          zero->Q.cols() == 1;
    const double dev = shape_ok ? std::abs(zero->Q(0, 0) - Complex(1.0, 0.0))
                                : 1.0;
    report.require("block '0' is the unit block (dim 1, Q = (1))",
                   shape_ok && dev <= kUnitBlockTol, dev, kUnitBlockTol);
  }

  for (const auto& b : spec.blocks()) {
    const std::string tag = "block '" + b.label + "': ";

    const bool shape_ok =
        b.dim >= 1 && b.Q.rows() == b.dim && b.Q.cols() == b.dim;
    report.require(tag + "Q is dim x dim", shape_ok,
                   static_cast<double>(b.Q.rows() * b.Q.cols()),
                   static_cast<double>(b.dim * b.dim));
    if (!shape_ok) continue;

    const double scale = std::max(1.0, max_abs(b.Q));
    const double herm = max_abs(Matrix(b.Q - b.Q.adjoint())) / scale;
    report.require_leq(tag + "hermiticity residual", herm, kHermTol);

    const Complex tr = b.Q.trace();
    const double tr_imag = std::abs(tr.imag()) / std::max(1.0, std::abs(tr));
    report.require_leq(tag + "trace imaginary part", tr_imag, kHermTol);
    report.require_gt(tag + "trace positive", tr.real(), 0.0);

    Matrix herm_q = 0.5 * (b.Q + b.Q.adjoint());
    Eigen::LDLT<Matrix> ldlt(herm_q);
    const double min_pivot =
        ldlt.vectorD().size() ? ldlt.vectorD().real().minCoeff() : 0.0;
    const double pivot_floor = kPdTol * std::max(tr.real(), 0.0);
    report.require_gt(tag + "smallest Cholesky pivot", min_pivot, pivot_floor);

    const BlockSpec* dual = spec.find(b.dual);
    report.require(tag + "dual label exists", dual != nullptr);
    if (dual) {
      report.require(tag + "dual is involutive", dual->dual == b.label);
      report.require(tag + "dual dimension matches",
                     dual->dim == b.dim, dual->dim, b.dim);
    }
    if (b.label == "0")
      report.require(tag + "self-dual unit block", b.dual == "0");
  }
  return report;
}

void require_member(const InstanceSpec& spec, const ConvElement& f) {
  for (const auto& [label, m] : f.blocks()) {
    const BlockSpec* b = spec.find(label);
    if (!b)
      throw ValidationError("element names unknown block '" + label + "'");
    if (m.rows() != b->dim || m.cols() != b->dim)
      throw ValidationError("element block '" + label +
                            "' has wrong dimensions");
  }
}

ConvElement project(const ConvElement& f, const TruncationWindow& K) {
  ConvElement out;
  for (const auto& [label, m] : f.blocks())
    if (K.count(label)) out.set(label, m);
  return out;
}

ConvElement axpy(Complex a, const ConvElement& f, Complex b,
                 const ConvElement& g) {
  ConvElement out;
  std::set<std::string> labels = f.support();
  for (const auto& l : g.support()) labels.insert(l);
  for (const auto& label : labels) {
    const Matrix* mf = f.find(label);
    const Matrix* mg = g.find(label);
    if (mf && mg) {
      if (mf->rows() != mg->rows() || mf->cols() != mg->cols())
        throw ValidationError("element block '" + label +
                              "' has mismatched dimensions");
      out.set(label, a * (*mf) + b * (*mg));
    } else if (mf) {
      out.set(label, a * (*mf));
    } else {
      out.set(label, b * (*mg));
    }
  }
  return out;
}

ConvElement add(const ConvElement& f, const ConvElement& g) {
  return axpy(1.0, f, 1.0, g);
}

ConvElement sub(const ConvElement& f, const ConvElement& g) {
  return axpy(1.0, f, -1.0, g);
}

ConvElement scale(Complex a, const ConvElement& f) {
  ConvElement out;
  for (const auto& [label, m] : f.blocks()) out.set(label, a * m);
  return out;
}

ConvElement random_element(const InstanceSpec& spec, const TruncationWindow& K,
                           std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  ConvElement out;
  for (const auto& label : K) {  // std::set iterates in lexicographic order
    const BlockSpec& b = spec.at(label);
    Matrix m(b.dim, b.dim);
    for (int r = 0; r < b.dim; ++r)
      for (int c = 0; c < b.dim; ++c) {
        const double re = uniform_pm1(rng);
        const double im = uniform_pm1(rng);
        m(r, c) = Complex(re, im);
      }
    out.set(label, std::move(m));
  }
  return out;
}

double max_entry_distance(const ConvElement& f, const ConvElement& g) {
  double worst = 0.0;
  std::set<std::string> labels = f.support();
  for (const auto& l : g.support()) labels.insert(l);
  for (const auto& label : labels) {
    const Matrix* mf = f.find(label);
    const Matrix* mg = g.find(label);
    if (mf && mg) {
      if (mf->rows() != mg->rows() || mf->cols() != mg->cols())
        throw ValidationError("element block '" + label +
                              "' has mismatched dimensions");
      worst = std::max(worst, max_abs(Matrix(*mf - *mg)));
    } else {
      worst = std::max(worst, max_abs(mf ? *mf : *mg));
    }
  }
  return worst;
}

TruncationWindow full_window(const InstanceSpec& spec) {
  TruncationWindow K;
  for (const auto& b : spec.blocks()) K.insert(b.label);
  return K;
}

bool strictly_increasing(const Filtration& chain) {
  for (std::size_t i = 1; i < chain.size(); ++i) {
    const TruncationWindow& prev = chain[i - 1];
    const TruncationWindow& next = chain[i];
    if (prev.size() >= next.size()) return false;
    if (!std::includes(next.begin(), next.end(), prev.begin(), prev.end()))
      return false;
  }
  return true;
}

}  // namespace cqg
