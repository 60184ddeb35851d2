#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cqg/report.hpp"
#include "cqg/types.hpp"

namespace cqg {

/// One matrix block of the convolution algebra: a label, the block dimension,
/// the positive-definite weight matrix Q and the label of the dual block.
struct BlockSpec {
  std::string label;
  int dim = 0;
  Matrix Q;
  std::string dual;
};

/// Immutable catalogue of blocks, sorted by label. Construction never rejects
/// data; run validate_instance to obtain the structured verdict.
class InstanceSpec {
 public:
  InstanceSpec() = default;
  explicit InstanceSpec(std::vector<BlockSpec> blocks);

  const std::vector<BlockSpec>& blocks() const { return blocks_; }
  const BlockSpec* find(const std::string& label) const;
  const BlockSpec& at(const std::string& label) const;
  bool has(const std::string& label) const { return find(label) != nullptr; }
  std::size_t size() const { return blocks_.size(); }

  std::vector<std::string> labels() const;

  bool operator==(const InstanceSpec& other) const;

 private:
  std::vector<BlockSpec> blocks_;  // sorted by label
  std::map<std::string, std::size_t> index_;
};

/// Finitely supported element of the block algebra: label -> coefficient
/// matrix. All-zero blocks are dropped so equal elements compare equal.
class ConvElement {
 public:
  ConvElement() = default;

  void set(const std::string& label, Matrix coeff);
  const Matrix* find(const std::string& label) const;
  const std::map<std::string, Matrix>& blocks() const { return blocks_; }
  std::set<std::string> support() const;
  bool empty() const { return blocks_.empty(); }

  bool operator==(const ConvElement& other) const;

 private:
  std::map<std::string, Matrix> blocks_;
};

/// Finite set of block labels used to truncate elements; always contains "0".
using TruncationWindow = std::set<std::string>;

/// Strictly increasing chain of truncation windows.
using Filtration = std::vector<TruncationWindow>;

/// Vector in the simple module attached to one block.
struct ModuleVector {
  std::string label;
  Vector coords;
};

// -- file formats ------------------------------------------------------------

InstanceSpec load_instance(const std::string& text);
/// Parses without validating; used to report residuals for bad documents.
InstanceSpec parse_instance(const std::string& text);
std::string save_instance(const InstanceSpec& spec);

ConvElement load_element(const std::string& text, const InstanceSpec& spec);
ConvElement parse_element(const std::string& text);
std::string save_element(const ConvElement& f);

// -- operations --------------------------------------------------------------

/// Full structural verdict: block "0", Hermitian positive-definite Q with
/// positive real trace, and involutive dual bookkeeping.
Report validate_instance(const InstanceSpec& spec);

/// Checks that every block of f names a block of spec with matching dims.
void require_member(const InstanceSpec& spec, const ConvElement& f);

/// Restriction to a window: blocks outside K are dropped.
ConvElement project(const ConvElement& f, const TruncationWindow& K);

/// Componentwise linear combination a*f + b*g.
ConvElement axpy(Complex a, const ConvElement& f, Complex b,
                 const ConvElement& g);
ConvElement add(const ConvElement& f, const ConvElement& g);
ConvElement sub(const ConvElement& f, const ConvElement& g);
ConvElement scale(Complex a, const ConvElement& f);

/// Deterministic pseudo-random element supported on exactly the labels of K,
/// entries with real and imaginary parts uniform in [-1, 1].
ConvElement random_element(const InstanceSpec& spec, const TruncationWindow& K,
                           std::uint64_t seed);

/// Largest absolute entry difference across the union of supports.
double max_entry_distance(const ConvElement& f, const ConvElement& g);

/// Window helpers.
bool strictly_increasing(const Filtration& chain);
TruncationWindow full_window(const InstanceSpec& spec);

}  // namespace cqg
