#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cqg/model.hpp"
#include "cqg/report.hpp"

namespace cqg {

struct SuiteConfig {
  std::uint64_t seed = 7041;
  int samples = 6;
  /// Threshold for the sampled (randomized) checks; exact structural
  /// identities keep their built-in tolerances.
  double tol = 1e-10;
  std::vector<std::string> groups = {"s3", "z6"};
  std::vector<std::string> instance_files;
};

/// Handcrafted block catalogue with non-scalar reflection matrices; q > 1
/// tunes the eigenvalue spread of the deformed dual pair.
InstanceSpec synthetic_instance(double q);

/// core, hopf, norms, oracle.
std::vector<std::string> suite_names();

/// Runs one named suite, or every suite for name "all".
Report run_suite(const std::string& name, const SuiteConfig& config);

/// Algebra laws of the block convolution product on random elements.
Report suite_core(const SuiteConfig& config);
/// Cross-validation of every closed-form block formula against the
/// structure-constant engine on finite group function algebras.
Report suite_oracle(const SuiteConfig& config);
/// Norm inequalities, unit norms, Plancherel, regular-representation norms.
Report suite_norms(const SuiteConfig& config);
/// Axioms, dual coproduct, truncated antipode, induced coactions.
Report suite_hopf(const SuiteConfig& config);

}  // namespace cqg
