#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "cqg/model.hpp"
#include "cqg/report.hpp"
#include "cqg/types.hpp"

namespace cqg {

/// Weighted L2 pairing: sum over blocks of tr(F Q G^dagger) / tr(Q).
Complex inner_product(const InstanceSpec& spec, const ConvElement& f,
                      const ConvElement& g);

double l2_norm(const InstanceSpec& spec, const ConvElement& f);

/// Largest singular value, via a cyclic Jacobi eigen-solve of M^dagger M run
/// to 1e-13 relative off-diagonal mass. Requires a square input.
double operator_norm(const Matrix& m);

/// All singular values of a square matrix, descending, same Jacobi kernel.
RealVector singular_values(const Matrix& m);

/// sigma_max / sigma_min; infinity when the smallest singular value is 0.
double condition_number(const Matrix& m);

/// Supremum over blocks of the represented operator norm.
double cstar_norm(const InstanceSpec& spec, const ConvElement& f);

/// (L2, C*) norms of the part of f outside the window K.
std::pair<double, double> truncation_tail(const InstanceSpec& spec,
                                          const ConvElement& f,
                                          const TruncationWindow& K);

struct NormSample {
  double l2_f = 0, l2_g = 0, cstar_f = 0, cstar_g = 0;
  double l2_fg = 0, cstar_fg = 0;
  double cstar_identity_lhs = 0, cstar_identity_rhs = 0;
  double slack_l2_submult = 0;      // ||f||_2 ||g||_2 - ||f*g||_2
  double slack_l2_dominates = 0;    // min over f,g of ||.||_2 - ||.||_C*
  double slack_cstar_submult = 0;   // ||f||_C* ||g||_C* - ||f*g||_C*
  double rel_cstar_identity = 0;    // |lhs - rhs| / max(rhs, 1)
};

struct NormReport {
  std::vector<NormSample> samples;
  Report summary;

  void print(std::ostream& out) const;
  nlohmann::json to_json() const;
};

/// Samples random pairs and verifies submultiplicativity, L2 domination of
/// the C* norm, and the C*-identity. Slack threshold -1e-12, identity 1e-10.
NormReport check_norm_inequalities(const InstanceSpec& spec, int n_samples,
                                   std::uint64_t seed);

}  // namespace cqg
