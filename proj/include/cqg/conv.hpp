#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cqg/model.hpp"
#include "cqg/report.hpp"
#include "cqg/types.hpp"

namespace cqg {

/// Block convolution: per shared block, F Q G / tr(Q). Disjoint blocks vanish.
ConvElement convolve(const InstanceSpec& spec, const ConvElement& f,
                     const ConvElement& g);

/// Conjugate-linear involution F -> Q F^dagger Q^{-1}, an anti-homomorphism.
ConvElement star(const InstanceSpec& spec, const ConvElement& f);

/// Block representation pi_lambda(f) = F_lambda Q_lambda / tr(Q_lambda);
/// the zero matrix when lambda is outside the support of f.
Matrix represent(const InstanceSpec& spec, const ConvElement& f,
                 const std::string& label);

/// Inverse of represent on a tuple of target matrices: F = M tr(Q) Q^{-1}.
ConvElement element_from_block_matrices(
    const InstanceSpec& spec, const std::map<std::string, Matrix>& targets);

/// Module action of f on a vector in the simple module of v.label.
ModuleVector act(const InstanceSpec& spec, const ConvElement& f,
                 const ModuleVector& v);

/// Identity of the truncated algebra: per block in K, E = tr(Q) Q^{-1}.
ConvElement approximate_unit(const InstanceSpec& spec,
                             const TruncationWindow& K);

/// Dual counit: the coefficient of the unit block "0" (0 when absent).
Complex counit_star(const ConvElement& f);

/// Multiplicity pattern of a direct sum of simple modules.
using MultiplicityVector = std::map<std::string, int>;

int sum_dimension(const InstanceSpec& spec, const MultiplicityVector& mult);

/// Block-diagonal representation of f on the direct sum described by mult,
/// blocks in lexicographic label order, each repeated mult[label] times.
Matrix representation_on_sum(const InstanceSpec& spec,
                             const MultiplicityVector& mult,
                             const ConvElement& f);

struct IntertwinerBasis {
  MultiplicityVector source;
  MultiplicityVector target;
  std::vector<Matrix> maps;  // orthonormal basis of the commutant space
  double residual = 0.0;     // worst commutation defect over the generators
};

/// All maps T with pi_target(f) T = T pi_source(f) for every f, computed by
/// a null-space solve over the block matrix units.
IntertwinerBasis intertwiner_space(const InstanceSpec& spec,
                                   const MultiplicityVector& source,
                                   const MultiplicityVector& target);

/// Verifies the defining properties of the approximate unit along a
/// filtration: strictly increasing windows, e_K * f -> f with exact equality
/// once the window covers the support, dual counit 1, and e_K = e_K * e_K^*.
Report check_approximate_unit(const InstanceSpec& spec,
                              const Filtration& chain, int n_samples,
                              std::uint64_t seed);

}  // namespace cqg
