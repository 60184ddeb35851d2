#pragma once

#include <string>
#include <vector>

#include "cqg/hopf.hpp"
#include "cqg/model.hpp"
#include "cqg/report.hpp"
#include "cqg/types.hpp"

namespace cqg {

/// Finite group given by its Cayley table. Element order is part of the data
/// and is preserved by serialization; functions on the group are coordinate
/// vectors over that order.
struct GroupTable {
  std::vector<std::string> elements;
  std::vector<int> table;  // row-major: table[i * n + j] = index of g_i g_j
  int identity = 0;

  int size() const { return static_cast<int>(elements.size()); }
  int mul(int i, int j) const { return table[i * size() + j]; }
  int inverse(int i) const;
  int index(const std::string& element) const;
};

/// Unitary irreducible representation, one matrix per group element.
struct Irrep {
  std::string label;
  int dim = 0;
  std::string dual;  // label of the conjugate representation
  std::vector<Matrix> rho;
};

struct FiniteGroup {
  GroupTable table;
  std::vector<Irrep> irreps;  // sorted by label; "0" is the trivial one

  const Irrep& irrep(const std::string& label) const;
};

/// z2, z3, z6, s3 (order 6, non-abelian), d4 (order 8).
FiniteGroup builtin_group(const std::string& name);
std::vector<std::string> builtin_group_names();

/// Exhaustive checks: unique labels, closed table, two-sided identity,
/// inverses, associativity over all triples.
Report validate_group(const GroupTable& table);

/// Per irrep: identity, homomorphism, unitarity; across irreps: Schur
/// orthogonality of matrix coefficients, completeness sum d^2 = |G|, and the
/// conjugate pairing (involutive, matching characters).
Report validate_irreps(const FiniteGroup& fg);

/// The function algebra C(G) on the delta-function basis: pointwise product,
/// Delta(delta_x) = sum_{yz = x} delta_y (x) delta_z, S(delta_x) = delta_{x^-1}.
HopfPresentation build_function_hopf(const GroupTable& table);

/// Block-algebra picture of the same object: one block per irrep with Q = I.
InstanceSpec instance_from_group(const FiniteGroup& fg);

/// F_lambda = (d_lambda / |G|) sum_x f(x) rho_lambda(x^-1).
ConvElement fourier(const FiniteGroup& fg, const Vector& f);
/// f(x) = sum_lambda tr(F_lambda rho_lambda(x)).
Vector inverse_fourier(const FiniteGroup& fg, const ConvElement& coeffs);

/// (a * b)(z) = (1 / |G|) sum_y b(y) a(y^-1 z).
Vector group_convolution(const GroupTable& table, const Vector& a,
                         const Vector& b);
/// M with M g = f * g, i.e. M(x, y) = f(y^-1 x) / |G|.
Matrix left_convolution_matrix(const GroupTable& table, const Vector& f);

/// sum_{lambda in window} d_lambda chi_lambda, the classical approximate unit.
Vector classical_approximate_identity(const FiniteGroup& fg,
                                      const TruncationWindow& window);
/// Projector onto the span of the matrix coefficients of the chosen irreps.
Matrix block_projector(const FiniteGroup& fg, const TruncationWindow& window);

/// Coefficient comodule of an irrep: a_i^j(x) = rho(x)(j, i).
ComodulePresentation comodule_from_irrep(const FiniteGroup& fg,
                                         const std::string& label);

// -- file formats -------------------------------------------------------------

FiniteGroup parse_group(const std::string& text);
/// Parse plus full group and irrep validation.
FiniteGroup load_group(const std::string& text);
std::string save_group(const FiniteGroup& fg);

/// Function vectors interchange as {"format": "cqg-function/1", "values": ...}.
Vector parse_function(const std::string& text);
std::string save_function(const Vector& f);

}  // namespace cqg
