#pragma once

#include <string>
#include <utility>
#include <vector>

#include "cqg/report.hpp"
#include "cqg/types.hpp"

namespace cqg {

/// Structure-constant entry; the meaning of (a, b, c) depends on the tensor.
struct Triplet {
  int a = 0;
  int b = 0;
  int c = 0;
  Complex value;
};

/// A finite-dimensional Hopf *-algebra over a fixed basis, given entirely by
/// structure constants. Everything downstream is computed by contraction.
struct HopfPresentation {
  std::vector<std::string> basis;
  Vector unit;                     // coordinates of 1
  std::vector<Triplet> product;    // b_a b_b = sum_c value b_c
  std::vector<Triplet> coproduct;  // Delta(b_a) = sum value b_b (x) b_c
  Vector counit;                   // covector
  Matrix antipode;                 // column i holds S(b_i)
  Matrix star;                     // column i holds star(b_i); applied with a
                                   // conjugate on the input coordinates
  int dim() const { return static_cast<int>(basis.size()); }
};

/// Left-invariant normalized integral, with a conditioning diagnostic for the
/// duality Gram matrix [ integral(b_i S(b_j)) ].
struct IntegralFunctional {
  Vector values;  // covector
  double gram_condition = 0.0;
};

/// Finite-dimensional right comodule: delta(x_i) = x_j (x) a_i^j with the
/// coefficients a_i^j stored as coordinate vectors over the algebra basis.
struct ComodulePresentation {
  int dim = 0;
  std::vector<Vector> coeff;  // row-major: coeff[i * dim + j] = a_i^j

  const Vector& a(int i, int j) const { return coeff[i * dim + j]; }
  Vector& a(int i, int j) { return coeff[i * dim + j]; }
};

// -- elementary contractions ---------------------------------------------------

Vector hopf_product(const HopfPresentation& hp, const Vector& u,
                    const Vector& v);
/// Delta(u) as an n x n coefficient matrix over basis pairs.
Matrix hopf_coproduct(const HopfPresentation& hp, const Vector& u);
Complex hopf_counit(const HopfPresentation& hp, const Vector& u);
Vector hopf_antipode(const HopfPresentation& hp, const Vector& u);
Vector hopf_star(const HopfPresentation& hp, const Vector& u);

/// Evaluates a covector on an element (bilinear, no conjugation).
Complex apply_functional(const Vector& phi, const Vector& u);

// -- validation and the integral -----------------------------------------------

/// Checks every stated axiom: associativity and unit laws, coassociativity and
/// counit laws, Delta and epsilon as unital algebra maps, the antipode law,
/// star as an anti-multiplicative involution, and the exchange identity
/// integral(g S(h1)) h2 = g1 integral(g2 S(h)) once an integral exists.
Report validate_hopf(const HopfPresentation& hp);

/// Solves (id (x) t) Delta = t(.) 1 for the covector t, normalized t(1) = 1.
IntegralFunctional compute_integral(const HopfPresentation& hp);

double sweedler_residual(const HopfPresentation& hp,
                         const IntegralFunctional& integral);

/// Gram matrices of the two pairings used downstream.
Matrix gram_antipode(const HopfPresentation& hp,
                     const IntegralFunctional& integral);
Matrix gram_plain(const HopfPresentation& hp,
                  const IntegralFunctional& integral);

// -- the modular functionals ----------------------------------------------------

/// q(h) = integral(S^2(h1) S(h2)) and p(h) = integral(S(h2) h1) as covectors.
std::pair<Vector, Vector> q_p_functionals(const HopfPresentation& hp,
                                          const IntegralFunctional& integral);

/// Convolution inverse of a covector in the dual algebra.
Vector dual_inverse(const HopfPresentation& hp, const Vector& phi);

/// Residual of S^2(h) = q(h1) h2 q^{-1}(h3) over the basis.
double co_inner_residual(const HopfPresentation& hp,
                         const IntegralFunctional& integral);

// -- comodules -------------------------------------------------------------------

Report validate_comodule(const HopfPresentation& hp,
                         const ComodulePresentation& comod);

/// Q with Q(j, i) = q(a_i^j); Hermitian positive definite for unitary input.
Matrix reflection_matrix(const HopfPresentation& hp,
                         const IntegralFunctional& integral,
                         const ComodulePresentation& comod);

ComodulePresentation comodule_direct_sum(const ComodulePresentation& a,
                                         const ComodulePresentation& b);

/// Basis of maps phi with delta_b(phi x) = (phi (x) id) delta_a(x).
std::vector<Matrix> comodule_hom_basis(const HopfPresentation& hp,
                                       const ComodulePresentation& a,
                                       const ComodulePresentation& b);

// -- convolution on the algebra ---------------------------------------------------

/// f * g = integral(g S(f1)) f2.
Vector conv_abstract(const HopfPresentation& hp,
                     const IntegralFunctional& integral, const Vector& f,
                     const Vector& g);
/// The equivalent exchange form g1 integral(g2 S(f)).
Vector conv_abstract_sweedler(const HopfPresentation& hp,
                              const IntegralFunctional& integral,
                              const Vector& f, const Vector& g);

/// h -> the covector g -> integral(g S(h)).
Vector embed_functional(const HopfPresentation& hp,
                        const IntegralFunctional& integral, const Vector& h);

/// (phi * psi)(h) = phi(h1) psi(h2).
Vector dual_convolve(const HopfPresentation& hp, const Vector& phi,
                     const Vector& psi);

/// Unit of the convolution algebra (or of the subalgebra spanned by the
/// columns of span), found by a least-squares solve over both unit laws.
Vector convolution_unit(const HopfPresentation& hp,
                        const IntegralFunctional& integral);
Vector convolution_unit(const HopfPresentation& hp,
                        const IntegralFunctional& integral, const Matrix& span);

// -- the dual coproduct and approximate antipode -----------------------------------

/// Coefficient matrix c with f1 (x) f2 = sum c(k,l) b_k (x) b_l, defined by
/// integral(f1 g) integral(f2 h) = integral(f g h) for all g, h.
Matrix coproduct_star(const HopfPresentation& hp,
                      const IntegralFunctional& integral, const Vector& f);

/// S_*(h) = S(h1) p(h2) q(h3).
Vector antipode_star(const HopfPresentation& hp,
                     const IntegralFunctional& integral, const Vector& f);

/// Restriction to a subcoalgebra given by a projector; rejects f outside it.
Vector antipode_star(const HopfPresentation& hp,
                     const IntegralFunctional& integral,
                     const Matrix& projector, const Vector& f);

/// Max-norm residual of m(S_*K (x) id) Delta_*(f) = integral(f) e_K, where
/// S_*K projects onto the subcoalgebra before applying the formula and e_K is
/// the unit of the restricted convolution algebra spanned by span's columns.
double approximate_antipode_residual(const HopfPresentation& hp,
                                     const IntegralFunctional& integral,
                                     const Matrix& projector,
                                     const Matrix& span, const Vector& f);

// -- induced actions ---------------------------------------------------------------

/// pi(h) with pi(h)(j, i) = integral(a_i^j S(h)); the action h * v = pi(h) v.
Matrix action_matrix(const HopfPresentation& hp,
                     const IntegralFunctional& integral,
                     const ComodulePresentation& comod, const Vector& h);

Vector coaction_to_action(const HopfPresentation& hp,
                          const IntegralFunctional& integral,
                          const ComodulePresentation& comod, const Vector& h,
                          const Vector& v);

struct InducedComodule {
  ComodulePresentation comod;
  bool used_antipode_leg = false;  // which second-leg convention validated
  double axiom_residual = 0.0;
};

/// Recovers a coaction from a module action: solve f * gen = x_i, then emit
/// delta(x_i) = f1 * gen (x) f2, validating the comodule axioms.
InducedComodule action_to_coaction(const HopfPresentation& hp,
                                   const IntegralFunctional& integral,
                                   const std::vector<Matrix>& action_of_basis,
                                   const Vector& generator);

// -- file format --------------------------------------------------------------------

HopfPresentation parse_hopf(const std::string& text);
HopfPresentation load_hopf(const std::string& text);
std::string save_hopf(const HopfPresentation& hp);

}  // namespace cqg
