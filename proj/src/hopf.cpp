#include "cqg/hopf.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "cqg/analysis.hpp"
#include "json_util.hpp"

namespace cqg {

namespace {

constexpr double kAxiomTol = 1e-12;
constexpr double kSolveTol = 1e-10;

Vector basis_vec(int n, int i) {
  Vector e = Vector::Zero(n);
  e(i) = 1.0;
  return e;
}

Vector product_of_basis(const HopfPresentation& hp, int i, int j) {
  Vector out = Vector::Zero(hp.dim());
  for (const auto& t : hp.product)
    if (t.a == i && t.b == j) out(t.c) += t.value;
  return out;
}

double vec_residual(const Vector& a, const Vector& b) {
  return max_abs(Vector(a - b));
}

}  // namespace

// -- elementary contractions -----------------------------------------------------

Vector hopf_product(const HopfPresentation& hp, const Vector& u,
                    const Vector& v) {
  Vector out = Vector::Zero(hp.dim());
  for (const auto& t : hp.product) out(t.c) += t.value * u(t.a) * v(t.b);
  return out;
}

Matrix hopf_coproduct(const HopfPresentation& hp, const Vector& u) {
  Matrix out = Matrix::Zero(hp.dim(), hp.dim());
  for (const auto& t : hp.coproduct) out(t.b, t.c) += t.value * u(t.a);
  return out;
}

Complex hopf_counit(const HopfPresentation& hp, const Vector& u) {
  return apply_functional(hp.counit, u);
}

Vector hopf_antipode(const HopfPresentation& hp, const Vector& u) {
  return hp.antipode * u;
}

Vector hopf_star(const HopfPresentation& hp, const Vector& u) {
  return hp.star * u.conjugate();
}

Complex apply_functional(const Vector& phi, const Vector& u) {
  return phi.cwiseProduct(u).sum();
}

// -- validation --------------------------------------------------------------------

Report validate_hopf(const HopfPresentation& hp) {
  Report report("hopf presentation");
  const int n = hp.dim();

  const bool shapes_ok = hp.unit.size() == n && hp.counit.size() == n &&
                         hp.antipode.rows() == n && hp.antipode.cols() == n &&
                         hp.star.rows() == n && hp.star.cols() == n;
  report.require("tensor shapes consistent", shapes_ok);
  if (!shapes_ok || n == 0) return report;

  double assoc = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Vector ij = product_of_basis(hp, i, j);
      for (int k = 0; k < n; ++k) {
        const Vector lhs = hopf_product(hp, ij, basis_vec(n, k));
        const Vector rhs =
            hopf_product(hp, basis_vec(n, i), product_of_basis(hp, j, k));
        assoc = std::max(assoc, vec_residual(lhs, rhs));
      }
    }
  }
  report.require_leq("product associative", assoc, kAxiomTol);

  double unit_law = 0.0;
  for (int i = 0; i < n; ++i) {
    const Vector e = basis_vec(n, i);
    unit_law = std::max(unit_law,
                        vec_residual(hopf_product(hp, hp.unit, e), e));
    unit_law = std::max(unit_law,
                        vec_residual(hopf_product(hp, e, hp.unit), e));
  }
  report.require_leq("unit laws", unit_law, kAxiomTol);

  // Coassociativity over three-fold tensors, compared entry by entry.
  double coassoc = 0.0;
  {
    std::vector<Complex> lhs(static_cast<std::size_t>(n) * n * n);
    std::vector<Complex> rhs(lhs.size());
    for (int k = 0; k < n; ++k) {
      std::fill(lhs.begin(), lhs.end(), Complex(0.0));
      std::fill(rhs.begin(), rhs.end(), Complex(0.0));
      for (const auto& t1 : hp.coproduct) {
        if (t1.a != k) continue;
        for (const auto& t2 : hp.coproduct) {
          // (Delta (x) id): split the first leg of (b, c) -> (a', b', c).
          if (t2.a == t1.b)
            lhs[(static_cast<std::size_t>(t2.b) * n + t2.c) * n + t1.c] +=
                t1.value * t2.value;
          // (id (x) Delta): split the second leg.
          if (t2.a == t1.c)
            rhs[(static_cast<std::size_t>(t1.b) * n + t2.b) * n + t2.c] +=
                t1.value * t2.value;
        }
      }
      for (std::size_t idx = 0; idx < lhs.size(); ++idx)
        coassoc = std::max(coassoc, std::abs(lhs[idx] - rhs[idx]));
    }
  }
  report.require_leq("coassociativity", coassoc, kAxiomTol);

  double counit_law = 0.0;
  for (int k = 0; k < n; ++k) {
    Vector left = Vector::Zero(n);
    Vector right = Vector::Zero(n);
    for (const auto& t : hp.coproduct) {
      if (t.a != k) continue;
      left(t.c) += t.value * hp.counit(t.b);   // (eps (x) id) Delta
      right(t.b) += t.value * hp.counit(t.c);  // (id (x) eps) Delta
    }
    const Vector e = basis_vec(n, k);
    counit_law = std::max(counit_law, vec_residual(left, e));
    counit_law = std::max(counit_law, vec_residual(right, e));
  }
  report.require_leq("counit laws", counit_law, kAxiomTol);

  double delta_mult = 0.0;
  for (int i = 0; i < n; ++i) {
    const Matrix di = hopf_coproduct(hp, basis_vec(n, i));
    for (int j = 0; j < n; ++j) {
      const Matrix dj = hopf_coproduct(hp, basis_vec(n, j));
      const Matrix lhs = hopf_coproduct(hp, product_of_basis(hp, i, j));
      Matrix rhs = Matrix::Zero(n, n);
      for (const auto& t1 : hp.product)
        for (const auto& t2 : hp.product) {
          const Complex w = di(t1.a, t2.a) * dj(t1.b, t2.b);
          if (w != Complex(0.0)) rhs(t1.c, t2.c) += w * t1.value * t2.value;
        }
      delta_mult = std::max(delta_mult, max_abs(Matrix(lhs - rhs)));
    }
  }
  report.require_leq("coproduct is an algebra map", delta_mult, kAxiomTol);
  report.require_leq(
      "coproduct preserves the unit",
      max_abs(Matrix(hopf_coproduct(hp, hp.unit) -
                     hp.unit * hp.unit.transpose())),
      kAxiomTol);

  double eps_mult = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      eps_mult = std::max(
          eps_mult,
          std::abs(hopf_counit(hp, product_of_basis(hp, i, j)) -
                   hp.counit(i) * hp.counit(j)));
  report.require_leq("counit is an algebra map", eps_mult, kAxiomTol);
  report.require_leq("counit of the unit is 1",
                     std::abs(hopf_counit(hp, hp.unit) - Complex(1.0)),
                     kAxiomTol);

  double antipode_law = 0.0;
  for (int k = 0; k < n; ++k) {
    Vector left = Vector::Zero(n);
    Vector right = Vector::Zero(n);
    for (const auto& t : hp.coproduct) {
      if (t.a != k) continue;
      left += t.value * hopf_product(hp, hp.antipode.col(t.b),
                                     basis_vec(n, t.c));
      right += t.value * hopf_product(hp, basis_vec(n, t.b),
                                      hp.antipode.col(t.c));
    }
    const Vector target = hp.counit(k) * hp.unit;
    antipode_law = std::max(antipode_law, vec_residual(left, target));
    antipode_law = std::max(antipode_law, vec_residual(right, target));
  }
  report.require_leq("antipode law m(S x id)Delta = unit counit", antipode_law,
                     kAxiomTol);

  double star_inv = 0.0;
  double star_anti = 0.0;
  for (int i = 0; i < n; ++i) {
    const Vector e = basis_vec(n, i);
    star_inv = std::max(star_inv,
                        vec_residual(hopf_star(hp, hopf_star(hp, e)), e));
    for (int j = 0; j < n; ++j) {
      const Vector lhs = hopf_star(hp, product_of_basis(hp, i, j));
      const Vector rhs = hopf_product(hp, hopf_star(hp, basis_vec(n, j)),
                                      hopf_star(hp, basis_vec(n, i)));
      star_anti = std::max(star_anti, vec_residual(lhs, rhs));
    }
  }
  report.require_leq("star involutive", star_inv, kAxiomTol);
  report.require_leq("star anti-multiplicative", star_anti, kAxiomTol);

  try {
    const IntegralFunctional integral = compute_integral(hp);
    double invariance = 0.0;
    for (int k = 0; k < n; ++k) {
      Vector lhs = Vector::Zero(n);
      for (const auto& t : hp.coproduct)
        if (t.a == k) lhs(t.b) += t.value * integral.values(t.c);
      invariance = std::max(
          invariance,
          vec_residual(lhs, Vector(integral.values(k) * hp.unit)));
    }
    report.require_leq("integral invariance (id x t)Delta = t(.)1", invariance,
                       kAxiomTol);
    report.require_leq("exchange identity t(g S(h1))h2 = g1 t(g2 S(h))",
                       sweedler_residual(hp, integral), kAxiomTol);
  } catch (const ValidationError&) {
    report.require("left integral exists", false);
  }

  return report;
}

IntegralFunctional compute_integral(const HopfPresentation& hp) {
  const int n = hp.dim();
  if (n == 0) throw ValidationError("empty presentation has no integral");
  Matrix system = Matrix::Zero(n * n, n);
  for (const auto& t : hp.coproduct) system(t.a * n + t.b, t.c) += t.value;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i) system(k * n + i, k) -= hp.unit(i);

  Eigen::JacobiSVD<Matrix> svd(system, Eigen::ComputeThinV);
  const RealVector sv = svd.singularValues();
  const double cutoff = std::max(sv(0), 1.0) * kSolveTol;
  int nullity = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) <= cutoff) ++nullity;
  if (nullity == 0)
    throw ValidationError("no left integral (input is not co-semisimple)");
  if (nullity > 1)
    throw ValidationError("left integral is not unique");

  Vector t = svd.matrixV().col(n - 1);
  const Complex normalization = apply_functional(t, hp.unit);
  if (std::abs(normalization) < kSolveTol)
    throw ValidationError(
        "integral cannot be normalized: t(1) = 0 (not co-semisimple)");
  t /= normalization;

  IntegralFunctional integral;
  integral.values = t;
  integral.gram_condition = condition_number(gram_antipode(hp, integral));
  return integral;
}

double sweedler_residual(const HopfPresentation& hp,
                         const IntegralFunctional& integral) {
  const int n = hp.dim();
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Vector lhs = Vector::Zero(n);
      Vector rhs = Vector::Zero(n);
      for (const auto& t : hp.coproduct) {
        if (t.a == j)
          lhs(t.c) += t.value *
                      apply_functional(
                          integral.values,
                          hopf_product(hp, basis_vec(n, i),
                                       hp.antipode.col(t.b)));
        if (t.a == i)
          rhs(t.b) += t.value *
                      apply_functional(
                          integral.values,
                          hopf_product(hp, basis_vec(n, t.c),
                                       hp.antipode.col(j)));
      }
      worst = std::max(worst, vec_residual(lhs, rhs));
    }
  }
  return worst;
}

Matrix gram_antipode(const HopfPresentation& hp,
                     const IntegralFunctional& integral) {
  const int n = hp.dim();
  Matrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      g(i, j) = apply_functional(
          integral.values,
          hopf_product(hp, basis_vec(n, i), hp.antipode.col(j)));
  return g;
}

Matrix gram_plain(const HopfPresentation& hp,
                  const IntegralFunctional& integral) {
  const int n = hp.dim();
  Matrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      g(i, j) = apply_functional(
          integral.values, product_of_basis(hp, i, j));
  return g;
}

// -- modular functionals ------------------------------------------------------------

std::pair<Vector, Vector> q_p_functionals(
    const HopfPresentation& hp, const IntegralFunctional& integral) {
  const int n = hp.dim();
  const Matrix s2 = hp.antipode * hp.antipode;
  Vector qv = Vector::Zero(n);
  Vector pv = Vector::Zero(n);
  for (const auto& t : hp.coproduct) {
    qv(t.a) += t.value *
               apply_functional(integral.values,
                                hopf_product(hp, s2.col(t.b),
                                             hp.antipode.col(t.c)));
    pv(t.a) += t.value *
               apply_functional(integral.values,
                                hopf_product(hp, hp.antipode.col(t.c),
                                             basis_vec(n, t.b)));
  }
  return {qv, pv};
}

Vector dual_inverse(const HopfPresentation& hp, const Vector& phi) {
  const int n = hp.dim();
  Matrix m = Matrix::Zero(n, n);
  for (const auto& t : hp.coproduct) m(t.a, t.c) += t.value * phi(t.b);
  const Vector r = m.partialPivLu().solve(hp.counit);
  if (max_abs(Vector(m * r - hp.counit)) >
      kSolveTol * (1.0 + max_abs(hp.counit)))
    throw ValidationError("functional is not invertible in the dual algebra");
  return r;
}

double co_inner_residual(const HopfPresentation& hp,
                         const IntegralFunctional& integral) {
  const int n = hp.dim();
  const auto [qv, pv] = q_p_functionals(hp, integral);
  (void)pv;
  const Vector qinv = dual_inverse(hp, qv);
  const Matrix s2 = hp.antipode * hp.antipode;
  double worst = 0.0;
  for (int k = 0; k < n; ++k) {
    Vector rhs = Vector::Zero(n);
    for (const auto& t1 : hp.coproduct) {
      if (t1.a != k) continue;
      for (const auto& t2 : hp.coproduct) {
        if (t2.a != t1.c) continue;
        rhs(t2.b) += t1.value * t2.value * qv(t1.b) * qinv(t2.c);
      }
    }
    worst = std::max(worst, vec_residual(Vector(s2.col(k)), rhs));
  }
  return worst;
}

// -- comodules ------------------------------------------------------------------------

namespace {

// (counit residual, coproduct residual); shapes must already match.
std::pair<double, double> comodule_residuals(
    const HopfPresentation& hp, const ComodulePresentation& comod) {
  const int d = comod.dim;
  const int n = hp.dim();
  double counit_res = 0.0;
  double coproduct_res = 0.0;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const double target = i == j ? 1.0 : 0.0;
      counit_res = std::max(
          counit_res,
          std::abs(hopf_counit(hp, comod.a(i, j)) - Complex(target)));
      Matrix rhs = Matrix::Zero(n, n);
      for (int k = 0; k < d; ++k)
        rhs += comod.a(k, j) * comod.a(i, k).transpose();
      coproduct_res = std::max(
          coproduct_res,
          max_abs(Matrix(hopf_coproduct(hp, comod.a(i, j)) - rhs)));
    }
  }
  return {counit_res, coproduct_res};
}

}  // namespace

Report validate_comodule(const HopfPresentation& hp,
                         const ComodulePresentation& comod) {
  Report report("comodule presentation");
  const int d = comod.dim;
  const int n = hp.dim();
  bool shapes = static_cast<int>(comod.coeff.size()) == d * d;
  for (const auto& v : comod.coeff) shapes = shapes && v.size() == n;
  report.require("coefficient shapes consistent", shapes);
  if (!shapes) return report;

  const auto [counit_res, coproduct_res] = comodule_residuals(hp, comod);
  report.require_leq("counit condition eps(a_i^j) = [i=j]", counit_res,
                     kAxiomTol);
  report.require_leq("coefficients closed under Delta", coproduct_res,
                     kAxiomTol);
  return report;
}

Matrix reflection_matrix(const HopfPresentation& hp,
                         const IntegralFunctional& integral,
                         const ComodulePresentation& comod) {
  const Report verdict = validate_comodule(hp, comod);
  if (!verdict.passed())
    throw ValidationError("coefficients are not closed under the coproduct");
  const auto [qv, pv] = q_p_functionals(hp, integral);
  (void)pv;
  const int d = comod.dim;
  Matrix q(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) q(j, i) = apply_functional(qv, comod.a(i, j));
  return q;
}

ComodulePresentation comodule_direct_sum(const ComodulePresentation& a,
                                         const ComodulePresentation& b) {
  ComodulePresentation out;
  out.dim = a.dim + b.dim;
  const int n = a.coeff.empty()
                    ? (b.coeff.empty() ? 0 : static_cast<int>(b.coeff[0].size()))
                    : static_cast<int>(a.coeff[0].size());
  out.coeff.assign(static_cast<std::size_t>(out.dim) * out.dim,
                   Vector::Zero(n));
  for (int i = 0; i < a.dim; ++i)
    for (int j = 0; j < a.dim; ++j) out.a(i, j) = a.a(i, j);
  for (int i = 0; i < b.dim; ++i)
    for (int j = 0; j < b.dim; ++j) out.a(a.dim + i, a.dim + j) = b.a(i, j);
  return out;
}

std::vector<Matrix> comodule_hom_basis(const HopfPresentation& hp,
                                       const ComodulePresentation& a,
                                       const ComodulePresentation& b) {
  const int da = a.dim;
  const int db = b.dim;
  const int n = hp.dim();
  const int unknowns = da * db;
  if (unknowns == 0) return {};

  Matrix system = Matrix::Zero(db * da * n, unknowns);
  int row = 0;
  for (int q = 0; q < db; ++q)
    for (int i = 0; i < da; ++i)
      for (int c = 0; c < n; ++c, ++row) {
        for (int p = 0; p < db; ++p)
          system(row, p + i * db) += b.a(p, q)(c);
        for (int j = 0; j < da; ++j)
          system(row, q + j * db) -= a.a(i, j)(c);
      }

  const Matrix gram = system.adjoint() * system;
  Eigen::SelfAdjointEigenSolver<Matrix> eigen(gram);
  const double lmax = std::max(eigen.eigenvalues().maxCoeff(), 0.0);
  const double cutoff = std::max(lmax, 1.0) * 1e-14;
  std::vector<Matrix> basis;
  for (Eigen::Index k = 0; k < eigen.eigenvalues().size(); ++k) {
    if (eigen.eigenvalues()(k) > cutoff) continue;
    const Vector v = eigen.eigenvectors().col(k);
    Matrix phi(db, da);
    for (int i = 0; i < da; ++i) phi.col(i) = v.segment(i * db, db);
    basis.push_back(std::move(phi));
  }
  return basis;
}

// -- convolution -----------------------------------------------------------------------

Vector conv_abstract(const HopfPresentation& hp,
                     const IntegralFunctional& integral, const Vector& f,
                     const Vector& g) {
  const int n = hp.dim();
  Vector weights(n);  // weights(a) = t(g S(b_a))
  for (int a = 0; a < n; ++a)
    weights(a) = apply_functional(integral.values,
                                  hopf_product(hp, g, hp.antipode.col(a)));
  Vector out = Vector::Zero(n);
  for (const auto& t : hp.coproduct)
    out(t.c) += t.value * f(t.a) * weights(t.b);
  return out;
}

Vector conv_abstract_sweedler(const HopfPresentation& hp,
                              const IntegralFunctional& integral,
                              const Vector& f, const Vector& g) {
  const int n = hp.dim();
  const Vector sf = hopf_antipode(hp, f);
  Vector weights(n);  // weights(b) = t(b_b S(f))
  for (int b = 0; b < n; ++b)
    weights(b) = apply_functional(integral.values,
                                  hopf_product(hp, basis_vec(n, b), sf));
  Vector out = Vector::Zero(n);
  for (const auto& t : hp.coproduct)
    out(t.b) += t.value * g(t.a) * weights(t.c);
  return out;
}

Vector embed_functional(const HopfPresentation& hp,
                        const IntegralFunctional& integral, const Vector& h) {
  const int n = hp.dim();
  const Vector sh = hopf_antipode(hp, h);
  Vector out(n);
  for (int j = 0; j < n; ++j)
    out(j) = apply_functional(integral.values,
                              hopf_product(hp, basis_vec(n, j), sh));
  return out;
}

Vector dual_convolve(const HopfPresentation& hp, const Vector& phi,
                     const Vector& psi) {
  Vector out = Vector::Zero(hp.dim());
  for (const auto& t : hp.coproduct)
    out(t.a) += t.value * phi(t.b) * psi(t.c);
  return out;
}

Vector convolution_unit(const HopfPresentation& hp,
                        const IntegralFunctional& integral) {
  return convolution_unit(hp, integral,
                          Matrix::Identity(hp.dim(), hp.dim()));
}

Vector convolution_unit(const HopfPresentation& hp,
                        const IntegralFunctional& integral,
                        const Matrix& span) {
  const int n = hp.dim();
  const int m = static_cast<int>(span.cols());
  if (span.rows() != n || m == 0)
    throw ValidationError("span basis has wrong shape");

  Matrix system(2 * n * m, m);
  Vector target(2 * n * m);
  for (int j = 0; j < m; ++j) {
    const Vector vj = span.col(j);
    for (int i = 0; i < m; ++i) {
      system.block(2 * j * n, i, n, 1) =
          conv_abstract(hp, integral, span.col(i), vj);
      system.block((2 * j + 1) * n, i, n, 1) =
          conv_abstract(hp, integral, vj, span.col(i));
    }
    target.segment(2 * j * n, n) = vj;
    target.segment((2 * j + 1) * n, n) = vj;
  }
  const Vector c = system.completeOrthogonalDecomposition().solve(target);
  if (max_abs(Vector(system * c - target)) >
      kSolveTol * (1.0 + max_abs(target)))
    throw ValidationError("restricted convolution algebra has no unit");
  return span * c;
}

// -- dual coproduct and approximate antipode ---------------------------------------------

Matrix coproduct_star(const HopfPresentation& hp,
                      const IntegralFunctional& integral, const Vector& f) {
  const int n = hp.dim();
  const Matrix g = gram_plain(hp, integral);
  Matrix t(n, n);
  for (int p = 0; p < n; ++p) {
    const Vector fp = hopf_product(hp, f, basis_vec(n, p));
    for (int q = 0; q < n; ++q)
      t(p, q) = apply_functional(integral.values,
                                 hopf_product(hp, fp, basis_vec(n, q)));
  }
  const auto lu = Matrix(g.transpose()).partialPivLu();
  const Matrix x = lu.solve(t);
  const Matrix c = lu.solve(x.transpose()).transpose();
  if (max_abs(Matrix(g.transpose() * c * g - t)) >
      kSolveTol * (1.0 + max_abs(t)))
    throw ValidationError("multiplication Gram matrix is singular");
  return c;
}

Vector antipode_star(const HopfPresentation& hp,
                     const IntegralFunctional& integral, const Vector& f) {
  const auto [qv, pv] = q_p_functionals(hp, integral);
  Vector out = Vector::Zero(hp.dim());
  for (const auto& t1 : hp.coproduct) {
    const Complex fk = f(t1.a);
    if (fk == Complex(0.0)) continue;
    for (const auto& t2 : hp.coproduct) {
      if (t2.a != t1.c) continue;
      out += fk * t1.value * t2.value * pv(t2.b) * qv(t2.c) *
             hp.antipode.col(t1.b);
    }
  }
  return out;
}

Vector antipode_star(const HopfPresentation& hp,
                     const IntegralFunctional& integral,
                     const Matrix& projector, const Vector& f) {
  if (max_abs(Vector(projector * f - f)) > kSolveTol * (1.0 + max_abs(f)))
    throw ValidationError("element lies outside the restricted subcoalgebra");
  return antipode_star(hp, integral, f);
}

double approximate_antipode_residual(const HopfPresentation& hp,
                                     const IntegralFunctional& integral,
                                     const Matrix& projector,
                                     const Matrix& span, const Vector& f) {
  const int n = hp.dim();
  const Matrix c = coproduct_star(hp, integral, f);
  const Vector unit_k = convolution_unit(hp, integral, span);
  Vector lhs = Vector::Zero(n);
  for (int k = 0; k < n; ++k) {
    const Vector sk =
        antipode_star(hp, integral, Vector(projector * basis_vec(n, k)));
    for (int l = 0; l < n; ++l) {
      if (c(k, l) == Complex(0.0)) continue;
      lhs += c(k, l) * conv_abstract(hp, integral, sk, basis_vec(n, l));
    }
  }
  const Vector rhs = apply_functional(integral.values, f) * unit_k;
  return vec_residual(lhs, rhs);
}

// -- induced actions -----------------------------------------------------------------------

Matrix action_matrix(const HopfPresentation& hp,
                     const IntegralFunctional& integral,
                     const ComodulePresentation& comod, const Vector& h) {
  const Vector sh = hopf_antipode(hp, h);
  const int d = comod.dim;
  Matrix out(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      out(j, i) = apply_functional(integral.values,
                                   hopf_product(hp, comod.a(i, j), sh));
  return out;
}

Vector coaction_to_action(const HopfPresentation& hp,
                          const IntegralFunctional& integral,
                          const ComodulePresentation& comod, const Vector& h,
                          const Vector& v) {
  if (v.size() != comod.dim)
    throw ValidationError("module vector has wrong dimension");
  return action_matrix(hp, integral, comod, h) * v;
}

InducedComodule action_to_coaction(const HopfPresentation& hp,
                                   const IntegralFunctional& integral,
                                   const std::vector<Matrix>& action_of_basis,
                                   const Vector& generator) {
  (void)integral;
  const int n = hp.dim();
  if (static_cast<int>(action_of_basis.size()) != n)
    throw ValidationError("need one action matrix per basis element");
  const int d = static_cast<int>(generator.size());

  Matrix reach(d, n);  // column k = b_k * generator
  for (int k = 0; k < n; ++k) {
    if (action_of_basis[k].rows() != d || action_of_basis[k].cols() != d)
      throw ValidationError("action matrices have inconsistent dimensions");
    reach.col(k) = action_of_basis[k] * generator;
  }
  const auto cod = reach.completeOrthogonalDecomposition();

  std::vector<Vector> preimages(d);
  for (int i = 0; i < d; ++i) {
    const Vector target = Vector::Unit(d, i);
    preimages[i] = cod.solve(target);
    if (max_abs(Vector(reach * preimages[i] - target)) > kSolveTol)
      throw ValidationError("generator is not cyclic for the action");
  }

  auto build = [&](bool antipode_leg) {
    ComodulePresentation comod;
    comod.dim = d;
    comod.coeff.assign(static_cast<std::size_t>(d) * d, Vector::Zero(n));
    for (const auto& t : hp.coproduct) {
      for (int i = 0; i < d; ++i) {
        const Complex fk = preimages[i](t.a);
        if (fk == Complex(0.0)) continue;
        const Vector leg = antipode_leg ? Vector(hp.antipode.col(t.c))
                                        : Vector(Vector::Unit(n, t.c));
        for (int j = 0; j < d; ++j)
          comod.a(i, j) += fk * t.value * reach(j, t.b) * leg;
      }
    }
    return comod;
  };

  auto axiom_residual = [&](const ComodulePresentation& comod) {
    const auto [counit_res, coproduct_res] = comodule_residuals(hp, comod);
    return std::max(counit_res, coproduct_res);
  };

  InducedComodule out;
  out.comod = build(false);
  out.used_antipode_leg = false;
  out.axiom_residual = axiom_residual(out.comod);
  if (out.axiom_residual > kAxiomTol) {
    ComodulePresentation twisted = build(true);
    const double twisted_residual = axiom_residual(twisted);
    if (twisted_residual > kAxiomTol)
      throw ValidationError("induced coaction fails the comodule axioms");
    out.comod = std::move(twisted);
    out.used_antipode_leg = true;
    out.axiom_residual = twisted_residual;
  }
  return out;
}

// -- file format ----------------------------------------------------------------------------

namespace {

std::vector<Triplet> parse_triplets(const nlohmann::json& j, int n,
                                    const std::string& where) {
  if (!j.is_array())
    throw ParseError(where + ": expected an array of triplets");
  std::vector<Triplet> out;
  for (const auto& entry : j) {
    if (!entry.is_array() || entry.size() != 4 ||
        !entry[0].is_number_integer() || !entry[1].is_number_integer() ||
        !entry[2].is_number_integer())
      throw ParseError(where + ": triplets must be [a, b, c, [re, im]]");
    Triplet t;
    t.a = entry[0].get<int>();
    t.b = entry[1].get<int>();
    t.c = entry[2].get<int>();
    t.value = detail::json_to_complex(entry[3], where);
    if (t.a < 0 || t.a >= n || t.b < 0 || t.b >= n || t.c < 0 || t.c >= n)
      throw ParseError(where + ": triplet index out of range");
    out.push_back(t);
  }
  return out;
}

nlohmann::json triplets_to_json(std::vector<Triplet> triplets) {
  std::sort(triplets.begin(), triplets.end(),
            [](const Triplet& x, const Triplet& y) {
              return std::tie(x.a, x.b, x.c) < std::tie(y.a, y.b, y.c);
            });
  nlohmann::json out = nlohmann::json::array();
  for (const auto& t : triplets)
    out.push_back({t.a, t.b, t.c, detail::complex_to_json(t.value)});
  return out;
}

}  // namespace

HopfPresentation parse_hopf(const std::string& text) {
  nlohmann::json doc = detail::parse_document(text, "cqg-hopf/1");
  HopfPresentation hp;
  if (!doc.contains("basis") || !doc["basis"].is_array())
    throw ParseError("hopf document needs a \"basis\" array");
  for (const auto& b : doc["basis"]) {
    if (!b.is_string()) throw ParseError("basis labels must be strings");
    hp.basis.push_back(b.get<std::string>());
  }
  const int n = hp.dim();
  for (const char* key : {"unit", "m", "delta", "epsilon", "antipode", "star"})
    if (!doc.contains(key))
      throw ParseError(std::string("hopf document needs \"") + key + "\"");
  hp.unit = detail::json_to_vector(doc["unit"], "unit");
  hp.counit = detail::json_to_vector(doc["epsilon"], "epsilon");
  hp.product = parse_triplets(doc["m"], n, "m");
  hp.coproduct = parse_triplets(doc["delta"], n, "delta");
  hp.antipode = detail::json_to_matrix(doc["antipode"], "antipode");
  hp.star = detail::json_to_matrix(doc["star"], "star");
  if (hp.unit.size() != n || hp.counit.size() != n || hp.antipode.rows() != n ||
      hp.antipode.cols() != n || hp.star.rows() != n || hp.star.cols() != n)
    throw ParseError("hopf document tensor shapes are inconsistent");
  return hp;
}

HopfPresentation load_hopf(const std::string& text) {
  HopfPresentation hp = parse_hopf(text);
  const Report verdict = validate_hopf(hp);
  if (!verdict.passed()) {
    const CheckItem* f = verdict.first_failure();
    throw ValidationError("invalid hopf presentation: " +
                          (f ? f->name : "unknown"));
  }
  return hp;
}

std::string save_hopf(const HopfPresentation& hp) {
  nlohmann::json doc = {
      {"format", "cqg-hopf/1"},
      {"basis", hp.basis},
      {"unit", detail::vector_to_json(hp.unit)},
      {"m", triplets_to_json(hp.product)},
      {"delta", triplets_to_json(hp.coproduct)},
      {"epsilon", detail::vector_to_json(hp.counit)},
      {"antipode", detail::matrix_to_json(hp.antipode)},
      {"star", detail::matrix_to_json(hp.star)},
  };
  return doc.dump(2) + "\n";
}

}  // namespace cqg
