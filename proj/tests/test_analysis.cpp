#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <limits>

#include "cqg/analysis.hpp"
#include "cqg/conv.hpp"
#include "cqg/model.hpp"
#include "cqg/suites.hpp"
#include "cqg/types.hpp"

using namespace cqg;

namespace {

// Deterministic dense complex test matrix with a precomputed spectrum.
Matrix reference_matrix() {
  const int n = 5;
  Matrix m(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      m(j, k) = Complex(((j + 1) * (k + 2)) % 7, (3 * j + k * k) % 5);
  return m;
}

}  // namespace

TEST_CASE("singular values match an independently computed spectrum") {
  const Matrix m = reference_matrix();
  const double expected[] = {2.0951294305219697e+01, 8.6490513246122944e+00,
                             5.6119208838515284e+00, 1.9427774851196102e+00,
                             9.8444794529447655e-01};
  RealVector sv = singular_values(m);
  REQUIRE(sv.size() == 5);
  for (int i = 0; i < 5; ++i)
    CHECK(sv(i) == doctest::Approx(expected[i]).epsilon(1e-12));
  CHECK(operator_norm(m) == doctest::Approx(expected[0]).epsilon(1e-12));
  CHECK(condition_number(m) ==
        doctest::Approx(expected[0] / expected[4]).epsilon(1e-11));
  // The squared singular values exhaust the Frobenius mass.
  CHECK(sv.squaredNorm() ==
        doctest::Approx(m.squaredNorm()).epsilon(1e-13));
}

TEST_CASE("operator norm closed forms") {
  Matrix d = Matrix::Zero(3, 3);
  d(0, 0) = Complex(0, -4);
  d(1, 1) = 2.5;
  d(2, 2) = -1.0;
  CHECK(operator_norm(d) == doctest::Approx(4.0).epsilon(1e-13));

  Matrix shear(2, 2);
  shear << 1, 1, 0, 1;
  CHECK(operator_norm(shear) ==
        doctest::Approx((1.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-13));

  // Discrete Fourier matrix: unitary, all singular values 1.
  const int n = 4;
  const double pi = std::acos(-1.0);
  Matrix dft(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      dft(j, k) = std::polar(0.5, -2.0 * pi * j * k / n);
  RealVector sv = singular_values(dft);
  for (int i = 0; i < n; ++i)
    CHECK(sv(i) == doctest::Approx(1.0).epsilon(1e-13));

  CHECK(operator_norm(Matrix::Zero(2, 2)) == 0.0);
  CHECK(operator_norm(Matrix::Constant(1, 1, Complex(0, -3))) ==
        doctest::Approx(3.0));
  CHECK(operator_norm(Complex(0, 2) * reference_matrix()) ==
        doctest::Approx(2.0 * operator_norm(reference_matrix()))
            .epsilon(1e-12));

  CHECK_THROWS_AS(operator_norm(Matrix::Zero(2, 3)), std::invalid_argument);
}

TEST_CASE("condition number") {
  Matrix d = Matrix::Zero(3, 3);
  d(0, 0) = 4;
  d(1, 1) = 2;
  d(2, 2) = 1;
  CHECK(condition_number(d) == doctest::Approx(4.0).epsilon(1e-13));

  Matrix rank1 = Matrix::Zero(2, 2);
  rank1(0, 1) = 7;
  CHECK(condition_number(rank1) ==
        std::numeric_limits<double>::infinity());
}

TEST_CASE("inner product is the weighted trace form") {
  const double q = 0.5;
  Matrix weight(2, 2);
  weight << 1.0 / q, 0, 0, q;
  InstanceSpec spec({BlockSpec{"0", 1, Matrix::Identity(1, 1), "0"},
                     BlockSpec{"a", 2, weight, "a"}});
  REQUIRE(validate_instance(spec).passed());

  ConvElement f, g;
  Matrix mf(2, 2), mg(2, 2);
  mf << Complex(1, 1), 2, 0, Complex(0, -1);
  mg << 3, Complex(0, 1), 1, 0;
  f.set("a", mf);
  g.set("a", mg);

  const Complex expected =
      (mf * weight * mg.adjoint()).trace() / weight.trace();
  CHECK(std::abs(inner_product(spec, f, g) - expected) < 1e-14);

  // Sesquilinear: linear on the left, conjugate-linear on the right.
  const Complex a(2, -3);
  CHECK(std::abs(inner_product(spec, scale(a, f), g) -
                 a * inner_product(spec, f, g)) < 1e-13);
  CHECK(std::abs(inner_product(spec, f, scale(a, g)) -
                 std::conj(a) * inner_product(spec, f, g)) < 1e-13);

  const Complex self = inner_product(spec, f, f);
  CHECK(self.real() > 0.0);
  CHECK(std::abs(self.imag()) < 1e-15);
  CHECK(l2_norm(spec, f) == doctest::Approx(std::sqrt(self.real())));

  // Disjoint supports are orthogonal.
  ConvElement h;
  h.set("0", Matrix::Constant(1, 1, 5.0));
  CHECK(std::abs(inner_product(spec, f, h)) == 0.0);
}

TEST_CASE("unit elements have squared norm tr(Q) tr(Q^-1)") {
  InstanceSpec spec = synthetic_instance(0.5);
  for (const auto& b : spec.blocks()) {
    ConvElement e =
        project(approximate_unit(spec, {"0", b.label}), {b.label});
    const Matrix qinv = b.Q.inverse();
    const double expected = (b.Q.trace() * qinv.trace()).real();
    CHECK(l2_norm(spec, e) * l2_norm(spec, e) ==
          doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("block operator norm of the represented element") {
  InstanceSpec spec = synthetic_instance(0.9);
  ConvElement f;
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 3;
  m(1, 1) = 1;
  f.set("i2", m);  // weight is the identity, pi(f) = m / 2
  CHECK(cstar_norm(spec, f) == doctest::Approx(1.5).epsilon(1e-13));

  f.set("0", Matrix::Constant(1, 1, Complex(0, 9)));
  CHECK(cstar_norm(spec, f) == doctest::Approx(9.0).epsilon(1e-13));

  // Always the supremum over represented blocks.
  ConvElement r = random_element(spec, full_window(spec), 3);
  double sup = 0.0;
  for (const auto& b : spec.blocks())
    sup = std::max(sup, operator_norm(represent(spec, r, b.label)));
  CHECK(cstar_norm(spec, r) == doctest::Approx(sup).epsilon(1e-13));
}

TEST_CASE("truncation tails measure the part outside the window") {
  InstanceSpec spec = synthetic_instance(0.5);
  ConvElement f = random_element(spec, full_window(spec), 17);

  auto [l2_tail, cstar_tail] = truncation_tail(spec, f, {"0", "i2"});
  TruncationWindow complement = {"qa", "qb", "s1"};
  CHECK(l2_tail == doctest::Approx(l2_norm(spec, project(f, complement))));
  CHECK(cstar_tail ==
        doctest::Approx(cstar_norm(spec, project(f, complement))));

  auto [l2_all, cstar_all] = truncation_tail(spec, f, full_window(spec));
  CHECK(l2_all == 0.0);
  CHECK(cstar_all == 0.0);
}

TEST_CASE("norm inequality sampler") {
  InstanceSpec spec = synthetic_instance(0.9);
  NormReport report = check_norm_inequalities(spec, 60, 2026);
  CHECK(report.summary.passed());
  REQUIRE(report.samples.size() == 60);
  for (const NormSample& s : report.samples) {
    CHECK(s.slack_l2_submult >= -1e-12);
    CHECK(s.slack_l2_dominates >= -1e-12);
    CHECK(s.slack_cstar_submult >= -1e-12);
    CHECK(s.rel_cstar_identity <= 1e-10);
    CHECK(s.slack_l2_submult ==
          doctest::Approx(s.l2_f * s.l2_g - s.l2_fg).epsilon(1e-12));
  }
  nlohmann::json doc = report.to_json();
  CHECK(doc["samples"].size() == 60);
  CHECK(doc["summary"]["passed"].get<bool>());
}
