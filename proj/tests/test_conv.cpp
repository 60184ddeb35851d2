#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "cqg/analysis.hpp"
#include "cqg/conv.hpp"
#include "cqg/model.hpp"
#include "cqg/suites.hpp"
#include "cqg/types.hpp"

using namespace cqg;

namespace {

InstanceSpec scalar_catalogue() {
  std::vector<BlockSpec> blocks;
  for (const char* label : {"0", "a", "b"})
    blocks.push_back({label, 1, Matrix::Identity(1, 1), label});
  return InstanceSpec(std::move(blocks));
}

ConvElement scalar_element(Complex c0, Complex ca, Complex cb) {
  ConvElement f;
  f.set("0", Matrix::Constant(1, 1, c0));
  f.set("a", Matrix::Constant(1, 1, ca));
  f.set("b", Matrix::Constant(1, 1, cb));
  return f;
}

double distance(const ConvElement& f, const ConvElement& g) {
  return max_entry_distance(f, g);
}

}  // namespace

TEST_CASE("scalar blocks multiply componentwise") {
  InstanceSpec spec = scalar_catalogue();
  REQUIRE(validate_instance(spec).passed());

  ConvElement f = scalar_element(2, Complex(0, 1), -1);
  ConvElement g = scalar_element(3, Complex(0, 1), 5);
  ConvElement fg = convolve(spec, f, g);
  CHECK(distance(fg, scalar_element(6, -1, -5)) < 1e-15);

  // The full-window unit is 1 in every block and star conjugates.
  ConvElement e = approximate_unit(spec, full_window(spec));
  CHECK(distance(e, scalar_element(1, 1, 1)) < 1e-15);
  CHECK(distance(convolve(spec, e, f), f) < 1e-15);
  CHECK(distance(star(spec, f), scalar_element(2, Complex(0, -1), -1)) <
        1e-15);
}

TEST_CASE("block convolution matches hand-computed values") {
  const double q = 0.5;
  Matrix weight(2, 2);
  weight << q, 0, 0, 1.0 / q;  // trace 2.5
  InstanceSpec spec({BlockSpec{"0", 1, Matrix::Identity(1, 1), "0"},
                     BlockSpec{"a", 2, weight, "a"}});

  ConvElement f, g;
  Matrix mf(2, 2), mg(2, 2);
  mf << 1, 2, 3, 4;
  mg << 5, 6, 7, 8;
  f.set("a", mf);
  g.set("a", mg);

  Matrix expected(2, 2);
  expected << 12.2, 14.0, 25.4, 29.2;  // (mf diag(.5,2) mg) / 2.5
  CHECK(max_abs(Matrix(*convolve(spec, f, g).find("a") - expected)) < 1e-14);

  // Unit of the block: tr(Q) Q^{-1}.
  Matrix unit_block(2, 2);
  unit_block << 5.0, 0, 0, 1.25;
  ConvElement e = approximate_unit(spec, {"0", "a"});
  CHECK(max_abs(Matrix(*e.find("a") - unit_block)) < 1e-14);
  CHECK(distance(convolve(spec, e, f), f) < 1e-13);
  CHECK(distance(convolve(spec, f, e), f) < 1e-13);
}

TEST_CASE("star is a conjugate-linear anti-involution") {
  const double q = 0.5;
  Matrix weight(2, 2);
  weight << q, 0, 0, 1.0 / q;
  InstanceSpec spec({BlockSpec{"0", 1, Matrix::Identity(1, 1), "0"},
                     BlockSpec{"a", 2, weight, "a"}});

  ConvElement f, g;
  Matrix mf(2, 2), mg(2, 2);
  mf << Complex(1, 2), Complex(3, -1), Complex(0, 4), Complex(-2, 0);
  mg << Complex(2, 2), 1, Complex(0, -3), Complex(5, 1);
  f.set("a", mf);
  g.set("a", mg);

  // Q F^dagger Q^{-1} entrywise: diagonal conjugated, corners scaled by q^2.
  Matrix expected(2, 2);
  expected << std::conj(mf(0, 0)), q * q * std::conj(mf(1, 0)),
      std::conj(mf(0, 1)) / (q * q), std::conj(mf(1, 1));
  CHECK(max_abs(Matrix(*star(spec, f).find("a") - expected)) < 1e-13);

  CHECK(distance(star(spec, star(spec, f)), f) < 1e-13);
  CHECK(distance(star(spec, convolve(spec, f, g)),
                 convolve(spec, star(spec, g), star(spec, f))) < 1e-13);

  const Complex a(2, -1), b(0, 3);
  CHECK(distance(star(spec, axpy(a, f, b, g)),
                 axpy(std::conj(a), star(spec, f), std::conj(b),
                      star(spec, g))) < 1e-13);

  // Under the block representation, star becomes the adjoint.
  CHECK(max_abs(Matrix(represent(spec, star(spec, f), "a") -
                       represent(spec, f, "a").adjoint())) < 1e-13);
}

TEST_CASE("convolution is associative, bilinear and support-local") {
  InstanceSpec spec = synthetic_instance(0.9);
  ConvElement f = random_element(spec, full_window(spec), 5);
  ConvElement g = random_element(spec, full_window(spec), 6);
  ConvElement h = random_element(spec, full_window(spec), 7);

  CHECK(distance(convolve(spec, convolve(spec, f, g), h),
                 convolve(spec, f, convolve(spec, g, h))) < 1e-12);

  const Complex a(0.5, -0.25);
  CHECK(distance(convolve(spec, axpy(a, f, 1.0, g), h),
                 axpy(a, convolve(spec, f, h), 1.0, convolve(spec, g, h))) <
        1e-12);

  ConvElement left = random_element(spec, {"qa"}, 8);
  ConvElement right = random_element(spec, {"qb", "s1"}, 9);
  CHECK(convolve(spec, left, right).empty());

  ConvElement wrong;
  wrong.set("qa", Matrix::Identity(3, 3));
  CHECK_THROWS_AS(convolve(spec, wrong, f), ValidationError);
}

TEST_CASE("the representation is a block isomorphism") {
  InstanceSpec spec = synthetic_instance(0.5);
  ConvElement f = random_element(spec, full_window(spec), 21);
  ConvElement g = random_element(spec, full_window(spec), 22);

  for (const auto& b : spec.blocks()) {
    CHECK(max_abs(Matrix(represent(spec, convolve(spec, f, g), b.label) -
                         represent(spec, f, b.label) *
                             represent(spec, g, b.label))) < 1e-12);
  }
  CHECK(represent(spec, ConvElement{}, "s1").isZero(0.0));

  // Round trip through arbitrary block targets.
  std::map<std::string, Matrix> targets;
  targets["qa"] = (Matrix(2, 2) << 1, Complex(0, 2), -3, 4).finished();
  targets["s1"] = Matrix::Identity(3, 3) * Complex(0, 1);
  ConvElement lifted = element_from_block_matrices(spec, targets);
  for (const auto& [label, m] : targets)
    CHECK(max_abs(Matrix(represent(spec, lifted, label) - m)) < 1e-13);
  ConvElement back = element_from_block_matrices(
      spec, {{"qa", represent(spec, f, "qa")},
             {"qb", represent(spec, f, "qb")}});
  CHECK(distance(back, project(f, {"qa", "qb"})) < 1e-12);

  // The dual counit reads off the scalar unit block.
  CHECK(counit_star(f) == represent(spec, f, "0")(0, 0));
  CHECK(counit_star(ConvElement{}) == Complex(0, 0));
}

TEST_CASE("module action") {
  InstanceSpec spec = synthetic_instance(0.9);
  ConvElement f = random_element(spec, full_window(spec), 31);
  ConvElement g = random_element(spec, full_window(spec), 32);

  ModuleVector v{"s1", Vector::Zero(3)};
  v.coords << 1, Complex(0, 1), -2;

  ModuleVector fv = act(spec, f, v);
  CHECK(fv.label == "s1");
  CHECK(max_abs(Vector(fv.coords - represent(spec, f, "s1") * v.coords)) <
        1e-13);

  ModuleVector fgv = act(spec, convolve(spec, f, g), v);
  ModuleVector f_gv = act(spec, f, act(spec, g, v));
  CHECK(max_abs(Vector(fgv.coords - f_gv.coords)) < 1e-12);

  ModuleVector ev = act(spec, approximate_unit(spec, {"0", "s1"}), v);
  CHECK(max_abs(Vector(ev.coords - v.coords)) < 1e-12);
}

TEST_CASE("approximate unit acts as projection onto the window") {
  InstanceSpec spec = synthetic_instance(0.5);
  const TruncationWindow K = {"0", "qa", "qb"};
  ConvElement e = approximate_unit(spec, K);
  ConvElement f = random_element(spec, full_window(spec), 77);

  CHECK(distance(convolve(spec, e, f), project(f, K)) < 1e-12);
  CHECK(distance(convolve(spec, f, e), project(f, K)) < 1e-12);
  CHECK(counit_star(e) == Complex(1, 0));
  CHECK(distance(convolve(spec, e, star(spec, e)), e) < 1e-12);
  CHECK(e.support() == std::set<std::string>(K.begin(), K.end()));
}

TEST_CASE("approximate unit report over a filtration") {
  InstanceSpec spec = synthetic_instance(0.9);
  Filtration chain = {{"0"},
                      {"0", "i2"},
                      {"0", "i2", "qa", "qb"},
                      {"0", "i2", "qa", "qb", "s1"}};
  Report ok = check_approximate_unit(spec, chain, 4, 100);
  CHECK(ok.passed());

  Filtration stalled = {{"0"}, {"0"}};
  Report bad = check_approximate_unit(spec, stalled, 2, 100);
  CHECK_FALSE(bad.passed());
}

TEST_CASE("intertwiner spaces have the dimensions Schur's lemma predicts") {
  InstanceSpec spec = synthetic_instance(0.9);

  IntertwinerBasis self = intertwiner_space(spec, {{"qa", 1}}, {{"qa", 1}});
  CHECK(self.maps.size() == 1);
  CHECK(self.residual < 1e-10);

  IntertwinerBasis cross = intertwiner_space(spec, {{"qa", 1}}, {{"s1", 1}});
  CHECK(cross.maps.empty());

  // Hom(2a + b, a + 3b) has dimension 2*1 + 1*3 = 5.
  IntertwinerBasis mixed = intertwiner_space(
      spec, {{"qa", 2}, {"s1", 1}}, {{"qa", 1}, {"s1", 3}});
  CHECK(mixed.maps.size() == 5);
  CHECK(mixed.residual < 1e-10);

  // Basis maps are orthonormal in the Hilbert-Schmidt pairing and commute
  // with the representation of random elements.
  for (std::size_t i = 0; i < mixed.maps.size(); ++i)
    for (std::size_t j = 0; j < mixed.maps.size(); ++j) {
      const Complex pair = (mixed.maps[j].adjoint() * mixed.maps[i]).trace();
      CHECK(std::abs(pair - (i == j ? 1.0 : 0.0)) < 1e-10);
    }
  ConvElement f = random_element(spec, {"qa", "s1"}, 55);
  const Matrix ps = representation_on_sum(spec, mixed.source, f);
  const Matrix pt = representation_on_sum(spec, mixed.target, f);
  for (const Matrix& t : mixed.maps)
    CHECK(max_abs(Matrix(pt * t - t * ps)) < 1e-10);
}

TEST_CASE("direct sum representation is block diagonal") {
  InstanceSpec spec = synthetic_instance(0.5);
  MultiplicityVector mult = {{"qa", 2}, {"s1", 1}};
  CHECK(sum_dimension(spec, mult) == 7);

  ConvElement f = random_element(spec, full_window(spec), 91);
  Matrix big = representation_on_sum(spec, mult, f);
  REQUIRE(big.rows() == 7);

  Matrix expected = Matrix::Zero(7, 7);
  const Matrix pa = represent(spec, f, "qa");
  const Matrix ps = represent(spec, f, "s1");
  expected.block(0, 0, 2, 2) = pa;
  expected.block(2, 2, 2, 2) = pa;
  expected.block(4, 4, 3, 3) = ps;
  CHECK(max_abs(Matrix(big - expected)) == 0.0);
}
