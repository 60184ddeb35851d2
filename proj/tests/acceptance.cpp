// Acceptance harness: verifies the headline guarantees of the block
// convolution algebra end to end, one line of output per criterion.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cqg/analysis.hpp"
#include "cqg/cli.hpp"
#include "cqg/conv.hpp"
#include "cqg/group.hpp"
#include "cqg/hopf.hpp"
#include "cqg/model.hpp"
#include "cqg/types.hpp"

using namespace cqg;
namespace fs = std::filesystem;

namespace {

// -- deterministic random data -------------------------------------------------

double unit_double(std::mt19937_64& rng) {
  return 2.0 * ((rng() >> 11) * 0x1.0p-53) - 1.0;
}

Vector random_function(int n, std::mt19937_64& rng) {
  Vector f(n);
  for (int x = 0; x < n; ++x) {
    const double re = unit_double(rng);
    const double im = unit_double(rng);
    f(x) = Complex(re, im);
  }
  return f;
}

double group_l2(const Vector& f) {
  return std::sqrt(f.squaredNorm() / static_cast<double>(f.size()));
}

// Catalogue with the deformed weights exercised by the associativity and
// norm criteria: identity, diag(1/q, q) and diag(1/q^2, 1, q^2).
InstanceSpec deformed_instance(double q) {
  Matrix w2(2, 2), w3(3, 3);
  w2 << 1.0 / q, 0, 0, q;
  w3 = Matrix::Zero(3, 3);
  w3(0, 0) = 1.0 / (q * q);
  w3(1, 1) = 1.0;
  w3(2, 2) = q * q;
  return InstanceSpec({BlockSpec{"0", 1, Matrix::Identity(1, 1), "0"},
                       BlockSpec{"u2", 2, Matrix::Identity(2, 2), "u2"},
                       BlockSpec{"w2", 2, w2, "w2"},
                       BlockSpec{"w3", 3, w3, "w3"}});
}

struct GroupOracle {
  FiniteGroup fg;
  HopfPresentation hp;
  IntegralFunctional integral;
  InstanceSpec spec;
};

GroupOracle make_oracle(const std::string& name) {
  GroupOracle o{builtin_group(name), {}, {}, {}};
  o.hp = build_function_hopf(o.fg.table);
  o.integral = compute_integral(o.hp);
  o.spec = instance_from_group(o.fg);
  return o;
}

// -- reporting -------------------------------------------------------------------

int criteria_run = 0;
int criteria_passed = 0;

void record(const std::string& name, double worst, double tol, bool pass) {
  ++criteria_run;
  if (pass) ++criteria_passed;
  std::printf("%s  %2d. %-58s  worst %9.3e  tol %7.1e\n",
              pass ? "PASS" : "FAIL", criteria_run, name.c_str(), worst, tol);
  std::fflush(stdout);
}

void record_residual(const std::string& name, double worst, double tol) {
  record(name, worst, tol, worst <= tol);
}

// -- criteria ---------------------------------------------------------------------

void criterion_fourier_convolution() {
  double worst = 0.0;
  std::mt19937_64 rng(101);
  for (const std::string& name : {"z6", "s3", "d4"}) {
    const GroupOracle o = make_oracle(name);
    const int n = o.fg.table.size();

    for (int trial = 0; trial < 500; ++trial) {
      const Vector f = random_function(n, rng);
      const Vector g = random_function(n, rng);
      const ConvElement lhs =
          fourier(o.fg, group_convolution(o.fg.table, f, g));
      const ConvElement rhs =
          convolve(o.spec, fourier(o.fg, f), fourier(o.fg, g));
      const double err = l2_norm(o.spec, sub(lhs, rhs)) /
                         (1.0 + group_l2(f) * group_l2(g));
      worst = std::max(worst, err);
    }
  }
  // The structure-constant engine agrees with the group-side convolution on
  // every pair of point masses.
  double basis_worst = 0.0;
  for (const std::string& name : {"z6", "s3", "d4"}) {
    const GroupOracle o = make_oracle(name);
    const int n = o.fg.table.size();
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        const Vector direct = conv_abstract(o.hp, o.integral,
                                            Vector::Unit(n, a),
                                            Vector::Unit(n, b));
        const Vector classical = group_convolution(
            o.fg.table, Vector::Unit(n, a), Vector::Unit(n, b));
        basis_worst = std::max(basis_worst,
                               max_abs(Vector(direct - classical)));
      }
  }
  record("fourier transform carries convolution to blocks",
         std::max(worst, basis_worst), 1e-10,
         worst <= 1e-10 && basis_worst <= 1e-13);
}

void criterion_associativity() {
  double worst = 0.0;
  std::uint64_t seed = 9000;
  for (double q : {0.5, 0.9}) {
    const InstanceSpec spec = deformed_instance(q);
    const TruncationWindow window = full_window(spec);
    for (int trial = 0; trial < 1000; ++trial) {
      const ConvElement f = random_element(spec, window, seed++);
      const ConvElement g = random_element(spec, window, seed++);
      const ConvElement h = random_element(spec, window, seed++);
      worst = std::max(
          worst,
          max_entry_distance(convolve(spec, convolve(spec, f, g), h),
                             convolve(spec, f, convolve(spec, g, h))));
    }
  }
  record_residual("block convolution is associative", worst, 1e-12);
}

void criterion_norm_inequalities() {
  double worst_slack = 0.0;    // most negative slack, flipped to a residual
  double worst_identity = 0.0;
  std::vector<InstanceSpec> catalogues = {deformed_instance(0.5),
                                          deformed_instance(0.9),
                                          instance_from_group(
                                              builtin_group("s3"))};
  std::uint64_t seed = 40;
  for (const InstanceSpec& spec : catalogues) {
    const TruncationWindow window = full_window(spec);
    for (int trial = 0; trial < 1000; ++trial) {
      const ConvElement f = random_element(spec, window, seed++);
      const ConvElement g = random_element(spec, window, seed++);
      const ConvElement fg = convolve(spec, f, g);

      const double l2_f = l2_norm(spec, f), l2_g = l2_norm(spec, g);
      const double cs_f = cstar_norm(spec, f);
      worst_slack = std::max(worst_slack,
                             l2_norm(spec, fg) - l2_f * l2_g);
      worst_slack = std::max(worst_slack, cs_f - l2_f);

      const double lhs = cstar_norm(spec, convolve(spec, star(spec, f), f));
      worst_identity =
          std::max(worst_identity,
                   std::abs(lhs - cs_f * cs_f) / std::max(cs_f * cs_f, 1.0));
    }
  }
  record("norms: submultiplicative, C* below L2, C*-identity",
         std::max(worst_slack, worst_identity),
         1e-10, worst_slack <= 1e-12 && worst_identity <= 1e-10);
}

void criterion_regular_representation() {
  double worst = 0.0;
  std::mt19937_64 rng(7);
  for (const std::string& name : {"s3", "d4"}) {
    const GroupOracle o = make_oracle(name);
    const int n = o.fg.table.size();
    for (int trial = 0; trial < 200; ++trial) {
      const Vector f = random_function(n, rng);
      const double block_norm = cstar_norm(o.spec, fourier(o.fg, f));
      const double matrix_norm =
          operator_norm(left_convolution_matrix(o.fg.table, f));
      worst = std::max(worst, std::abs(block_norm - matrix_norm));
    }
  }
  record_residual("C* norm equals the regular representation norm", worst,
                  1e-8);
}

void criterion_dual_coproduct() {
  double worst_structure = 0.0;  // coassociativity + counit laws, basis
  double worst_hom = 0.0;        // multiplicativity on random pairs
  double worst_antipode = 0.0;   // full-window antipode identity
  std::mt19937_64 rng(501);

  for (const std::string& name : {"z6", "s3"}) {
    const GroupOracle o = make_oracle(name);
    const int n = o.fg.table.size();

    std::vector<Matrix> deltas;
    for (int a = 0; a < n; ++a)
      deltas.push_back(coproduct_star(o.hp, o.integral, Vector::Unit(n, a)));

    // Coassociativity and both counit laws on every basis element.
    for (int a = 0; a < n; ++a) {
      const Matrix& c = deltas[a];
      for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
          for (int r = 0; r < n; ++r) {
            Complex left = 0, right = 0;
            for (int k = 0; k < n; ++k) left += c(k, r) * deltas[k](p, q);
            for (int l = 0; l < n; ++l) right += c(p, l) * deltas[l](q, r);
            worst_structure = std::max(worst_structure,
                                       std::abs(left - right));
          }
      Vector left_counit = Vector::Zero(n), right_counit = Vector::Zero(n);
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          left_counit(l) += c(k, l) * o.integral.values(k);
          right_counit(k) += c(k, l) * o.integral.values(l);
        }
      worst_structure = std::max(
          worst_structure,
          max_abs(Vector(left_counit - Vector::Unit(n, a))));
      worst_structure = std::max(
          worst_structure,
          max_abs(Vector(right_counit - Vector::Unit(n, a))));
    }

    // Point-mass convolution table for the tensor-square product.
    std::vector<std::vector<Vector>> table(n, std::vector<Vector>(n));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        table[a][b] = conv_abstract(o.hp, o.integral, Vector::Unit(n, a),
                                    Vector::Unit(n, b));

    for (int trial = 0; trial < 200; ++trial) {
      const Vector f = random_function(n, rng);
      const Vector g = random_function(n, rng);
      const Matrix lhs = coproduct_star(
          o.hp, o.integral, conv_abstract(o.hp, o.integral, f, g));
      const Matrix cf = coproduct_star(o.hp, o.integral, f);
      const Matrix cg = coproduct_star(o.hp, o.integral, g);

      Matrix rhs = Matrix::Zero(n, n);
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          for (int kp = 0; kp < n; ++kp)
            for (int lp = 0; lp < n; ++lp) {
              const Complex w = cf(k, l) * cg(kp, lp);
              if (std::abs(w) < 1e-14) continue;
              rhs += w * (table[k][kp] * table[l][lp].transpose());
            }
      worst_hom = std::max(worst_hom, max_abs(Matrix(lhs - rhs)));
    }

    // Antipode identity over the full window.
    const Matrix eye = Matrix::Identity(n, n);
    for (int a = 0; a < n; ++a)
      worst_antipode = std::max(
          worst_antipode,
          approximate_antipode_residual(o.hp, o.integral, eye, eye,
                                        Vector::Unit(n, a)));
    for (int trial = 0; trial < 50; ++trial)
      worst_antipode = std::max(
          worst_antipode,
          approximate_antipode_residual(o.hp, o.integral, eye, eye,
                                        random_function(n, rng)));
  }

  record("dual coproduct: laws, homomorphism, antipode identity",
         std::max({worst_structure, worst_hom, worst_antipode}), 1e-10,
         worst_structure <= 1e-12 && worst_hom <= 1e-10 &&
             worst_antipode <= 1e-10);
}

void criterion_reflection() {
  double worst_identity = 0.0;   // Q = I and the trace identity
  double worst_pairing = 0.0;    // integral orthogonality contractions

  for (const std::string& name : builtin_group_names()) {
    const GroupOracle o = make_oracle(name);
    const auto [qf, pf] = q_p_functionals(o.hp, o.integral);
    for (const Irrep& ir : o.fg.irreps) {
      const ComodulePresentation comod = comodule_from_irrep(o.fg, ir.label);
      const Matrix q = reflection_matrix(o.hp, o.integral, comod);
      worst_identity = std::max(
          worst_identity,
          max_abs(Matrix(q - Matrix::Identity(ir.dim, ir.dim))));

      Vector character = Vector::Zero(o.hp.dim());
      for (int i = 0; i < ir.dim; ++i) character += comod.a(i, i);
      worst_identity = std::max(
          worst_identity,
          std::abs(apply_functional(qf, character) -
                   Complex(static_cast<double>(ir.dim), 0.0)));
    }
  }

  // Orthogonality of the integral against antipode twists, contracted
  // directly through the structure constants on the planar block.
  {
    const GroupOracle o = make_oracle("s3");
    const ComodulePresentation comod = comodule_from_irrep(o.fg, "std");
    const Matrix q = reflection_matrix(o.hp, o.integral, comod);
    const Matrix qinv = q.inverse();
    const int d = comod.dim;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k)
          for (int l = 0; l < d; ++l) {
            const Complex first = apply_functional(
                o.integral.values,
                hopf_product(o.hp, comod.a(i, j),
                             hopf_antipode(o.hp, comod.a(k, l))));
            const Complex first_expected =
                (j == k) ? q(l, i) / q.trace() : Complex(0, 0);
            worst_pairing = std::max(worst_pairing,
                                     std::abs(first - first_expected));

            const Complex second = apply_functional(
                o.integral.values,
                hopf_product(o.hp, hopf_antipode(o.hp, comod.a(i, j)),
                             comod.a(k, l)));
            const Complex second_expected =
                (l == i) ? qinv(j, k) / qinv.trace() : Complex(0, 0);
            worst_pairing = std::max(worst_pairing,
                                     std::abs(second - second_expected));
          }
  }

  record("reflection matrices and integral orthogonality",
         std::max(worst_identity, worst_pairing), 1e-10,
         worst_identity <= 1e-12 && worst_pairing <= 1e-10);
}

void criterion_approximate_unit() {
  const InstanceSpec spec = deformed_instance(0.5);
  const Filtration chain = {{"0"},
                            {"0", "u2"},
                            {"0", "u2", "w2"},
                            {"0", "u2", "w2", "w3"}};
  double worst = 0.0;
  bool pass = true;

  const ConvElement full_f = random_element(spec, full_window(spec), 600);
  const ConvElement small_f = random_element(spec, {"0", "u2"}, 601);
  for (const ConvElement* f : {&full_f, &small_f}) {
    double prev_l2 = std::numeric_limits<double>::infinity();
    double prev_cstar = std::numeric_limits<double>::infinity();
    for (const TruncationWindow& window : chain) {
      const auto [tail_l2, tail_cstar] = truncation_tail(spec, *f, window);
      pass = pass && tail_l2 <= prev_l2 && tail_cstar <= prev_cstar;
      prev_l2 = tail_l2;
      prev_cstar = tail_cstar;

      bool covers = true;
      for (const auto& label : f->support()) covers = covers && window.count(label);
      if (covers) pass = pass && tail_l2 == 0.0 && tail_cstar == 0.0;
    }
  }

  for (const TruncationWindow& window : chain) {
    const ConvElement e = approximate_unit(spec, window);
    worst = std::max(worst, std::abs(counit_star(e) - Complex(1, 0)));
    worst = std::max(
        worst,
        max_entry_distance(convolve(spec, e, star(spec, e)), e));
  }
  record("approximate unit: monotone tails, idempotent, counit 1", worst,
         1e-12, pass && worst <= 1e-12);
}

void criterion_category() {
  // Intertwiner dimensions against the multiplicity pairing.
  const InstanceSpec spec = deformed_instance(0.9);
  const std::vector<std::string> labels = spec.labels();
  std::mt19937_64 rng(77);
  bool dims_ok = true;
  double worst = 0.0;

  for (int trial = 0; trial < 20; ++trial) {
    MultiplicityVector source, target;
    int predicted = 0;
    for (const auto& label : labels) {
      const int ms = static_cast<int>(rng() % 3);
      const int mt = static_cast<int>(rng() % 3);
      if (ms) source[label] = ms;
      if (mt) target[label] = mt;
      predicted += ms * mt;
    }
    const IntertwinerBasis basis = intertwiner_space(spec, source, target);
    dims_ok = dims_ok &&
              static_cast<int>(basis.maps.size()) == predicted;
    worst = std::max(worst, basis.residual);
  }

  // Round trip: coefficients -> action matrices -> coefficients.
  const GroupOracle o = make_oracle("s3");
  const ComodulePresentation planar = comodule_from_irrep(o.fg, "std");
  std::vector<Matrix> actions;
  for (int x = 0; x < o.hp.dim(); ++x)
    actions.push_back(action_matrix(o.hp, o.integral, planar,
                                    Vector::Unit(o.hp.dim(), x)));
  const InducedComodule induced =
      action_to_coaction(o.hp, o.integral, actions, Vector::Ones(planar.dim));
  double round_trip = induced.axiom_residual;
  for (int i = 0; i < planar.dim; ++i)
    for (int j = 0; j < planar.dim; ++j)
      round_trip = std::max(
          round_trip,
          max_abs(Vector(induced.comod.a(i, j) - planar.a(i, j))));

  record("intertwiner dimensions and coaction round trip",
         std::max(worst, round_trip), 1e-10,
         dims_ok && worst <= 1e-10 && round_trip <= 1e-10);
}

void criterion_gram_condition() {
  double worst = 0.0;
  for (const std::string& name : builtin_group_names()) {
    const GroupOracle o = make_oracle(name);
    worst = std::max(worst, o.integral.gram_condition);
  }
  record("duality Gram matrices are well conditioned", worst, 1e6,
         worst < 1e6);
}

void criterion_fault_sensitivity() {
  const fs::path dir = fs::temp_directory_path() / "cqg-acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  auto write = [&](const std::string& name, const std::string& text) {
    const fs::path p = dir / name;
    std::ofstream f(p, std::ios::binary);
    f << text;
    return p.string();
  };
  auto exit_code = [](std::vector<std::string> args) {
    std::ostringstream out, err;
    return dispatch(std::move(args), out, err);
  };

  int detected = 0, injected = 0;
  auto expect_detected = [&](const std::string& path) {
    ++injected;
    if (exit_code({"validate", path}) == 1) ++detected;
  };

  // Catalogue with one weight entry nudged off the Hermitian manifold.
  {
    InstanceSpec spec = deformed_instance(0.9);
    std::vector<BlockSpec> blocks(spec.blocks().begin(), spec.blocks().end());
    for (auto& b : blocks)
      if (b.label == "w2") b.Q(0, 1) += 1e-3;
    expect_detected(write("instance.json",
                          save_instance(InstanceSpec(std::move(blocks)))));
  }

  // One structure constant of each Hopf tensor.
  const HopfPresentation clean = build_function_hopf(builtin_group("z3").table);
  {
    HopfPresentation hp = clean;
    hp.product[0].value += 1e-3;
    expect_detected(write("hopf_m.json", save_hopf(hp)));
  }
  {
    HopfPresentation hp = clean;
    hp.coproduct[0].value += 1e-3;
    expect_detected(write("hopf_delta.json", save_hopf(hp)));
  }
  {
    HopfPresentation hp = clean;
    hp.antipode(0, 1) += 1e-3;
    expect_detected(write("hopf_antipode.json", save_hopf(hp)));
  }
  {
    HopfPresentation hp = clean;
    hp.counit(0) += 1e-3;
    expect_detected(write("hopf_epsilon.json", save_hopf(hp)));
  }
  {
    HopfPresentation hp = clean;
    hp.star(0, 1) += 1e-3;
    expect_detected(write("hopf_star.json", save_hopf(hp)));
  }

  // A representation matrix entry and a multiplication table entry.
  {
    FiniteGroup fg = builtin_group("s3");
    for (auto& ir : fg.irreps)
      if (ir.label == "std") ir.rho[3](0, 0) += 1e-3;
    expect_detected(write("group_irrep.json", save_group(fg)));
  }
  {
    FiniteGroup fg = builtin_group("s3");
    fg.table.table[1 * 6 + 2] = fg.table.table[1 * 6 + 3];
    expect_detected(write("group_table.json", save_group(fg)));
  }

  // A corrupted catalogue also fails the full check pipeline.
  {
    InstanceSpec spec = deformed_instance(0.9);
    std::vector<BlockSpec> blocks(spec.blocks().begin(), spec.blocks().end());
    blocks[1].Q(1, 0) += 1e-3;
    const std::string path =
        write("instance_check.json", save_instance(InstanceSpec(blocks)));
    ++injected;
    if (exit_code({"check", "--suite", "core", "--group", "z2", "--samples",
                   "2", "--instance", path, "--state",
                   (dir / "state.json").string()}) == 1)
      ++detected;
  }

  record("single-constant faults are detected", double(injected - detected),
         0.0, detected == injected);
}

}  // namespace

int main() {
  criterion_fourier_convolution();
  criterion_associativity();
  criterion_norm_inequalities();
  criterion_regular_representation();
  criterion_dual_coproduct();
  criterion_reflection();
  criterion_approximate_unit();
  criterion_category();
  criterion_gram_condition();
  criterion_fault_sensitivity();

  std::printf("acceptance: %d/%d criteria passed\n", criteria_passed,
              criteria_run);
  return criteria_passed == criteria_run ? 0 : 1;
}
