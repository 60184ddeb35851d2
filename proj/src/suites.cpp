#include "cqg/suites.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <utility>

#include "cqg/analysis.hpp"
#include "cqg/conv.hpp"
#include "cqg/group.hpp"
#include "cqg/hopf.hpp"
#include "json_util.hpp"

namespace cqg {

namespace {

constexpr double kExactTol = 1e-12;
constexpr double kSolveTol = 1e-10;
constexpr double kRegularNormTol = 1e-8;
constexpr double kGramConditionBound = 1e6;

struct NamedInstance {
  std::string name;
  InstanceSpec spec;
};

std::vector<NamedInstance> gather_instances(const SuiteConfig& config) {
  std::vector<NamedInstance> out;
  out.push_back({"synthetic", synthetic_instance(1.7)});
  for (const auto& name : config.groups) {
    InstanceSpec spec = instance_from_group(builtin_group(name));
    out.push_back({"group " + name, std::move(spec)});
  }
  for (const auto& path : config.instance_files) {
    // Load before constructing the pair so a parse failure cannot leave a
    // partially initialized aggregate behind (GCC 11 fails to unwind one).
    InstanceSpec spec = load_instance(detail::read_text_file(path));
    out.push_back({path, std::move(spec)});
  }
  return out;
}

Vector random_function(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto draw = [&rng]() {
    return 2.0 * ((rng() >> 11) * 0x1.0p-53) - 1.0;
  };
  Vector v(n);
  for (int i = 0; i < n; ++i) {
    const double re = draw();
    const double im = draw();
    v(i) = Complex(re, im);
  }
  return v;
}

/// {"0"}, then one more label per step, in label order.
Filtration prefix_filtration(const InstanceSpec& spec) {
  Filtration chain;
  TruncationWindow window{"0"};
  chain.push_back(window);
  for (const auto& label : spec.labels()) {
    if (label == "0") continue;
    window.insert(label);
    chain.push_back(window);
  }
  return chain;
}

std::vector<TruncationWindow> prefix_windows(const FiniteGroup& fg) {
  std::vector<std::string> labels;
  for (const auto& ir : fg.irreps) labels.push_back(ir.label);
  std::sort(labels.begin(), labels.end());
  std::vector<TruncationWindow> out;
  TruncationWindow window;
  window.insert("0");
  out.push_back(window);
  for (const auto& label : labels) {
    if (label == "0") continue;
    window.insert(label);
    out.push_back(window);
  }
  return out;
}

/// Like prefix_windows, but every step also pulls in the conjugate block, so
/// each window is closed under duality (what the truncated antipode needs).
std::vector<TruncationWindow> dual_closed_windows(const FiniteGroup& fg) {
  std::vector<std::string> labels;
  for (const auto& ir : fg.irreps) labels.push_back(ir.label);
  std::sort(labels.begin(), labels.end());
  std::vector<TruncationWindow> out;
  TruncationWindow window{"0"};
  out.push_back(window);
  for (const auto& label : labels) {
    if (window.count(label) != 0) continue;
    window.insert(label);
    window.insert(fg.irrep(label).dual);
    out.push_back(window);
  }
  return out;
}

/// Columns are the coefficient functions of every irrep in the window.
Matrix coefficient_span(const FiniteGroup& fg, const TruncationWindow& window) {
  const int n = fg.table.size();
  std::vector<Vector> cols;
  for (const auto& label : window) {
    const Irrep& ir = fg.irrep(label);
    for (int i = 0; i < ir.dim; ++i)
      for (int j = 0; j < ir.dim; ++j) {
        Vector c(n);
        for (int x = 0; x < n; ++x) c(x) = ir.rho[x](j, i);
        cols.push_back(std::move(c));
      }
  }
  Matrix span(n, static_cast<int>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k)
    span.col(static_cast<Eigen::Index>(k)) = cols[k];
  return span;
}

Vector point_mass(int n, int x) { return Vector::Unit(n, x); }

}  // namespace

InstanceSpec synthetic_instance(double q) {
  std::vector<BlockSpec> blocks;
  blocks.push_back({"0", 1, Matrix::Identity(1, 1), "0"});
  blocks.push_back({"i2", 2, Matrix::Identity(2, 2), "i2"});

  Matrix qa = Matrix::Zero(2, 2);
  qa(0, 0) = q;
  qa(1, 1) = 1.0 / q;
  Matrix qb = Matrix::Zero(2, 2);
  qb(0, 0) = 1.0 / q;
  qb(1, 1) = q;
  blocks.push_back({"qa", 2, qa, "qb"});
  blocks.push_back({"qb", 2, qb, "qa"});

  Matrix s1(3, 3);
  s1 << Complex(2.0, 0.0), Complex(0.3, 0.2), Complex(0.0, 0.0),
      Complex(0.3, -0.2), Complex(1.7, 0.0), Complex(0.1, -0.1),
      Complex(0.0, 0.0), Complex(0.1, 0.1), Complex(1.2, 0.0);
  blocks.push_back({"s1", 3, s1, "s1"});

  return InstanceSpec(std::move(blocks));
}

std::vector<std::string> suite_names() {
  return {"core", "hopf", "norms", "oracle"};
}

Report run_suite(const std::string& name, const SuiteConfig& config) {
  if (name == "core") return suite_core(config);
  if (name == "oracle") return suite_oracle(config);
  if (name == "norms") return suite_norms(config);
  if (name == "hopf") return suite_hopf(config);
  if (name == "all") {
    Report report("all suites");
    report.append(suite_core(config));
    report.append(suite_oracle(config));
    report.append(suite_norms(config));
    report.append(suite_hopf(config));
    return report;
  }
  throw ValidationError("unknown suite: " + name);
}

Report suite_core(const SuiteConfig& config) {
  Report report("core algebra");
  std::mt19937_64 master(config.seed);

  for (const auto& [name, spec] : gather_instances(config)) {
    report.require(name + ": catalogue valid",
                   validate_instance(spec).passed());
    const TruncationWindow window = full_window(spec);

    double assoc = 0, bilinear = 0, star_inv = 0, star_anti = 0;
    double rep_mult = 0, rep_star = 0, counit_mult = 0, action_mult = 0;
    const Complex ca(0.5, -0.25), cb(-1.25, 2.0);
    for (int s = 0; s < config.samples; ++s) {
      const ConvElement f = random_element(spec, window, master());
      const ConvElement g = random_element(spec, window, master());
      const ConvElement h = random_element(spec, window, master());
      const ConvElement fg = convolve(spec, f, g);

      assoc = std::max(assoc,
                       max_entry_distance(convolve(spec, fg, h),
                                          convolve(spec, f,
                                                   convolve(spec, g, h))));
      bilinear = std::max(
          bilinear,
          max_entry_distance(convolve(spec, f, axpy(ca, g, cb, h)),
                             axpy(ca, fg, cb, convolve(spec, f, h))));
      star_inv = std::max(star_inv,
                          max_entry_distance(star(spec, star(spec, f)), f));
      star_anti = std::max(
          star_anti,
          max_entry_distance(star(spec, fg),
                             convolve(spec, star(spec, g), star(spec, f))));
      for (const auto& label : spec.labels()) {
        rep_mult = std::max(
            rep_mult, max_abs(Matrix(represent(spec, fg, label) -
                                     represent(spec, f, label) *
                                         represent(spec, g, label))));
        rep_star = std::max(
            rep_star,
            max_abs(Matrix(represent(spec, star(spec, f), label) -
                           represent(spec, f, label).adjoint())));
      }
      counit_mult = std::max(counit_mult,
                             std::abs(counit_star(fg) -
                                      counit_star(f) * counit_star(g)));

      for (const auto& block : spec.blocks()) {
        ModuleVector v{block.label, random_function(block.dim, master())};
        const ModuleVector via_product = act(spec, fg, v);
        const ModuleVector stepwise = act(spec, f, act(spec, g, v));
        action_mult = std::max(
            action_mult,
            max_abs(Vector(via_product.coords - stepwise.coords)));
      }
    }
    report.require_leq(name + ": convolution associative", assoc, config.tol);
    report.require_leq(name + ": convolution bilinear", bilinear, config.tol);
    report.require_leq(name + ": star involutive", star_inv, config.tol);
    report.require_leq(name + ": star reverses products", star_anti,
                       config.tol);
    report.require_leq(name + ": block representation multiplicative",
                       rep_mult, config.tol);
    report.require_leq(name + ": block representation sends star to adjoint",
                       rep_star, config.tol);
    report.require_leq(name + ": zero-block coefficient is a character",
                       counit_mult, config.tol);
    report.require_leq(name + ": module action multiplicative", action_mult,
                       config.tol);

    const ConvElement unit = approximate_unit(spec, window);
    const ConvElement probe = random_element(spec, window, master());
    report.require_leq(
        name + ": full-window unit is two-sided",
        std::max(max_entry_distance(convolve(spec, unit, probe), probe),
                 max_entry_distance(convolve(spec, probe, unit), probe)),
        config.tol);

    report.require(name + ": truncation chain behaves",
                   check_approximate_unit(spec, prefix_filtration(spec),
                                          config.samples, master())
                       .passed());
  }
  return report;
}

Report suite_oracle(const SuiteConfig& config) {
  Report report("finite group oracle");
  std::mt19937_64 master(config.seed);

  for (const auto& name : config.groups) {
    const std::string prefix = "group " + name;
    const FiniteGroup fg = builtin_group(name);
    const GroupTable& table = fg.table;
    const int n = table.size();

    report.require(prefix + ": table axioms", validate_group(table).passed());
    report.require(prefix + ": representation axioms",
                   validate_irreps(fg).passed());

    const HopfPresentation hp = build_function_hopf(table);
    const IntegralFunctional integral = compute_integral(hp);
    const InstanceSpec inst = instance_from_group(fg);
    report.require(prefix + ": block catalogue valid",
                   validate_instance(inst).passed());

    double uniform = 0;
    for (int k = 0; k < n; ++k)
      uniform = std::max(uniform,
                         std::abs(integral.values(k) - Complex(1.0 / n)));
    report.require_leq(prefix + ": integral is uniform averaging", uniform,
                       kExactTol);

    double four_conv = 0, round_trip = 0, abstract_match = 0;
    double exchange_form = 0, embed_hom = 0;
    for (int s = 0; s < config.samples; ++s) {
      const Vector a = random_function(n, master());
      const Vector b = random_function(n, master());
      const Vector ab = group_convolution(table, a, b);

      four_conv = std::max(
          four_conv,
          max_entry_distance(fourier(fg, ab),
                             convolve(inst, fourier(fg, a), fourier(fg, b))));
      round_trip = std::max(
          round_trip, max_abs(Vector(inverse_fourier(fg, fourier(fg, a)) - a)));
      const Vector conv_hp = conv_abstract(hp, integral, a, b);
      abstract_match = std::max(abstract_match, max_abs(Vector(conv_hp - ab)));
      exchange_form = std::max(
          exchange_form,
          max_abs(Vector(conv_abstract_sweedler(hp, integral, a, b) -
                         conv_hp)));
      embed_hom = std::max(
          embed_hom,
          max_abs(Vector(dual_convolve(hp, embed_functional(hp, integral, a),
                                       embed_functional(hp, integral, b)) -
                         embed_functional(hp, integral, conv_hp))));
    }
    report.require_leq(prefix + ": fourier preserves convolution", four_conv,
                       config.tol);
    report.require_leq(prefix + ": fourier round trip", round_trip,
                       config.tol);
    report.require_leq(prefix + ": abstract convolution matches the group",
                       abstract_match, config.tol);
    report.require_leq(prefix + ": both convolution forms agree",
                       exchange_form, config.tol);
    report.require_leq(prefix + ": embedding is a dual-algebra homomorphism",
                       embed_hom, config.tol);

    double points = 0, points_blocks = 0, embeds = 0, doubling = 0;
    double antipode_points = 0;
    for (int x = 0; x < n; ++x) {
      const Vector dx = point_mass(n, x);
      for (int y = 0; y < n; ++y) {
        const Vector dy = point_mass(n, y);
        const Vector expected = point_mass(n, table.mul(y, x)) / double(n);
        points = std::max(
            points,
            max_abs(Vector(conv_abstract(hp, integral, dx, dy) - expected)));
        points_blocks = std::max(
            points_blocks,
            max_entry_distance(convolve(inst, fourier(fg, dx),
                                        fourier(fg, dy)),
                               fourier(fg, expected)));
      }
      embeds = std::max(
          embeds,
          max_abs(Vector(embed_functional(hp, integral, dx) -
                         point_mass(n, table.inverse(x)) / double(n))));
      Matrix doubled = Matrix::Zero(n, n);
      doubled(x, x) = double(n);
      doubling = std::max(
          doubling,
          max_abs(Matrix(coproduct_star(hp, integral, dx) - doubled)));
      antipode_points = std::max(
          antipode_points,
          max_abs(Vector(antipode_star(hp, integral, dx) -
                         point_mass(n, table.inverse(x)))));
    }
    report.require_leq(prefix + ": point masses convolve to reversed products",
                       points, kExactTol);
    report.require_leq(prefix + ": block picture agrees on point masses",
                       points_blocks, kExactTol);
    report.require_leq(prefix + ": embedded point masses pair by inverse",
                       embeds, kExactTol);
    report.require_leq(prefix + ": dual coproduct doubles point masses",
                       doubling, kSolveTol);
    report.require_leq(prefix + ": dual antipode inverts point masses",
                       antipode_points, kExactTol);

    const auto [qv, pv] = q_p_functionals(hp, integral);
    report.require_leq(
        prefix + ": modular functionals collapse to the counit",
        std::max(max_abs(Vector(qv - hp.counit)),
                 max_abs(Vector(pv - hp.counit))),
        kExactTol);
    report.require_leq(prefix + ": squared antipode factorization",
                       co_inner_residual(hp, integral), kExactTol);

    double reflection = 0, action_agree = 0, orthogonality = 0;
    for (const auto& ir : fg.irreps) {
      const ComodulePresentation comod = comodule_from_irrep(fg, ir.label);
      const Matrix refl = reflection_matrix(hp, integral, comod);
      reflection = std::max(
          reflection,
          max_abs(Matrix(refl - Matrix::Identity(ir.dim, ir.dim))));

      // Pairings of coefficients against antipodes of coefficients reduce to
      // reflection-matrix entries, in both operand orders.
      const Matrix refl_inv =
          refl.partialPivLu().solve(Matrix::Identity(ir.dim, ir.dim));
      const Complex tr_q = refl.trace();
      const Complex tr_q_inv = refl_inv.trace();
      for (int i = 0; i < ir.dim; ++i)
        for (int j = 0; j < ir.dim; ++j)
          for (int k = 0; k < ir.dim; ++k)
            for (int l = 0; l < ir.dim; ++l) {
              const Complex lhs1 = apply_functional(
                  integral.values,
                  hopf_product(hp, comod.a(i, j),
                               hopf_antipode(hp, comod.a(k, l))));
              const Complex rhs1 =
                  (j == k ? refl(l, i) / tr_q : Complex(0.0));
              const Complex lhs2 = apply_functional(
                  integral.values,
                  hopf_product(hp, hopf_antipode(hp, comod.a(i, j)),
                               comod.a(k, l)));
              const Complex rhs2 =
                  (l == i ? refl_inv(j, k) / tr_q_inv : Complex(0.0));
              orthogonality = std::max(orthogonality, std::abs(lhs1 - rhs1));
              orthogonality = std::max(orthogonality, std::abs(lhs2 - rhs2));
            }
      for (int x = 0; x < n; ++x) {
        const Matrix via_hopf =
            action_matrix(hp, integral, comod, point_mass(n, x));
        action_agree = std::max(
            action_agree,
            max_abs(Matrix(via_hopf -
                           represent(inst, fourier(fg, point_mass(n, x)),
                                     ir.label))));
        action_agree = std::max(
            action_agree,
            max_abs(Matrix(via_hopf - ir.rho[table.inverse(x)] / double(n))));
      }
    }
    report.require_leq(prefix + ": reflection matrices are the identity",
                       reflection, kExactTol);
    report.require_leq(prefix + ": integral orthogonality relations",
                       orthogonality, kSolveTol);
    report.require_leq(prefix + ": module actions match the block picture",
                       action_agree, kExactTol);

    double unit_windows = 0;
    for (const auto& window : prefix_windows(fg))
      unit_windows = std::max(
          unit_windows,
          max_entry_distance(
              fourier(fg, classical_approximate_identity(fg, window)),
              approximate_unit(inst, window)));
    report.require_leq(prefix + ": classical units map to block units",
                       unit_windows, kExactTol);
    report.require_leq(
        prefix + ": least-squares unit matches the classical one",
        max_abs(Vector(convolution_unit(hp, integral) -
                       classical_approximate_identity(
                           fg, prefix_windows(fg).back()))),
        kSolveTol);

    if (fg.irreps.size() >= 2) {
      const std::string first = fg.irreps[0].label;
      const std::string second = fg.irreps[1].label;
      const ComodulePresentation cf = comodule_from_irrep(fg, first);
      const ComodulePresentation cs = comodule_from_irrep(fg, second);
      const ComodulePresentation source =
          comodule_direct_sum(comodule_direct_sum(cf, cf), cs);
      const ComodulePresentation target = comodule_direct_sum(
          comodule_direct_sum(comodule_direct_sum(cf, cs), cs), cs);
      const auto abstract_basis = comodule_hom_basis(hp, source, target);
      report.require(prefix + ": comodule hom dimension 2*1 + 1*3",
                     static_cast<int>(abstract_basis.size()) == 5,
                     static_cast<double>(abstract_basis.size()), 5.0);

      const IntertwinerBasis block_basis = intertwiner_space(
          inst, {{first, 2}, {second, 1}}, {{first, 1}, {second, 3}});
      report.require(prefix + ": block intertwiner dimension 2*1 + 1*3",
                     static_cast<int>(block_basis.maps.size()) == 5,
                     static_cast<double>(block_basis.maps.size()), 5.0);
      report.require_leq(prefix + ": block intertwiners commute",
                         block_basis.residual, kSolveTol);
    }
  }
  return report;
}

Report suite_norms(const SuiteConfig& config) {
  Report report("norm estimates");
  std::mt19937_64 master(config.seed);

  for (const auto& [name, spec] : gather_instances(config)) {
    const NormReport norms =
        check_norm_inequalities(spec, config.samples, master());
    report.require(name + ": sampled norm inequalities",
                   norms.summary.passed());

    double unit_norm = 0;
    for (const auto& block : spec.blocks()) {
      const Matrix q_inverse =
          block.Q.ldlt().solve(Matrix::Identity(block.dim, block.dim));
      ConvElement unit_block;
      unit_block.set(block.label, Matrix(block.Q.trace() * q_inverse));
      const double expected = (block.Q.trace() * q_inverse.trace()).real();
      const double squared = std::pow(l2_norm(spec, unit_block), 2);
      unit_norm = std::max(unit_norm,
                           std::abs(squared - expected) /
                               std::max(1.0, std::abs(expected)));
    }
    report.require_leq(name + ": squared unit norms equal tr(Q) tr(Q^-1)",
                       unit_norm, kSolveTol);
  }

  for (const auto& name : config.groups) {
    const std::string prefix = "group " + name;
    const FiniteGroup fg = builtin_group(name);
    const int n = fg.table.size();
    const InstanceSpec inst = instance_from_group(fg);

    double plancherel = 0, regular = 0, tail_growth = 0;
    for (int s = 0; s < config.samples; ++s) {
      const Vector f = random_function(n, master());
      const ConvElement coeffs = fourier(fg, f);
      const double classical = std::sqrt(f.squaredNorm() / n);
      plancherel = std::max(
          plancherel, std::abs(l2_norm(inst, coeffs) - classical));
      regular = std::max(
          regular,
          std::abs(operator_norm(left_convolution_matrix(fg.table, f)) -
                   cstar_norm(inst, coeffs)));

      double last_l2 = std::numeric_limits<double>::infinity();
      double last_cstar = std::numeric_limits<double>::infinity();
      for (const auto& window : prefix_windows(fg)) {
        const auto [tail_l2, tail_cstar] =
            truncation_tail(inst, coeffs, window);
        tail_growth = std::max(tail_growth, tail_l2 - last_l2);
        tail_growth = std::max(tail_growth, tail_cstar - last_cstar);
        last_l2 = tail_l2;
        last_cstar = tail_cstar;
      }
    }
    report.require_leq(prefix + ": Plancherel identity", plancherel,
                       config.tol);
    report.require_leq(prefix + ": block norm equals regular representation",
                       regular, kRegularNormTol);
    report.require_leq(prefix + ": truncation tails never grow", tail_growth,
                       0.0);
  }
  return report;
}

Report suite_hopf(const SuiteConfig& config) {
  Report report("abstract engine");
  std::mt19937_64 master(config.seed);

  for (const auto& name : config.groups) {
    const std::string prefix = "group " + name;
    const FiniteGroup fg = builtin_group(name);
    const GroupTable& table = fg.table;
    const int n = table.size();
    const HopfPresentation hp = build_function_hopf(table);
    const IntegralFunctional integral = compute_integral(hp);

    report.require(prefix + ": axioms and exchange identity",
                   validate_hopf(hp).passed());
    report.require_leq(prefix + ": duality gram condition",
                       integral.gram_condition, kGramConditionBound);

    double dual_unit = 0, counits = 0;
    for (int s = 0; s < config.samples; ++s) {
      const Vector phi = random_function(n, master());
      dual_unit = std::max(
          dual_unit,
          std::max(max_abs(Vector(dual_convolve(hp, phi, hp.counit) - phi)),
                   max_abs(Vector(dual_convolve(hp, hp.counit, phi) - phi))));
      const Vector f = random_function(n, master());
      counits = std::max(
          counits, std::abs(counit_star(fourier(fg, f)) -
                            apply_functional(integral.values, f)));
    }
    report.require_leq(prefix + ": counit is the dual unit", dual_unit,
                       config.tol);
    report.require_leq(prefix + ": zero-block coefficient is the integral",
                       counits, config.tol);

    double adjoint_pairing = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const Complex lhs = apply_functional(
            integral.values,
            hopf_product(hp, point_mass(n, i), hp.antipode.col(j)));
        const Complex rhs = apply_functional(
            integral.values,
            hopf_product(hp, antipode_star(hp, integral, point_mass(n, i)),
                         point_mass(n, j)));
        adjoint_pairing = std::max(adjoint_pairing, std::abs(lhs - rhs));
      }
    report.require_leq(prefix + ": dual antipode is adjoint to the antipode",
                       adjoint_pairing, kExactTol);

    double truncated = 0;
    for (const auto& window : dual_closed_windows(fg)) {
      const Matrix projector = block_projector(fg, window);
      const Matrix span = coefficient_span(fg, window);
      for (int s = 0; s < config.samples; ++s) {
        const Vector f = random_function(n, master());
        truncated = std::max(
            truncated, approximate_antipode_residual(hp, integral, projector,
                                                     span, f));
      }
    }
    report.require_leq(prefix + ": truncated antipode identity", truncated,
                       config.tol);

    bool rejected = false;
    try {
      antipode_star(hp, integral, block_projector(fg, {"0"}),
                    point_mass(n, 1));
    } catch (const ValidationError&) {
      rejected = true;
    }
    report.require(prefix + ": restricted antipode rejects outside elements",
                   rejected);
    report.require_leq(
        prefix + ": restricted antipode fixes constants",
        max_abs(Vector(antipode_star(hp, integral, block_projector(fg, {"0"}),
                                     Vector::Ones(n)) -
                       Vector::Ones(n))),
        kExactTol);

    double induced = 0;
    bool plain_leg = true;
    for (const auto& ir : fg.irreps) {
      const ComodulePresentation comod = comodule_from_irrep(fg, ir.label);
      std::vector<Matrix> actions;
      for (int k = 0; k < n; ++k)
        actions.push_back(
            action_matrix(hp, integral, comod, point_mass(n, k)));
      const InducedComodule recovered = action_to_coaction(
          hp, integral, actions, Vector::Ones(ir.dim));
      plain_leg = plain_leg && !recovered.used_antipode_leg;
      for (int i = 0; i < ir.dim; ++i)
        for (int j = 0; j < ir.dim; ++j)
          induced = std::max(
              induced, max_abs(Vector(recovered.comod.a(i, j) -
                                      comod.a(i, j))));
    }
    report.require(prefix + ": induced coaction uses the plain leg",
                   plain_leg);
    report.require_leq(prefix + ": induced coaction recovers coefficients",
                       induced, kSolveTol);
  }
  return report;
}

}  // namespace cqg
