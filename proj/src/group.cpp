#include "cqg/group.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <set>

#include <json.hpp>

#include "json_util.hpp"

namespace cqg {

namespace {

constexpr double kAxiomTol = 1e-12;

}  // namespace

int GroupTable::inverse(int i) const {
  const int n = size();
  for (int j = 0; j < n; ++j)
    if (mul(i, j) == identity && mul(j, i) == identity) return j;
  throw ValidationError("group element has no inverse: " + elements[i]);
}

int GroupTable::index(const std::string& element) const {
  for (int i = 0; i < size(); ++i)
    if (elements[i] == element) return i;
  throw ValidationError("unknown group element: " + element);
}

const Irrep& FiniteGroup::irrep(const std::string& label) const {
  for (const auto& ir : irreps)
    if (ir.label == label) return ir;
  throw ValidationError("unknown irreducible representation: " + label);
}

// -- built-in groups -----------------------------------------------------------

namespace {

FiniteGroup make_cyclic(int n) {
  FiniteGroup fg;
  for (int i = 0; i < n; ++i) fg.table.elements.push_back(std::to_string(i));
  fg.table.table.resize(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) fg.table.table[i * n + j] = (i + j) % n;
  fg.table.identity = 0;
  for (int k = 0; k < n; ++k) {
    Irrep ir;
    ir.label = std::to_string(k);
    ir.dim = 1;
    ir.dual = std::to_string((n - k) % n);
    for (int x = 0; x < n; ++x) {
      Matrix m(1, 1);
      const double angle = 2.0 * std::numbers::pi * k * x / n;
      m(0, 0) = Complex(std::cos(angle), std::sin(angle));
      ir.rho.push_back(m);
    }
    fg.irreps.push_back(std::move(ir));
  }
  return fg;
}

FiniteGroup make_s3() {
  // Permutations of {0, 1, 2}; composition (s t)(i) = s(t(i)).
  const std::vector<std::pair<std::string, std::array<int, 3>>> perms = {
      {"e", {0, 1, 2}},     {"(12)", {1, 0, 2}},  {"(13)", {2, 1, 0}},
      {"(23)", {0, 2, 1}},  {"(123)", {1, 2, 0}}, {"(132)", {2, 0, 1}},
  };
  const int n = static_cast<int>(perms.size());

  FiniteGroup fg;
  for (const auto& [label, perm] : perms) {
    (void)perm;
    fg.table.elements.push_back(label);
  }
  fg.table.table.resize(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      std::array<int, 3> composed;
      for (int k = 0; k < 3; ++k)
        composed[k] = perms[i].second[perms[j].second[k]];
      const auto it = std::find_if(
          perms.begin(), perms.end(),
          [&](const auto& entry) { return entry.second == composed; });
      fg.table.table[i * n + j] = static_cast<int>(it - perms.begin());
    }
  fg.table.identity = 0;

  Irrep trivial;
  trivial.label = "0";
  trivial.dim = 1;
  trivial.dual = "0";

  Irrep sign;
  sign.label = "sgn";
  sign.dim = 1;
  sign.dual = "sgn";

  Irrep plane;
  plane.label = "std";
  plane.dim = 2;
  plane.dual = "std";

  // Orthonormal basis of the plane orthogonal to (1, 1, 1).
  Eigen::Matrix<double, 3, 2> basis;
  basis << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(6.0),
      -1.0 / std::sqrt(2.0), 1.0 / std::sqrt(6.0),
      0.0, -2.0 / std::sqrt(6.0);

  for (const auto& [label, perm] : perms) {
    (void)label;
    int parity = 1;
    for (int a = 0; a < 3; ++a)
      for (int b = a + 1; b < 3; ++b)
        if (perm[a] > perm[b]) parity = -parity;
    trivial.rho.push_back(Matrix::Ones(1, 1));
    sign.rho.push_back(Matrix::Constant(1, 1, Complex(parity)));

    Eigen::Matrix3d pmat = Eigen::Matrix3d::Zero();
    for (int k = 0; k < 3; ++k) pmat(perm[k], k) = 1.0;
    plane.rho.push_back(
        (basis.transpose() * pmat * basis).cast<Complex>());
  }

  fg.irreps = {trivial, sign, plane};
  std::sort(fg.irreps.begin(), fg.irreps.end(),
            [](const Irrep& a, const Irrep& b) { return a.label < b.label; });
  return fg;
}

FiniteGroup make_d4() {
  // Elements r^k f^j with r^4 = f^2 = 1 and f r f = r^-1.
  FiniteGroup fg;
  auto idx = [](int k, int j) { return k + 4 * j; };
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 4; ++k)
      fg.table.elements.push_back("r" + std::to_string(k) +
                                  (j ? "f" : ""));
  // Reorder: we pushed r0..r3, r0f..r3f which matches idx(k, j).
  fg.table.table.resize(64);
  for (int j1 = 0; j1 < 2; ++j1)
    for (int k1 = 0; k1 < 4; ++k1)
      for (int j2 = 0; j2 < 2; ++j2)
        for (int k2 = 0; k2 < 4; ++k2) {
          const int k = ((k1 + (j1 ? -k2 : k2)) % 4 + 4) % 4;
          const int j = j1 ^ j2;
          fg.table.table[idx(k1, j1) * 8 + idx(k2, j2)] = idx(k, j);
        }
  fg.table.identity = 0;

  auto one_dim = [&](const std::string& label, double on_r, double on_f) {
    Irrep ir;
    ir.label = label;
    ir.dim = 1;
    ir.dual = label;
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 4; ++k)
        ir.rho.push_back(Matrix::Constant(
            1, 1, Complex(std::pow(on_r, k) * std::pow(on_f, j))));
    return ir;
  };

  Irrep two;
  two.label = "two";
  two.dim = 2;
  two.dual = "two";
  Matrix rot(2, 2), ref(2, 2);
  rot << 0.0, -1.0, 1.0, 0.0;
  ref << 1.0, 0.0, 0.0, -1.0;
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 4; ++k) {
      Matrix m = Matrix::Identity(2, 2);
      for (int s = 0; s < k; ++s) m = m * rot;
      if (j) m = m * ref;
      two.rho.push_back(m);
    }

  fg.irreps = {one_dim("0", 1.0, 1.0), one_dim("a", 1.0, -1.0),
               one_dim("ab", -1.0, -1.0), one_dim("b", -1.0, 1.0), two};
  return fg;
}

}  // namespace

FiniteGroup builtin_group(const std::string& name) {
  if (name == "z2") return make_cyclic(2);
  if (name == "z3") return make_cyclic(3);
  if (name == "z6") return make_cyclic(6);
  if (name == "s3") return make_s3();
  if (name == "d4") return make_d4();
  throw ValidationError("unknown built-in group: " + name);
}

std::vector<std::string> builtin_group_names() {
  return {"d4", "s3", "z2", "z3", "z6"};
}

// -- validation ------------------------------------------------------------------

Report validate_group(const GroupTable& table) {
  Report report("group table");
  const int n = table.size();

  bool labels_ok = n > 0;
  {
    std::set<std::string> seen;
    for (const auto& label : table.elements) {
      labels_ok = labels_ok && !label.empty() && seen.insert(label).second;
    }
  }
  report.require("element labels unique and nonempty", labels_ok);

  bool closed = static_cast<int>(table.table.size()) == n * n &&
                table.identity >= 0 && table.identity < n;
  if (closed)
    for (int v : table.table) closed = closed && v >= 0 && v < n;
  report.require("table is complete and closed", closed);
  if (!closed) return report;

  bool identity_ok = true;
  for (int i = 0; i < n; ++i)
    identity_ok = identity_ok && table.mul(table.identity, i) == i &&
                  table.mul(i, table.identity) == i;
  report.require("identity is two-sided", identity_ok);

  bool inverses = true;
  for (int i = 0; i < n && inverses; ++i) {
    bool found = false;
    for (int j = 0; j < n && !found; ++j)
      found = table.mul(i, j) == table.identity &&
              table.mul(j, i) == table.identity;
    inverses = found;
  }
  report.require("every element has a two-sided inverse", inverses);

  bool assoc = true;
  for (int i = 0; i < n && assoc; ++i)
    for (int j = 0; j < n && assoc; ++j)
      for (int k = 0; k < n && assoc; ++k)
        assoc = table.mul(table.mul(i, j), k) == table.mul(i, table.mul(j, k));
  report.require("product is associative", assoc);

  return report;
}

Report validate_irreps(const FiniteGroup& fg) {
  Report report("irreducible representations");
  const GroupTable& table = fg.table;
  const int n = table.size();

  bool shapes = !fg.irreps.empty();
  {
    std::set<std::string> seen;
    for (const auto& ir : fg.irreps) {
      shapes = shapes && !ir.label.empty() && seen.insert(ir.label).second &&
               ir.dim >= 1 && static_cast<int>(ir.rho.size()) == n;
      for (const auto& m : ir.rho)
        shapes = shapes && m.rows() == ir.dim && m.cols() == ir.dim;
    }
  }
  report.require("labels unique, one matrix per element", shapes);
  if (!shapes) return report;

  const auto* trivial = [&]() -> const Irrep* {
    for (const auto& ir : fg.irreps)
      if (ir.label == "0") return &ir;
    return nullptr;
  }();
  double trivial_res = 1.0;
  if (trivial != nullptr && trivial->dim == 1) {
    trivial_res = 0.0;
    for (const auto& m : trivial->rho)
      trivial_res = std::max(trivial_res, std::abs(m(0, 0) - Complex(1.0)));
  }
  report.require_leq("trivial representation labeled \"0\"", trivial_res,
                     kAxiomTol);

  double identity_res = 0.0;
  double homomorphism_res = 0.0;
  double unitarity_res = 0.0;
  for (const auto& ir : fg.irreps) {
    identity_res =
        std::max(identity_res,
                 max_abs(Matrix(ir.rho[table.identity] -
                                Matrix::Identity(ir.dim, ir.dim))));
    for (int x = 0; x < n; ++x) {
      unitarity_res =
          std::max(unitarity_res,
                   max_abs(Matrix(ir.rho[x] * ir.rho[x].adjoint() -
                                  Matrix::Identity(ir.dim, ir.dim))));
      for (int y = 0; y < n; ++y)
        homomorphism_res =
            std::max(homomorphism_res,
                     max_abs(Matrix(ir.rho[x] * ir.rho[y] -
                                    ir.rho[table.mul(x, y)])));
    }
  }
  report.require_leq("identity maps to I", identity_res, kAxiomTol);
  report.require_leq("homomorphism rho(x)rho(y) = rho(xy)", homomorphism_res,
                     kAxiomTol);
  report.require_leq("unitarity", unitarity_res, kAxiomTol);

  double schur_res = 0.0;
  for (const auto& lam : fg.irreps)
    for (const auto& mu : fg.irreps)
      for (int i = 0; i < lam.dim; ++i)
        for (int j = 0; j < lam.dim; ++j)
          for (int k = 0; k < mu.dim; ++k)
            for (int l = 0; l < mu.dim; ++l) {
              Complex acc = 0.0;
              for (int x = 0; x < n; ++x)
                acc += lam.rho[x](i, j) * std::conj(mu.rho[x](k, l));
              acc /= static_cast<double>(n);
              const double target =
                  (&lam == &mu && i == k && j == l) ? 1.0 / lam.dim : 0.0;
              schur_res = std::max(schur_res, std::abs(acc - target));
            }
  report.require_leq("Schur orthogonality of matrix coefficients", schur_res,
                     kAxiomTol);

  int dim_sq = 0;
  for (const auto& ir : fg.irreps) dim_sq += ir.dim * ir.dim;
  report.require("completeness sum d^2 = |G|", dim_sq == n,
                 static_cast<double>(dim_sq), static_cast<double>(n));

  bool dual_ok = true;
  double dual_res = 0.0;
  for (const auto& ir : fg.irreps) {
    const Irrep* partner = nullptr;
    for (const auto& other : fg.irreps)
      if (other.label == ir.dual) partner = &other;
    if (partner == nullptr || partner->dual != ir.label ||
        partner->dim != ir.dim) {
      dual_ok = false;
      continue;
    }
    for (int x = 0; x < n; ++x)
      dual_res = std::max(
          dual_res, std::abs(partner->rho[x].trace() -
                             std::conj(ir.rho[x].trace())));
  }
  report.require("conjugate pairing is involutive", dual_ok);
  report.require_leq("conjugate characters match", dual_res, kAxiomTol);

  return report;
}

// -- constructions ------------------------------------------------------------------

HopfPresentation build_function_hopf(const GroupTable& table) {
  const int n = table.size();
  HopfPresentation hp;
  hp.basis = table.elements;
  hp.unit = Vector::Ones(n);
  for (int i = 0; i < n; ++i) hp.product.push_back({i, i, i, Complex(1.0)});
  for (int y = 0; y < n; ++y)
    for (int z = 0; z < n; ++z)
      hp.coproduct.push_back({table.mul(y, z), y, z, Complex(1.0)});
  hp.counit = Vector::Unit(n, table.identity);
  hp.antipode = Matrix::Zero(n, n);
  for (int x = 0; x < n; ++x) hp.antipode(table.inverse(x), x) = 1.0;
  hp.star = Matrix::Identity(n, n);
  return hp;
}

InstanceSpec instance_from_group(const FiniteGroup& fg) {
  std::vector<BlockSpec> blocks;
  for (const auto& ir : fg.irreps)
    blocks.push_back(
        {ir.label, ir.dim, Matrix::Identity(ir.dim, ir.dim), ir.dual});
  return InstanceSpec(std::move(blocks));
}

ConvElement fourier(const FiniteGroup& fg, const Vector& f) {
  const GroupTable& table = fg.table;
  const int n = table.size();
  if (f.size() != n)
    throw ValidationError("function vector has wrong length");
  ConvElement out;
  for (const auto& ir : fg.irreps) {
    Matrix coeff = Matrix::Zero(ir.dim, ir.dim);
    for (int x = 0; x < n; ++x) coeff += f(x) * ir.rho[table.inverse(x)];
    coeff *= static_cast<double>(ir.dim) / n;
    out.set(ir.label, std::move(coeff));
  }
  return out;
}

Vector inverse_fourier(const FiniteGroup& fg, const ConvElement& coeffs) {
  const int n = fg.table.size();
  Vector f = Vector::Zero(n);
  for (const auto& [label, coeff] : coeffs.blocks()) {
    const Irrep& ir = fg.irrep(label);
    if (coeff.rows() != ir.dim || coeff.cols() != ir.dim)
      throw ValidationError("coefficient block has wrong shape: " + label);
    for (int x = 0; x < n; ++x) f(x) += (coeff * ir.rho[x]).trace();
  }
  return f;
}

Vector group_convolution(const GroupTable& table, const Vector& a,
                         const Vector& b) {
  const int n = table.size();
  if (a.size() != n || b.size() != n)
    throw ValidationError("function vector has wrong length");
  Vector out = Vector::Zero(n);
  for (int z = 0; z < n; ++z) {
    Complex acc = 0.0;
    for (int y = 0; y < n; ++y) acc += b(y) * a(table.mul(table.inverse(y), z));
    out(z) = acc / static_cast<double>(n);
  }
  return out;
}

Matrix left_convolution_matrix(const GroupTable& table, const Vector& f) {
  const int n = table.size();
  if (f.size() != n)
    throw ValidationError("function vector has wrong length");
  Matrix m(n, n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      m(x, y) = f(table.mul(table.inverse(y), x)) / static_cast<double>(n);
  return m;
}

Vector classical_approximate_identity(const FiniteGroup& fg,
                                      const TruncationWindow& window) {
  const int n = fg.table.size();
  Vector e = Vector::Zero(n);
  for (const auto& label : window) {
    const Irrep& ir = fg.irrep(label);
    for (int x = 0; x < n; ++x)
      e(x) += static_cast<double>(ir.dim) * ir.rho[x].trace();
  }
  return e;
}

Matrix block_projector(const FiniteGroup& fg, const TruncationWindow& window) {
  return left_convolution_matrix(
      fg.table, classical_approximate_identity(fg, window));
}

ComodulePresentation comodule_from_irrep(const FiniteGroup& fg,
                                         const std::string& label) {
  const Irrep& ir = fg.irrep(label);
  const int n = fg.table.size();
  ComodulePresentation comod;
  comod.dim = ir.dim;
  comod.coeff.assign(static_cast<std::size_t>(ir.dim) * ir.dim,
                     Vector::Zero(n));
  for (int i = 0; i < ir.dim; ++i)
    for (int j = 0; j < ir.dim; ++j)
      for (int x = 0; x < n; ++x) comod.a(i, j)(x) = ir.rho[x](j, i);
  return comod;
}

// -- file formats ---------------------------------------------------------------------

FiniteGroup parse_group(const std::string& text) {
  nlohmann::json doc = detail::parse_document(text, "cqg-group/1");
  FiniteGroup fg;

  if (!doc.contains("elements") || !doc["elements"].is_array())
    throw ParseError("group document needs an \"elements\" array");
  for (const auto& e : doc["elements"]) {
    if (!e.is_string()) throw ParseError("element labels must be strings");
    fg.table.elements.push_back(e.get<std::string>());
  }
  const int n = fg.table.size();

  if (!doc.contains("identity") || !doc["identity"].is_string())
    throw ParseError("group document needs an \"identity\" label");
  const std::string identity_label = doc["identity"].get<std::string>();
  const auto it = std::find(fg.table.elements.begin(),
                            fg.table.elements.end(), identity_label);
  if (it == fg.table.elements.end())
    throw ParseError("identity label is not an element: " + identity_label);
  fg.table.identity = static_cast<int>(it - fg.table.elements.begin());

  if (!doc.contains("table") || !doc["table"].is_array() ||
      static_cast<int>(doc["table"].size()) != n)
    throw ParseError("group document needs an n x n \"table\"");
  for (const auto& row : doc["table"]) {
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      throw ParseError("group table rows must have n entries");
    for (const auto& v : row) {
      if (!v.is_number_integer())
        throw ParseError("group table entries must be integers");
      const int idx = v.get<int>();
      if (idx < 0 || idx >= n)
        throw ParseError("group table entry out of range");
      fg.table.table.push_back(idx);
    }
  }

  if (!doc.contains("irreps") || !doc["irreps"].is_array())
    throw ParseError("group document needs an \"irreps\" array");
  for (const auto& j : doc["irreps"]) {
    Irrep ir;
    if (!j.contains("label") || !j["label"].is_string() ||
        !j.contains("dim") || !j["dim"].is_number_integer() ||
        !j.contains("dual") || !j["dual"].is_string() ||
        !j.contains("rho") || !j["rho"].is_array())
      throw ParseError("irreps need label, dim, dual, rho");
    ir.label = j["label"].get<std::string>();
    ir.dim = j["dim"].get<int>();
    ir.dual = j["dual"].get<std::string>();
    if (static_cast<int>(j["rho"].size()) != n)
      throw ParseError("irrep " + ir.label + " needs one matrix per element");
    for (const auto& m : j["rho"]) {
      Matrix mat = detail::json_to_matrix(m, "rho of " + ir.label);
      if (mat.rows() != ir.dim || mat.cols() != ir.dim)
        throw ParseError("irrep " + ir.label + " matrix has wrong shape");
      ir.rho.push_back(std::move(mat));
    }
    fg.irreps.push_back(std::move(ir));
  }
  std::sort(fg.irreps.begin(), fg.irreps.end(),
            [](const Irrep& a, const Irrep& b) { return a.label < b.label; });
  return fg;
}

FiniteGroup load_group(const std::string& text) {
  FiniteGroup fg = parse_group(text);
  Report verdict = validate_group(fg.table);
  verdict.append(validate_irreps(fg));
  if (!verdict.passed()) {
    const CheckItem* f = verdict.first_failure();
    throw ValidationError("invalid group: " + (f ? f->name : "unknown"));
  }
  return fg;
}

std::string save_group(const FiniteGroup& fg) {
  const int n = fg.table.size();
  nlohmann::json table_rows = nlohmann::json::array();
  for (int i = 0; i < n; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < n; ++j) row.push_back(fg.table.mul(i, j));
    table_rows.push_back(std::move(row));
  }
  nlohmann::json irreps = nlohmann::json::array();
  for (const auto& ir : fg.irreps) {
    nlohmann::json rho = nlohmann::json::array();
    for (const auto& m : ir.rho) rho.push_back(detail::matrix_to_json(m));
    irreps.push_back({{"label", ir.label},
                      {"dim", ir.dim},
                      {"dual", ir.dual},
                      {"rho", std::move(rho)}});
  }
  nlohmann::json doc = {
      {"format", "cqg-group/1"},
      {"elements", fg.table.elements},
      {"identity", fg.table.elements[fg.table.identity]},
      {"table", std::move(table_rows)},
      {"irreps", std::move(irreps)},
  };
  return doc.dump(2) + "\n";
}

Vector parse_function(const std::string& text) {
  nlohmann::json doc = detail::parse_document(text, "cqg-function/1");
  if (!doc.contains("values"))
    throw ParseError("function document needs \"values\"");
  return detail::json_to_vector(doc["values"], "values");
}

std::string save_function(const Vector& f) {
  nlohmann::json doc = {
      {"format", "cqg-function/1"},
      {"values", detail::vector_to_json(f)},
  };
  return doc.dump(2) + "\n";
}

}  // namespace cqg
