#include "cqg/conv.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <utility>

#include "cqg/analysis.hpp"

namespace cqg {

namespace {

constexpr double kExactTol = 1e-12;

Matrix solve_right(const Matrix& x, const Matrix& q) {
  // Returns x q^{-1} for Hermitian positive-definite q.
  return q.ldlt().solve(x.adjoint()).adjoint();
}

}  // namespace

ConvElement convolve(const InstanceSpec& spec, const ConvElement& f,
                     const ConvElement& g) {
  require_member(spec, f);
  require_member(spec, g);
  ConvElement out;
  for (const auto& [label, mf] : f.blocks()) {
    const Matrix* mg = g.find(label);
    if (!mg) continue;
    const Matrix& q = spec.at(label).Q;
    out.set(label, mf * q * (*mg) / q.trace());
  }
  return out;
}

ConvElement star(const InstanceSpec& spec, const ConvElement& f) {
  require_member(spec, f);
  ConvElement out;
  for (const auto& [label, mf] : f.blocks()) {
    const Matrix& q = spec.at(label).Q;
    out.set(label, solve_right(q * mf.adjoint(), q));
  }
  return out;
}

Matrix represent(const InstanceSpec& spec, const ConvElement& f,
                 const std::string& label) {
  const BlockSpec& b = spec.at(label);
  const Matrix* mf = f.find(label);
  if (!mf) return Matrix::Zero(b.dim, b.dim);
  if (mf->rows() != b.dim || mf->cols() != b.dim)
    throw ValidationError("element block '" + label +
                          "' has wrong dimensions");
  return (*mf) * b.Q / b.Q.trace();
}

ConvElement element_from_block_matrices(
    const InstanceSpec& spec, const std::map<std::string, Matrix>& targets) {
  ConvElement out;
  for (const auto& [label, m] : targets) {
    const BlockSpec& b = spec.at(label);
    if (m.rows() != b.dim || m.cols() != b.dim)
      throw ValidationError("target block '" + label +
                            "' has wrong dimensions");
    out.set(label, b.Q.trace() * solve_right(m, b.Q));
  }
  return out;
}

ModuleVector act(const InstanceSpec& spec, const ConvElement& f,
                 const ModuleVector& v) {
  const BlockSpec& b = spec.at(v.label);
  if (v.coords.size() != b.dim)
    throw ValidationError("module vector for block '" + v.label +
                          "' has wrong dimension");
  Vector coords = represent(spec, f, v.label) * v.coords;
  return {v.label, std::move(coords)};
}

ConvElement approximate_unit(const InstanceSpec& spec,
                             const TruncationWindow& K) {
  if (!K.count("0"))
    throw ValidationError("truncation window must contain block '0'");
  ConvElement out;
  for (const auto& label : K) {
    const BlockSpec& b = spec.at(label);
    const Matrix eye = Matrix::Identity(b.dim, b.dim);
    out.set(label, b.Q.trace() * b.Q.ldlt().solve(eye));
  }
  return out;
}

Complex counit_star(const ConvElement& f) {
  const Matrix* m = f.find("0");
  return m ? (*m)(0, 0) : Complex(0.0, 0.0);
}

int sum_dimension(const InstanceSpec& spec, const MultiplicityVector& mult) {
  int total = 0;
  for (const auto& [label, count] : mult) {
    if (count < 0)
      throw ValidationError("negative multiplicity for block '" + label + "'");
    if (count == 0) continue;
    total += count * spec.at(label).dim;
  }
  return total;
}

Matrix representation_on_sum(const InstanceSpec& spec,
                             const MultiplicityVector& mult,
                             const ConvElement& f) {
  const int total = sum_dimension(spec, mult);
  Matrix out = Matrix::Zero(total, total);
  int offset = 0;
  for (const auto& [label, count] : mult) {
    if (count <= 0) continue;
    const Matrix pi = represent(spec, f, label);
    const int d = spec.at(label).dim;
    for (int k = 0; k < count; ++k) {
      out.block(offset, offset, d, d) = pi;
      offset += d;
    }
  }
  return out;
}

IntertwinerBasis intertwiner_space(const InstanceSpec& spec,
                                   const MultiplicityVector& source,
                                   const MultiplicityVector& target) {
  IntertwinerBasis basis;
  basis.source = source;
  basis.target = target;

  std::set<std::string> union_labels;
  for (const auto& [label, count] : source)
    if (count > 0) union_labels.insert(label);
  for (const auto& [label, count] : target)
    if (count > 0) union_labels.insert(label);

  const int ds = sum_dimension(spec, source);
  const int dt = sum_dimension(spec, target);
  if (ds == 0 || dt == 0) return basis;

  // Generators: one matrix-unit element per block entry in the union.
  std::vector<ConvElement> generators;
  for (const auto& label : union_labels) {
    const int d = spec.at(label).dim;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        Matrix unit = Matrix::Zero(d, d);
        unit(i, j) = 1.0;
        ConvElement f;
        f.set(label, unit);
        generators.push_back(std::move(f));
      }
  }

  const int n = dt * ds;  // unknowns: column-major entries of T
  Matrix system(static_cast<int>(generators.size()) * n, n);
  system.setZero();
  std::vector<Matrix> pis, pit;
  for (std::size_t gidx = 0; gidx < generators.size(); ++gidx) {
    const Matrix ps = representation_on_sum(spec, source, generators[gidx]);
    const Matrix pt = representation_on_sum(spec, target, generators[gidx]);
    pis.push_back(ps);
    pit.push_back(pt);
    const int base = static_cast<int>(gidx) * n;
    // Constraint entry (i, j): sum_r pt(i,r) T(r,j) - sum_c T(i,c) ps(c,j).
    for (int i = 0; i < dt; ++i)
      for (int j = 0; j < ds; ++j) {
        const int row = base + i + j * dt;
        for (int r = 0; r < dt; ++r) system(row, r + j * dt) += pt(i, r);
        for (int c = 0; c < ds; ++c) system(row, i + c * dt) -= ps(c, j);
      }
  }

  const Matrix gram = system.adjoint() * system;
  Eigen::SelfAdjointEigenSolver<Matrix> eigen(gram);
  const RealVector evals = eigen.eigenvalues();
  const double lmax = std::max(evals.maxCoeff(), 0.0);
  const double cutoff = std::max(lmax, 1.0) * 1e-14;

  for (Eigen::Index k = 0; k < evals.size(); ++k) {
    if (evals(k) > cutoff) continue;
    const Vector v = eigen.eigenvectors().col(k);
    Matrix t(dt, ds);
    for (int j = 0; j < ds; ++j) t.col(j) = v.segment(j * dt, dt);
    basis.maps.push_back(std::move(t));
  }

  double residual = 0.0;
  for (const auto& t : basis.maps)
    for (std::size_t gidx = 0; gidx < generators.size(); ++gidx)
      residual =
          std::max(residual, max_abs(Matrix(pit[gidx] * t - t * pis[gidx])));
  basis.residual = residual;
  return basis;
}

Report check_approximate_unit(const InstanceSpec& spec,
                              const Filtration& chain, int n_samples,
                              std::uint64_t seed) {
  Report report("approximate unit");
  report.require("filtration strictly increasing", strictly_increasing(chain));
  bool zeros = true;
  for (const auto& K : chain) zeros = zeros && K.count("0") > 0;
  report.require("windows contain block '0'", zeros);
  if (!report.passed() || chain.empty()) return report;

  for (std::size_t w = 0; w < chain.size(); ++w) {
    const TruncationWindow& K = chain[w];
    const std::string tag = "window " + std::to_string(w) + ": ";
    const ConvElement e = approximate_unit(spec, K);
    report.require_leq(tag + "dual counit is 1",
                       std::abs(counit_star(e) - Complex(1.0, 0.0)),
                       kExactTol);
    const ConvElement ee = convolve(spec, e, e);
    report.require_leq(tag + "idempotent", max_entry_distance(e, ee),
                       kExactTol);
    const ConvElement factorized = convolve(spec, e, star(spec, e));
    report.require_leq(tag + "e = e * star(e)",
                       max_entry_distance(e, factorized), kExactTol);
  }

  std::mt19937_64 master(seed);
  const TruncationWindow& last = chain.back();
  double worst_projection = 0.0;
  double worst_monotone = 0.0;
  double worst_final = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    const ConvElement f = random_element(spec, last, master());
    double previous = std::numeric_limits<double>::infinity();
    for (const auto& K : chain) {
      const ConvElement e = approximate_unit(spec, K);
      worst_projection =
          std::max(worst_projection,
                   max_entry_distance(convolve(spec, e, f), project(f, K)));
      worst_projection =
          std::max(worst_projection,
                   max_entry_distance(convolve(spec, f, e), project(f, K)));
      const double tail = l2_norm(spec, sub(f, project(f, K)));
      worst_monotone = std::max(worst_monotone, tail - previous);
      previous = tail;
    }
    // The last window covers supp(f) by construction; the residual element
    // then has empty support, so its norm is exactly zero.
    worst_final =
        std::max(worst_final, l2_norm(spec, sub(f, project(f, last))));
  }
  report.require_leq("e_K * f = project(f, K) = f * e_K", worst_projection,
                     kExactTol);
  report.require_leq("tail norms non-increasing", worst_monotone, 0.0);
  report.require("tail exactly 0 once window covers support",
                 worst_final == 0.0, worst_final, 0.0);
  return report;
}

}  // namespace cqg
