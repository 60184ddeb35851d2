#include "cqg/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>

#include "cqg/conv.hpp"

namespace cqg {

namespace {

constexpr double kJacobiRelTol = 1e-13;
constexpr int kJacobiMaxSweeps = 100;
constexpr double kSlackTol = -1e-12;
constexpr double kIdentityTol = 1e-10;

double off_diagonal_norm(const Matrix& a) {
  double off2 = 0.0;
  for (Eigen::Index p = 0; p < a.rows(); ++p)
    for (Eigen::Index q = 0; q < a.cols(); ++q)
      if (p != q) off2 += std::norm(a(p, q));
  return std::sqrt(off2);
}

/// Eigenvalues of a Hermitian matrix by cyclic Jacobi rotations, iterated
/// until the off-diagonal mass falls below 1e-13 of the Frobenius norm.
RealVector hermitian_eigenvalues_jacobi(Matrix a) {
  const Eigen::Index n = a.rows();
  if (n == 0) return RealVector(0);
  for (int sweep = 0; sweep < kJacobiMaxSweeps; ++sweep) {
    const double total = a.norm();
    if (off_diagonal_norm(a) <= kJacobiRelTol * total || total == 0.0) break;
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double g = std::abs(apq);
        if (g == 0.0) continue;
        const Complex phase = apq / g;  // e^{i phi}
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * g);
        const double t = tau >= 0.0
                             ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                             : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const Complex e2 = std::conj(phase);
        const Vector cp = a.col(p), cq = a.col(q);
        a.col(p) = c * cp - s * e2 * cq;
        a.col(q) = s * cp + c * e2 * cq;
        const Eigen::RowVectorXcd rp = a.row(p), rq = a.row(q);
        a.row(p) = c * rp - s * phase * rq;
        a.row(q) = s * rp + c * phase * rq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
      }
    }
  }
  return a.diagonal().real();
}

}  // namespace

Complex inner_product(const InstanceSpec& spec, const ConvElement& f,
                      const ConvElement& g) {
  require_member(spec, f);
  require_member(spec, g);
  Complex total = 0.0;
  for (const auto& [label, mf] : f.blocks()) {
    const Matrix* mg = g.find(label);
    if (!mg) continue;
    const Matrix& q = spec.at(label).Q;
    total += (mf * q * mg->adjoint()).trace() / q.trace();
  }
  return total;
}

double l2_norm(const InstanceSpec& spec, const ConvElement& f) {
  const double sq = inner_product(spec, f, f).real();
  return std::sqrt(std::max(sq, 0.0));
}

double operator_norm(const Matrix& m) {
  if (m.rows() != m.cols())
    throw std::invalid_argument("operator_norm: non-square input");
  if (m.size() == 0) return 0.0;
  const RealVector eigs = hermitian_eigenvalues_jacobi(m.adjoint() * m);
  return std::sqrt(std::max(eigs.maxCoeff(), 0.0));
}

RealVector singular_values(const Matrix& m) {
  const bool tall = m.rows() >= m.cols();
  const Matrix gram = tall ? Matrix(m.adjoint() * m) : Matrix(m * m.adjoint());
  RealVector eigs = hermitian_eigenvalues_jacobi(gram);
  for (Eigen::Index i = 0; i < eigs.size(); ++i)
    eigs(i) = std::sqrt(std::max(eigs(i), 0.0));
  std::sort(eigs.begin(), eigs.end(), std::greater<double>());
  return eigs;
}

double condition_number(const Matrix& m) {
  const RealVector sv = singular_values(m);
  if (sv.size() == 0) return 0.0;
  const double smallest = sv(sv.size() - 1);
  if (smallest == 0.0) return std::numeric_limits<double>::infinity();
  return sv(0) / smallest;
}

double cstar_norm(const InstanceSpec& spec, const ConvElement& f) {
  require_member(spec, f);
  double sup = 0.0;
  for (const auto& [label, mf] : f.blocks())
    sup = std::max(sup, operator_norm(represent(spec, f, label)));
  return sup;
}

std::pair<double, double> truncation_tail(const InstanceSpec& spec,
                                          const ConvElement& f,
                                          const TruncationWindow& K) {
  const ConvElement tail = sub(f, project(f, K));
  return {l2_norm(spec, tail), cstar_norm(spec, tail)};
}

void NormReport::print(std::ostream& out) const {
  out << "# norm inequalities (" << samples.size() << " samples)\n";
  char buf[160];
  auto row = [&](const char* label, double value, double slack) {
    std::snprintf(buf, sizeof(buf), "%-34s %16.9e %16.9e\n", label, value,
                  slack);
    out << buf;
  };
  std::snprintf(buf, sizeof(buf), "%-34s %16s %16s\n", "label", "value",
                "slack");
  out << buf;
  double min_submult_l2 = 0, min_dom = 0, min_submult_cstar = 0, max_id = 0;
  double worst_l2fg = 0, worst_cstarfg = 0, worst_idlhs = 0;
  bool first = true;
  for (const auto& s : samples) {
    if (first) {
      min_submult_l2 = s.slack_l2_submult;
      min_dom = s.slack_l2_dominates;
      min_submult_cstar = s.slack_cstar_submult;
      first = false;
    } else {
      min_submult_l2 = std::min(min_submult_l2, s.slack_l2_submult);
      min_dom = std::min(min_dom, s.slack_l2_dominates);
      min_submult_cstar = std::min(min_submult_cstar, s.slack_cstar_submult);
    }
    max_id = std::max(max_id, s.rel_cstar_identity);
    worst_l2fg = std::max(worst_l2fg, s.l2_fg);
    worst_cstarfg = std::max(worst_cstarfg, s.cstar_fg);
    worst_idlhs = std::max(worst_idlhs, s.cstar_identity_lhs);
  }
  row("l2_submultiplicative", worst_l2fg, min_submult_l2);
  row("cstar_dominated_by_l2", 0.0, min_dom);
  row("cstar_submultiplicative", worst_cstarfg, min_submult_cstar);
  row("cstar_identity_rel_deviation", max_id, kIdentityTol - max_id);
  out << (summary.passed() ? "OK" : "FAILED") << "\n";
}

nlohmann::json NormReport::to_json() const {
  nlohmann::json js = nlohmann::json::array();
  for (const auto& s : samples) {
    js.push_back({{"l2_f", s.l2_f},
                  {"l2_g", s.l2_g},
                  {"cstar_f", s.cstar_f},
                  {"cstar_g", s.cstar_g},
                  {"l2_fg", s.l2_fg},
                  {"cstar_fg", s.cstar_fg},
                  {"cstar_identity_lhs", s.cstar_identity_lhs},
                  {"cstar_identity_rhs", s.cstar_identity_rhs},
                  {"slack_l2_submult", s.slack_l2_submult},
                  {"slack_l2_dominates", s.slack_l2_dominates},
                  {"slack_cstar_submult", s.slack_cstar_submult},
                  {"rel_cstar_identity", s.rel_cstar_identity}});
  }
  return {{"samples", js}, {"summary", summary.to_json()}};
}

NormReport check_norm_inequalities(const InstanceSpec& spec, int n_samples,
                                   std::uint64_t seed) {
  NormReport report;
  report.summary = Report("norm inequalities");
  const TruncationWindow K = full_window(spec);
  std::mt19937_64 master(seed);

  double min_submult_l2 = std::numeric_limits<double>::infinity();
  double min_dom = min_submult_l2;
  double min_submult_cstar = min_submult_l2;
  double max_identity = 0.0;

  for (int i = 0; i < n_samples; ++i) {
    const ConvElement f = random_element(spec, K, master());
    const ConvElement g = random_element(spec, K, master());
    const ConvElement fg = convolve(spec, f, g);
    NormSample s;
    s.l2_f = l2_norm(spec, f);
    s.l2_g = l2_norm(spec, g);
    s.cstar_f = cstar_norm(spec, f);
    s.cstar_g = cstar_norm(spec, g);
    s.l2_fg = l2_norm(spec, fg);
    s.cstar_fg = cstar_norm(spec, fg);
    s.cstar_identity_lhs = cstar_norm(spec, convolve(spec, star(spec, f), f));
    s.cstar_identity_rhs = s.cstar_f * s.cstar_f;
    s.slack_l2_submult = s.l2_f * s.l2_g - s.l2_fg;
    s.slack_l2_dominates =
        std::min(s.l2_f - s.cstar_f, s.l2_g - s.cstar_g);
    s.slack_cstar_submult = s.cstar_f * s.cstar_g - s.cstar_fg;
    s.rel_cstar_identity =
        std::abs(s.cstar_identity_lhs - s.cstar_identity_rhs) /
        std::max(s.cstar_identity_rhs, 1e-15);
    min_submult_l2 = std::min(min_submult_l2, s.slack_l2_submult);
    min_dom = std::min(min_dom, s.slack_l2_dominates);
    min_submult_cstar = std::min(min_submult_cstar, s.slack_cstar_submult);
    max_identity = std::max(max_identity, s.rel_cstar_identity);
    report.samples.push_back(s);
  }

  report.summary.require("l2 submultiplicativity min slack",
                         min_submult_l2 >= kSlackTol, min_submult_l2,
                         kSlackTol);
  report.summary.require("cstar <= l2 min slack", min_dom >= kSlackTol,
                         min_dom, kSlackTol);
  report.summary.require("cstar submultiplicativity min slack",
                         min_submult_cstar >= kSlackTol, min_submult_cstar,
                         kSlackTol);
  report.summary.require_leq("cstar identity max relative deviation",
                             max_identity, kIdentityTol);
  return report;
}

}  // namespace cqg
