#include "nrw/model.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "nrw/error.hpp"
#include "nrw/linalg.hpp"

namespace nrw {

InfinitesimalModel InfinitesimalModel::flat(FramePtr frame) {
  InfinitesimalModel m{frame, KForm(frame, 3), CurvatureTensor(frame), {}, {}};
  return m;
}

void VerificationReport::add(const std::string& name, double residual) {
  checks.push_back({name, residual, residual < tolerance});
}

void VerificationReport::add(const std::string& name, double residual, bool pass) {
  checks.push_back({name, residual, pass});
}

bool VerificationReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

double VerificationReport::residual(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return c.residual;
  return -1.0;
}

Eigen::VectorXd torsion_map(const InfinitesimalModel& m, int i, int j) {
  int n = m.frame->dim();
  if (i < 0 || i >= n || j < 0 || j >= n) throw Error("IndexOutOfRange", "torsion_map");
  Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
  for (int k = 0; k < n; ++k)
    if (k != i && k != j) v(k) = m.torsion.coeff({i, j, k});
  return v;
}

Eigen::VectorXd torsion_map(const InfinitesimalModel& m, const Eigen::VectorXd& u,
                            const Eigen::VectorXd& v) {
  int n = m.frame->dim();
  Eigen::VectorXd r = Eigen::VectorXd::Zero(n);
  for (const auto& [idx, c] : m.torsion.terms()) {
    int a = idx[0], b = idx[1], d = idx[2];
    // c · e_{abd} contributes to all three slots of T(u,v,·).
    r(d) += c * (u(a) * v(b) - u(b) * v(a));
    r(a) += c * (u(b) * v(d) - u(d) * v(b));
    r(b) += c * (u(d) * v(a) - u(a) * v(d));
  }
  return r;
}

KForm sigma_T(const KForm& t) {
  if (t.degree() != 3) throw Error("WrongDegree", "sigma_T needs a 3-form");
  return barwedge(t, t) * 0.5;
}

KForm bianchi_4form(const CurvatureTensor& r) { return r.four_form(); }

namespace {

std::vector<std::array<int, 3>> basis_triples(int n) {
  std::vector<std::array<int, 3>> t;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) t.push_back({i, j, k});
  return t;
}

/// All 2-forms R(e_i,e_j), indexed by lambda2_index.
std::vector<KForm> curvature_table(const InfinitesimalModel& m) {
  int n = m.frame->dim();
  std::vector<KForm> table;
  table.reserve(lambda2_dim(n));
  for (auto [i, j] : lambda2_pairs(n)) table.push_back(m.curvature.eval(i, j));
  return table;
}

} // namespace

Check check_invariance(const InfinitesimalModel& m, double tol) {
  double res = 0;
  int n = m.frame->dim();
  for (auto [i, j] : lambda2_pairs(n)) {
    KForm rij = m.curvature.eval(i, j);
    if (rij.is_zero()) continue;
    SkewMap A = two_form_to_skew(rij);
    res = std::max(res, skew_action(A, m.torsion).inf_norm());
    res = std::max(res, m.curvature.acted_by(A).inf_norm());
  }
  return {"invariance", res, res < tol};
}

std::pair<Check, Check> check_bianchi1(const InfinitesimalModel& m, double tol) {
  int n = m.frame->dim();
  auto table = curvature_table(m);

  double cyc = 0;
  for (const auto& [i, j, k] : basis_triples(n)) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
    const int tri[3][3] = {{i, j, k}, {j, k, i}, {k, i, j}};
    for (const auto& p : tri) {
      Eigen::VectorXd ez = Eigen::VectorXd::Unit(n, p[2]);
      v += two_form_to_skew(table[lambda2_index(std::min(p[0], p[1]), std::max(p[0], p[1]), n)])
               .matrix() *
           ez * (p[0] < p[1] ? 1.0 : -1.0);
      v -= torsion_map(m, torsion_map(m, p[0], p[1]), ez);
    }
    cyc = std::max(cyc, v.size() ? v.cwiseAbs().maxCoeff() : 0.0);
  }

  // 4-form route: 𝔖 R(X,Y,Z,V) = ½·(b(R))(X,Y,Z,V) and 𝔖 g(T(X,Y),T(Z,V)) =
  // σ_T(X,Y,Z,V), so the cyclic residual equals ½‖b(R) − 2σ_T‖∞.
  KForm d = bianchi_4form(m.curvature) - sigma_T(m.torsion) * 2.0;
  double ff = 0.5 * d.inf_norm();

  return {Check{"bianchi1-cyclic", cyc, cyc < tol}, Check{"bianchi1-4form", ff, ff < tol}};
}

Check check_bianchi2(const InfinitesimalModel& m, double tol) {
  int n = m.frame->dim();
  double res = 0;
  for (const auto& [i, j, k] : basis_triples(n)) {
    KForm sum(m.frame, 2);
    const int tri[3][3] = {{i, j, k}, {j, k, i}, {k, i, j}};
    for (const auto& p : tri)
      sum += m.curvature.eval(torsion_map(m, p[0], p[1]), Eigen::VectorXd::Unit(n, p[2]));
    res = std::max(res, sum.inf_norm());
  }
  return {"bianchi2", res, res < tol};
}

VerificationReport verify_model(const InfinitesimalModel& m, double tol) {
  VerificationReport rep;
  rep.tolerance = tol;
  rep.frame_fingerprint = m.frame->fingerprint();
  if (m.torsion.degree() != 3) throw Error("WrongDegree", "model torsion must have degree 3");
  Check inv = check_invariance(m, tol);
  rep.add(inv.name, inv.residual);
  auto [b1c, b1f] = check_bianchi1(m, tol);
  rep.add(b1c.name, b1c.residual);
  rep.add(b1f.name, b1f.residual);
  Check b2 = check_bianchi2(m, tol);
  rep.add(b2.name, b2.residual);
  return rep;
}

namespace {

/// Coefficients of a 3-form over sorted basis triples.
Eigen::VectorXd three_form_coords(const KForm& t, const std::vector<std::array<int, 3>>& triples,
                                  int n) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(triples.size());
  for (size_t a = 0; a < triples.size(); ++a)
    v(a) = t.coeff({triples[a][0], triples[a][1], triples[a][2]});
  return v;
}

std::vector<SkewMap> rows_to_skews(const Eigen::MatrixXd& rows, const FramePtr& frame) {
  int n = frame->dim();
  auto pairs = lambda2_pairs(n);
  std::vector<SkewMap> out;
  for (int r = 0; r < rows.rows(); ++r) {
    KForm f(frame, 2);
    for (size_t a = 0; a < pairs.size(); ++a) f.add_term({pairs[a].first, pairs[a].second}, rows(r, a));
    out.push_back(two_form_to_skew(f));
  }
  return out;
}

} // namespace

std::vector<SkewMap> stabilizer(const InfinitesimalModel& m) {
  int n = m.frame->dim();
  int n2 = lambda2_dim(n);
  auto triples = basis_triples(n);
  int n3 = static_cast<int>(triples.size());
  auto pairs = lambda2_pairs(n);

  Eigen::MatrixXd M(n3 + n2 * n2, n2);
  for (int a = 0; a < n2; ++a) {
    KForm beta(m.frame, 2);
    beta.add_term({pairs[a].first, pairs[a].second}, 1.0);
    SkewMap A = two_form_to_skew(beta);
    M.col(a).head(n3) = three_form_coords(skew_action(A, m.torsion), triples, n);
    Eigen::MatrixXd g = m.curvature.acted_by(A).gram();
    M.col(a).tail(n2 * n2) = Eigen::Map<Eigen::VectorXd>(g.data(), n2 * n2);
  }
  Eigen::MatrixXd ker = nullspace(M);
  Eigen::MatrixXd rows = canonical_row_basis(ker.transpose());
  return rows_to_skews(rows, m.frame);
}

std::vector<SkewMap> image_of_R(const InfinitesimalModel& m, double tol) {
  int n = m.frame->dim();
  int n2 = lambda2_dim(n);
  auto pairs = lambda2_pairs(n);
  Eigen::MatrixXd rows(n2, n2);
  for (size_t a = 0; a < pairs.size(); ++a) {
    KForm f = m.curvature.eval(pairs[a].first, pairs[a].second);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n2);
    for (const auto& [idx, c] : f.terms()) v(lambda2_index(idx[0], idx[1], n)) = c;
    rows.row(a) = v;
  }
  Eigen::MatrixXd basis = canonical_row_basis(rows);
  auto out = rows_to_skews(basis, m.frame);

  for (const auto& A : out) {
    double r = std::max(skew_action(A, m.torsion).inf_norm(),
                        m.curvature.acted_by(A).inf_norm());
    if (r >= tol)
      throw Error("ImageNotInStabilizer",
                  "im(R) does not stabilize (T,R); residual " + std::to_string(r));
  }
  // Commutator closure of im(R) (it is a subalgebra for consistent models).
  Eigen::MatrixXd span = basis.transpose();
  for (size_t i = 0; i < out.size(); ++i) {
    for (size_t j = i + 1; j < out.size(); ++j) {
      KForm c = skew_to_two_form(commutator(out[i], out[j]));
      Eigen::VectorXd v = Eigen::VectorXd::Zero(n2);
      for (const auto& [idx, coef] : c.terms()) v(lambda2_index(idx[0], idx[1], n)) = coef;
      if (span_distance(span, v) >= tol)
        throw Error("ImageNotInStabilizer", "im(R) is not commutator-closed");
    }
  }
  return out;
}

} // namespace nrw
