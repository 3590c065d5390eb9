#include "nrw/skew.hpp"

#include "nrw/error.hpp"
#include "nrw/tolerance.hpp"

namespace nrw {

SkewMap::SkewMap(FramePtr frame, Eigen::MatrixXd matrix)
    : m_frame(std::move(frame)), m_matrix(std::move(matrix)) {
  int n = m_frame->dim();
  if (m_matrix.rows() != n || m_matrix.cols() != n)
    throw Error("FrameMismatch", "skew matrix shape does not match frame");
  if ((m_matrix + m_matrix.transpose()).cwiseAbs().maxCoeff() > tolerance())
    throw Error("NotAntisymmetric", "matrix is not antisymmetric within tolerance");
}

SkewMap SkewMap::operator+(const SkewMap& other) const {
  require_same_frame(*m_frame, *other.m_frame, "SkewMap::operator+");
  return SkewMap(m_frame, m_matrix + other.m_matrix);
}

SkewMap SkewMap::operator*(double s) const { return SkewMap(m_frame, m_matrix * s); }

SkewMap two_form_to_skew(const KForm& a) {
  if (a.degree() != 2) throw Error("WrongDegree", "two_form_to_skew needs a 2-form");
  int n = a.frame()->dim();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  // e_i∧e_j ↦ (e_i ↦ e_j, e_j ↦ −e_i), i.e. entries (j,i)=+c, (i,j)=−c.
  for (const auto& [idx, c] : a.terms()) {
    m(idx[1], idx[0]) += c;
    m(idx[0], idx[1]) -= c;
  }
  return SkewMap(a.frame(), std::move(m));
}

KForm skew_to_two_form(const SkewMap& A) {
  KForm r(A.frame(), 2);
  int n = A.frame()->dim();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) r.add_term({i, j}, A.matrix()(j, i));
  return r;
}

SkewMap commutator(const SkewMap& a, const SkewMap& b) {
  require_same_frame(*a.frame(), *b.frame(), "commutator");
  return SkewMap(a.frame(), a.matrix() * b.matrix() - b.matrix() * a.matrix());
}

KForm skew_action(const SkewMap& A, const KForm& t) {
  require_same_frame(*A.frame(), *t.frame(), "skew_action");
  // Derivation extension of (A·e^i) = Σ_j A(j,i) e^j, which encodes
  // (A·t)(X_1,…,X_k) = −Σ_p t(X_1,…,A X_p,…,X_k) for skew A.
  int n = t.frame()->dim();
  KForm r(t.frame(), t.degree());
  for (const auto& [idx, c] : t.terms()) {
    for (size_t p = 0; p < idx.size(); ++p) {
      for (int j = 0; j < n; ++j) {
        double a = A.matrix()(j, idx[p]);
        if (a == 0.0) continue;
        IndexTuple mod = idx;
        mod[p] = j;
        r.add_term(std::move(mod), a * c);
      }
    }
  }
  return r;
}

} // namespace nrw
