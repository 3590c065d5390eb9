#include "nrw/kform.hpp"

#include <algorithm>
#include <cmath>

#include "nrw/error.hpp"
#include "nrw/tolerance.hpp"

namespace nrw {

int sort_index_tuple(IndexTuple& idx) {
  int sign = 1;
  // Insertion sort with parity tracking; tuples are tiny.
  for (size_t i = 1; i < idx.size(); ++i) {
    int v = idx[i];
    size_t j = i;
    while (j > 0 && idx[j - 1] > v) {
      idx[j] = idx[j - 1];
      sign = -sign;
      --j;
    }
    idx[j] = v;
  }
  for (size_t i = 1; i < idx.size(); ++i)
    if (idx[i] == idx[i - 1]) return 0;
  return sign;
}

KForm::KForm(FramePtr frame, int degree) : m_frame(std::move(frame)), m_degree(degree) {
  if (degree < 0) throw Error("WrongDegree", "negative form degree");
}

KForm KForm::basis(FramePtr frame, const IndexTuple& idx) {
  KForm f(std::move(frame), static_cast<int>(idx.size()));
  f.add_term(idx, 1.0);
  return f;
}

double KForm::inf_norm() const {
  double m = 0;
  for (const auto& [idx, c] : m_terms) m = std::max(m, std::abs(c));
  return m;
}

double KForm::coeff(IndexTuple idx) const {
  if (static_cast<int>(idx.size()) != m_degree)
    throw Error("WrongDegree", "coefficient tuple arity mismatch");
  int sign = sort_index_tuple(idx);
  if (sign == 0) return 0.0;
  auto it = m_terms.find(idx);
  return it == m_terms.end() ? 0.0 : sign * it->second;
}

KForm& KForm::add_term(IndexTuple idx, double c) {
  if (static_cast<int>(idx.size()) != m_degree)
    throw Error("WrongDegree", "term arity does not match form degree");
  for (int i : idx)
    if (i < 0 || i >= m_frame->dim())
      throw Error("IndexOutOfRange", "term index " + std::to_string(i));
  int sign = sort_index_tuple(idx);
  if (sign == 0 || c == 0.0) return *this;
  double& slot = m_terms[idx];
  slot += sign * c;
  if (std::abs(slot) < prune_threshold()) m_terms.erase(idx);
  return *this;
}

KForm KForm::operator+(const KForm& other) const {
  KForm r = *this;
  r += other;
  return r;
}

KForm& KForm::operator+=(const KForm& other) {
  require_same_frame(*m_frame, *other.m_frame, "KForm::operator+");
  if (m_degree != other.m_degree) throw Error("WrongDegree", "adding forms of different degree");
  for (const auto& [idx, c] : other.m_terms) add_term(idx, c);
  return *this;
}

KForm KForm::operator-(const KForm& other) const { return *this + other * -1.0; }

KForm KForm::operator*(double s) const {
  KForm r(m_frame, m_degree);
  for (const auto& [idx, c] : m_terms) r.add_term(idx, c * s);
  return r;
}

KForm wedge(const KForm& a, const KForm& b) {
  require_same_frame(*a.frame(), *b.frame(), "wedge");
  KForm r(a.frame(), a.degree() + b.degree());
  if (r.degree() > a.frame()->dim()) return r;
  for (const auto& [ia, ca] : a.terms()) {
    for (const auto& [ib, cb] : b.terms()) {
      IndexTuple idx = ia;
      idx.insert(idx.end(), ib.begin(), ib.end());
      r.add_term(std::move(idx), ca * cb);
    }
  }
  return r;
}

KForm contract(int i, const KForm& a) {
  if (i < 0 || i >= a.frame()->dim())
    throw Error("IndexOutOfRange", "contraction index " + std::to_string(i));
  if (a.degree() < 1) throw Error("WrongDegree", "contracting a scalar");
  KForm r(a.frame(), a.degree() - 1);
  for (const auto& [idx, c] : a.terms()) {
    for (size_t p = 0; p < idx.size(); ++p) {
      if (idx[p] != i) continue;
      IndexTuple rest;
      rest.reserve(idx.size() - 1);
      for (size_t q = 0; q < idx.size(); ++q)
        if (q != p) rest.push_back(idx[q]);
      r.add_term(std::move(rest), (p % 2 == 0 ? 1.0 : -1.0) * c);
      break;
    }
  }
  return r;
}

KForm barwedge(const KForm& a, const KForm& b) {
  require_same_frame(*a.frame(), *b.frame(), "barwedge");
  if (a.degree() < 1 || b.degree() < 1)
    throw Error("WrongDegree", "barwedge needs degrees >= 1");
  KForm r(a.frame(), a.degree() + b.degree() - 2);
  for (int i = 0; i < a.frame()->dim(); ++i) r += wedge(contract(i, a), contract(i, b));
  return r;
}

double form_inner(const KForm& a, const KForm& b) {
  require_same_frame(*a.frame(), *b.frame(), "form_inner");
  if (a.degree() != b.degree()) throw Error("WrongDegree", "inner product degree mismatch");
  double s = 0;
  const auto& ta = a.terms();
  const auto& tb = b.terms();
  for (const auto& [idx, c] : (ta.size() <= tb.size() ? ta : tb)) {
    double ca = a.coeff(idx);
    double cb = b.coeff(idx);
    s += ca * cb;
  }
  return s;
}

KForm pullback(const KForm& t, const Eigen::MatrixXd& S, FramePtr new_frame) {
  if (S.rows() != t.frame()->dim() || S.cols() != new_frame->dim())
    throw Error("FrameMismatch", "pullback matrix shape");
  // e_{j1..jk} pulls back to the wedge of the 1-forms with coefficients S.row(j_p).
  std::vector<KForm> rows;
  rows.reserve(S.rows());
  for (int j = 0; j < S.rows(); ++j) {
    KForm one(new_frame, 1);
    for (int a = 0; a < S.cols(); ++a) one.add_term({a}, S(j, a));
    rows.push_back(std::move(one));
  }
  KForm r(new_frame, t.degree());
  for (const auto& [idx, c] : t.terms()) {
    KForm w(new_frame, 0);
    w.add_term({}, c);
    for (int j : idx) w = wedge(w, rows[j]);
    r += w;
  }
  return r;
}

KForm inject(const KForm& t, const FramePtr& big) {
  std::vector<int> map(t.frame()->dim());
  for (int i = 0; i < t.frame()->dim(); ++i) {
    map[i] = big->index_of(t.frame()->label(i));
    if (map[i] < 0)
      throw Error("FrameMismatch", "label '" + t.frame()->label(i) + "' missing in target frame");
  }
  KForm r(big, t.degree());
  for (const auto& [idx, c] : t.terms()) {
    IndexTuple mapped;
    mapped.reserve(idx.size());
    for (int i : idx) mapped.push_back(map[i]);
    r.add_term(std::move(mapped), c);
  }
  return r;
}

} // namespace nrw
