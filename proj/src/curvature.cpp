#include "nrw/curvature.hpp"

#include <cmath>

#include "nrw/error.hpp"
#include "nrw/tolerance.hpp"

namespace nrw {

int lambda2_dim(int n) { return n * (n - 1) / 2; }

int lambda2_index(int i, int j, int n) {
  if (i < 0 || j <= i || j >= n) throw Error("IndexOutOfRange", "lambda2_index");
  // Position of (i,j), i<j, in lexicographic order of increasing pairs.
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}

std::vector<std::pair<int, int>> lambda2_pairs(int n) {
  std::vector<std::pair<int, int>> p;
  p.reserve(lambda2_dim(n));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) p.emplace_back(i, j);
  return p;
}

namespace {

Eigen::VectorXd two_form_coords(const KForm& a) {
  int n = a.frame()->dim();
  Eigen::VectorXd v = Eigen::VectorXd::Zero(lambda2_dim(n));
  for (const auto& [idx, c] : a.terms()) v(lambda2_index(idx[0], idx[1], n)) = c;
  return v;
}

void require_two_form(const KForm& a, const char* where) {
  if (a.degree() != 2) throw Error("WrongDegree", std::string(where) + " needs 2-forms");
}

} // namespace

CurvatureTensor::CurvatureTensor(FramePtr frame) : m_frame(std::move(frame)) {}

CurvatureTensor& CurvatureTensor::add_square(const KForm& a, double weight) {
  return add_pair(a, a, weight);
}

CurvatureTensor& CurvatureTensor::add_pair(const KForm& a, const KForm& b, double weight) {
  require_two_form(a, "CurvatureTensor::add_pair");
  require_two_form(b, "CurvatureTensor::add_pair");
  require_same_frame(*m_frame, *a.frame(), "CurvatureTensor::add_pair");
  require_same_frame(*m_frame, *b.frame(), "CurvatureTensor::add_pair");
  if (weight != 0.0 && !a.is_zero() && !b.is_zero()) m_pairs.push_back({a, b, weight});
  return *this;
}

KForm CurvatureTensor::eval(int i, int j) const {
  int n = m_frame->dim();
  if (i < 0 || i >= n || j < 0 || j >= n) throw Error("IndexOutOfRange", "curvature_eval");
  KForm r(m_frame, 2);
  if (i == j) return r;
  double sign = 1.0;
  if (i > j) {
    std::swap(i, j);
    sign = -1.0;
  }
  for (const auto& p : m_pairs) {
    double ca = p.a.coeff({i, j});
    double cb = p.b.coeff({i, j});
    r += p.b * (sign * p.weight * 0.5 * ca);
    r += p.a * (sign * p.weight * 0.5 * cb);
  }
  return r;
}

KForm CurvatureTensor::eval(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const {
  KForm r(m_frame, 2);
  for (const auto& p : m_pairs) {
    double ca = 0, cb = 0;
    for (const auto& [idx, c] : p.a.terms())
      ca += c * (u(idx[0]) * v(idx[1]) - u(idx[1]) * v(idx[0]));
    for (const auto& [idx, c] : p.b.terms())
      cb += c * (u(idx[0]) * v(idx[1]) - u(idx[1]) * v(idx[0]));
    r += p.b * (p.weight * 0.5 * ca);
    r += p.a * (p.weight * 0.5 * cb);
  }
  return r;
}

Eigen::MatrixXd CurvatureTensor::gram() const {
  int n2 = lambda2_dim(m_frame->dim());
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n2, n2);
  for (const auto& p : m_pairs) {
    Eigen::VectorXd va = two_form_coords(p.a);
    Eigen::VectorXd vb = two_form_coords(p.b);
    g += (0.5 * p.weight) * (va * vb.transpose() + vb * va.transpose());
  }
  return g;
}

CurvatureTensor CurvatureTensor::acted_by(const SkewMap& A) const {
  require_same_frame(*m_frame, *A.frame(), "CurvatureTensor::acted_by");
  CurvatureTensor r(m_frame);
  for (const auto& p : m_pairs) {
    r.add_pair(skew_action(A, p.a), p.b, p.weight);
    r.add_pair(p.a, skew_action(A, p.b), p.weight);
  }
  return r;
}

KForm CurvatureTensor::four_form() const {
  KForm r(m_frame, 4);
  for (const auto& p : m_pairs) r += wedge(p.a, p.b) * p.weight;
  return r;
}

double CurvatureTensor::inf_norm() const {
  return m_pairs.empty() ? 0.0 : gram().cwiseAbs().maxCoeff();
}

CurvatureTensor CurvatureTensor::operator+(const CurvatureTensor& other) const {
  require_same_frame(*m_frame, *other.m_frame, "CurvatureTensor::operator+");
  CurvatureTensor r = *this;
  for (const auto& p : other.m_pairs) r.m_pairs.push_back(p);
  return r;
}

CurvatureTensor CurvatureTensor::operator-(const CurvatureTensor& other) const {
  return *this + other * -1.0;
}

CurvatureTensor CurvatureTensor::operator*(double s) const {
  CurvatureTensor r = *this;
  for (auto& p : r.m_pairs) p.weight *= s;
  return r;
}

CurvatureTensor sym_square(const KForm& a) {
  CurvatureTensor r(a.frame());
  r.add_square(a);
  return r;
}

double lambda2_inner(const KForm& a, const KForm& b) {
  require_two_form(a, "lambda2_inner");
  require_two_form(b, "lambda2_inner");
  return form_inner(a, b);
}

CurvatureTensor inject(const CurvatureTensor& r, const FramePtr& big) {
  CurvatureTensor out(big);
  for (const auto& p : r.pairs()) out.add_pair(inject(p.a, big), inject(p.b, big), p.weight);
  return out;
}

CurvatureTensor pullback(const CurvatureTensor& r, const Eigen::MatrixXd& S, FramePtr new_frame) {
  CurvatureTensor out(new_frame);
  for (const auto& p : r.pairs())
    out.add_pair(pullback(p.a, S, new_frame), pullback(p.b, S, new_frame), p.weight);
  return out;
}

} // namespace nrw
