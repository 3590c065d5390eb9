#include "nrw/liealgebra.hpp"

#include <algorithm>
#include <cmath>

#include "nrw/error.hpp"

namespace nrw {

LieAlgebra::LieAlgebra(std::vector<std::string> labels) : m_labels(std::move(labels)) {
  int n = dim();
  m_c.assign(n, std::vector<Eigen::VectorXd>(n, Eigen::VectorXd::Zero(n)));
}

void LieAlgebra::set_bracket(int i, int j, const Eigen::VectorXd& value) {
  if (i < 0 || i >= dim() || j < 0 || j >= dim())
    throw Error("IndexOutOfRange", "LieAlgebra::set_bracket");
  if (value.size() != dim()) throw Error("IndexOutOfRange", "bracket coefficient length");
  m_c[i][j] = value;
  m_c[j][i] = -value;
}

const Eigen::VectorXd& LieAlgebra::bracket(int i, int j) const {
  if (i < 0 || i >= dim() || j < 0 || j >= dim())
    throw Error("IndexOutOfRange", "LieAlgebra::bracket");
  return m_c[i][j];
}

Eigen::VectorXd LieAlgebra::bracket(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const {
  Eigen::VectorXd r = Eigen::VectorXd::Zero(dim());
  for (int i = 0; i < dim(); ++i) {
    if (u(i) == 0.0) continue;
    for (int j = 0; j < dim(); ++j) {
      if (v(j) == 0.0) continue;
      r += u(i) * v(j) * m_c[i][j];
    }
  }
  return r;
}

Eigen::MatrixXd LieAlgebra::ad(int i) const {
  Eigen::MatrixXd m(dim(), dim());
  for (int j = 0; j < dim(); ++j) m.col(j) = m_c[i][j];
  return m;
}

Eigen::MatrixXd LieAlgebra::ad(const Eigen::VectorXd& u) const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim(), dim());
  for (int i = 0; i < dim(); ++i)
    if (u(i) != 0.0) m += u(i) * ad(i);
  return m;
}

double LieAlgebra::antisymmetry_residual() const {
  double r = 0;
  for (int i = 0; i < dim(); ++i)
    for (int j = 0; j < dim(); ++j)
      r = std::max(r, (m_c[i][j] + m_c[j][i]).cwiseAbs().maxCoeff());
  return dim() ? r : 0.0;
}

double LieAlgebra::jacobi_residual() const {
  double r = 0;
  for (int i = 0; i < dim(); ++i)
    for (int j = i + 1; j < dim(); ++j)
      for (int k = j + 1; k < dim(); ++k) {
        Eigen::VectorXd s = bracket(m_c[i][j], Eigen::VectorXd::Unit(dim(), k)) +
                            bracket(m_c[j][k], Eigen::VectorXd::Unit(dim(), i)) +
                            bracket(m_c[k][i], Eigen::VectorXd::Unit(dim(), j));
        r = std::max(r, s.cwiseAbs().maxCoeff());
      }
  return r;
}

Eigen::MatrixXd LieAlgebra::killing_form() const {
  Eigen::MatrixXd k(dim(), dim());
  std::vector<Eigen::MatrixXd> ads;
  ads.reserve(dim());
  for (int i = 0; i < dim(); ++i) ads.push_back(ad(i));
  for (int i = 0; i < dim(); ++i)
    for (int j = 0; j <= i; ++j) k(i, j) = k(j, i) = (ads[i] * ads[j]).trace();
  return k;
}

double LieAlgebra::invariance_residual(const Eigen::MatrixXd& B) const {
  double r = 0;
  for (int x = 0; x < dim(); ++x)
    for (int y = 0; y < dim(); ++y)
      for (int z = 0; z < dim(); ++z) {
        double v = m_c[x][y].dot(B.col(z)) + m_c[x][z].dot(B.row(y).transpose());
        r = std::max(r, std::abs(v));
      }
  return r;
}

LieAlgebra LieAlgebra::rebased(const Eigen::MatrixXd& P, std::vector<std::string> new_labels) const {
  if (P.rows() != dim() || P.cols() != dim()) throw Error("IndexOutOfRange", "rebased: shape");
  LieAlgebra out(std::move(new_labels));
  Eigen::MatrixXd Pinv = P.inverse();
  for (int i = 0; i < dim(); ++i)
    for (int j = i + 1; j < dim(); ++j)
      out.set_bracket(i, j, Pinv * bracket(Eigen::VectorXd(P.col(i)), Eigen::VectorXd(P.col(j))));
  if (m_form) out.m_form = P.transpose() * (*m_form) * P;
  return out;
}

std::vector<int> GradedLieAlgebra::block(const std::string& name) const {
  auto it = blocks.find(name);
  return it == blocks.end() ? std::vector<int>{} : it->second;
}

std::vector<int> GradedLieAlgebra::isotropy_indices() const {
  std::vector<int> out;
  for (const auto& name : isotropy_blocks) {
    auto b = block(name);
    out.insert(out.end(), b.begin(), b.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> GradedLieAlgebra::complement_indices() const {
  auto iso = isotropy_indices();
  std::vector<int> out;
  for (int i = 0; i < algebra.dim(); ++i)
    if (!std::binary_search(iso.begin(), iso.end(), i)) out.push_back(i);
  return out;
}

double GradedLieAlgebra::reductivity_residual() const {
  double r = 0;
  auto iso = isotropy_indices();
  for (int h : iso)
    for (int x : complement_indices()) {
      const Eigen::VectorXd& b = algebra.bracket(h, x);
      for (int j : iso) r = std::max(r, std::abs(b(j)));
    }
  return r;
}

} // namespace nrw
