#include "nrw/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "nrw/error.hpp"

namespace nrw {

Eigen::MatrixXd nullspace(const Eigen::MatrixXd& A, double rel_tol) {
  int cols = static_cast<int>(A.cols());
  if (A.rows() == 0 || A.size() == 0 || A.cwiseAbs().maxCoeff() == 0.0)
    return Eigen::MatrixXd::Identity(cols, cols);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  double thresh = rel_tol * sv(0);
  int r = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > thresh) ++r;
  return svd.matrixV().rightCols(cols - r);
}

int rank(const Eigen::MatrixXd& A, double rel_tol) {
  if (A.rows() == 0 || A.cols() == 0 || A.cwiseAbs().maxCoeff() == 0.0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
  const auto& sv = svd.singularValues();
  double thresh = rel_tol * sv(0);
  int r = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > thresh) ++r;
  return r;
}

Eigen::MatrixXd canonical_row_basis(const Eigen::MatrixXd& rows, double tol) {
  Eigen::MatrixXd m = rows;
  int nr = static_cast<int>(m.rows());
  int nc = static_cast<int>(m.cols());
  int r = 0;
  for (int c = 0; c < nc && r < nr; ++c) {
    int pivot = -1;
    double best = tol;
    for (int i = r; i < nr; ++i) {
      if (std::abs(m(i, c)) > best) {
        best = std::abs(m(i, c));
        pivot = i;
      }
    }
    if (pivot < 0) continue;
    m.row(r).swap(m.row(pivot));
    m.row(r) /= m(r, c);
    for (int i = 0; i < nr; ++i)
      if (i != r) m.row(i) -= m(i, c) * m.row(r);
    ++r;
  }
  Eigen::MatrixXd basis = m.topRows(r);
  // Unit norm, largest-magnitude coordinate positive.
  for (int i = 0; i < r; ++i) {
    double nrm = basis.row(i).norm();
    if (nrm > 0) basis.row(i) /= nrm;
    int arg = 0;
    basis.row(i).cwiseAbs().maxCoeff(&arg);
    if (basis(i, arg) < 0) basis.row(i) = -basis.row(i);
  }
  // Lexicographic order with tolerance snapping.
  std::vector<int> order(r);
  for (int i = 0; i < r; ++i) order[i] = i;
  auto snapped = [&](int i, int j) {
    double v = basis(i, j);
    return std::abs(v) < tol ? 0.0 : v;
  };
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    for (int j = 0; j < nc; ++j) {
      double va = snapped(a, j), vb = snapped(b, j);
      if (va != vb) return va > vb;
    }
    return false;
  });
  Eigen::MatrixXd out(r, nc);
  for (int i = 0; i < r; ++i) out.row(i) = basis.row(order[i]);
  return out;
}

LstsqResult lstsq(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
  if (A.cols() == 0) {
    return {Eigen::VectorXd::Zero(0), b.size() ? b.cwiseAbs().maxCoeff() : 0.0};
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(kRankThreshold);
  Eigen::VectorXd x = svd.solve(b);
  double res = (A * x - b).size() ? (A * x - b).cwiseAbs().maxCoeff() : 0.0;
  return {std::move(x), res};
}

Eigen::VectorXd project_onto_span(const Eigen::MatrixXd& basis, const Eigen::VectorXd& v) {
  if (basis.cols() == 0) return Eigen::VectorXd::Zero(v.size());
  return basis * lstsq(basis, v).x;
}

double span_distance(const Eigen::MatrixXd& basis, const Eigen::VectorXd& v) {
  Eigen::VectorXd d = v - project_onto_span(basis, v);
  return d.size() ? d.cwiseAbs().maxCoeff() : 0.0;
}

Eigen::MatrixXd gram_schmidt(const Eigen::MatrixXd& columns, const Eigen::MatrixXd& B) {
  Eigen::MatrixXd q = columns;
  for (int i = 0; i < q.cols(); ++i) {
    for (int j = 0; j < i; ++j) q.col(i) -= (q.col(j).dot(B * q.col(i))) * q.col(j);
    double nrm = std::sqrt(q.col(i).dot(B * q.col(i)));
    if (!(nrm > 0) || !std::isfinite(nrm))
      throw Error("BNotPositiveDefinite", "Gram-Schmidt breakdown: form not positive definite");
    q.col(i) /= nrm;
  }
  return q;
}

Eigen::MatrixXd random_orthogonal(int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = gauss(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i)
    if (r(i, i) < 0) q.col(i) = -q.col(i);
  return q;
}

} // namespace nrw
