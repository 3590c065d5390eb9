#ifndef NRW_LINALG_HPP
#define NRW_LINALG_HPP

#include <Eigen/Dense>
#include <vector>

namespace nrw {

/// Relative singular-value threshold used for ranks and nullspaces.
inline constexpr double kRankThreshold = 1e-10;

/// Columns form a basis of ker(A); empty matrix handled (full kernel).
Eigen::MatrixXd nullspace(const Eigen::MatrixXd& A, double rel_tol = kRankThreshold);

int rank(const Eigen::MatrixXd& A, double rel_tol = kRankThreshold);

/// Deterministic canonical basis of the row space: reduced row echelon form,
/// rows normalized, sign fixed by the largest-magnitude entry, sorted
/// lexicographically. Returns one basis row per matrix row.
Eigen::MatrixXd canonical_row_basis(const Eigen::MatrixXd& rows, double tol = 1e-10);

/// Minimum-norm least-squares solution together with the residual ∞-norm.
struct LstsqResult {
  Eigen::VectorXd x;
  double residual;
};
LstsqResult lstsq(const Eigen::MatrixXd& A, const Eigen::VectorXd& b);

/// Orthonormal projection of v onto the column span of basis.
Eigen::VectorXd project_onto_span(const Eigen::MatrixXd& basis, const Eigen::VectorXd& v);

/// Distance (∞-norm) from v to the column span of basis.
double span_distance(const Eigen::MatrixXd& basis, const Eigen::VectorXd& v);

/// Modified Gram–Schmidt orthonormalization of the columns w.r.t. the SPD form B.
Eigen::MatrixXd gram_schmidt(const Eigen::MatrixXd& columns, const Eigen::MatrixXd& B);

/// Deterministic random orthogonal matrix (QR of a seeded Gaussian sample).
Eigen::MatrixXd random_orthogonal(int n, unsigned seed);

} // namespace nrw

#endif
