#ifndef NRW_CURVATURE_HPP
#define NRW_CURVATURE_HPP

#include <Eigen/Dense>
#include <vector>

#include "nrw/kform.hpp"
#include "nrw/skew.hpp"

namespace nrw {

/// One weighted symmetric product w·(a⊙b) of 2-forms.
struct SymPair {
  KForm a;
  KForm b;
  double weight;
};

/// Index helpers for the basis {e_i∧e_j}_{i<j} of Λ².
int lambda2_dim(int n);
int lambda2_index(int i, int j, int n);
std::vector<std::pair<int, int>> lambda2_pairs(int n);

/// Element of Λ²⊙Λ² stored as a weighted sum of symmetric pairs of 2-forms.
/// Evaluation convention: (a⊙b)(X,Y) = ½(a(X,Y)·b + b(X,Y)·a).
class CurvatureTensor {
public:
  CurvatureTensor() = default; // empty state; assign before use
  explicit CurvatureTensor(FramePtr frame);

  static CurvatureTensor zero(FramePtr frame) { return CurvatureTensor(std::move(frame)); }

  const FramePtr& frame() const { return m_frame; }
  const std::vector<SymPair>& pairs() const { return m_pairs; }
  bool is_zero() const { return m_pairs.empty(); }

  CurvatureTensor& add_square(const KForm& a, double weight = 1.0);
  CurvatureTensor& add_pair(const KForm& a, const KForm& b, double weight = 1.0);

  /// The 2-form R(e_i, e_j).
  KForm eval(int i, int j) const;

  /// Bilinear extension R(u, v) for coordinate vectors.
  KForm eval(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const;

  /// Symmetric Gram matrix G[IJ][KL] = R(e_I∧e_J, e_K∧e_L) over the Λ² basis —
  /// the canonical representation-independent value of the tensor.
  Eigen::MatrixXd gram() const;

  /// Derivation action A·(a⊙b) = (A·a)⊙b + a⊙(A·b).
  CurvatureTensor acted_by(const SkewMap& A) const;

  /// 4-form component Σ w·(a∧b) (the Bianchi map image for sums of pairs).
  KForm four_form() const;

  /// Max |entry| of the Gram matrix.
  double inf_norm() const;

  CurvatureTensor operator+(const CurvatureTensor& other) const;
  CurvatureTensor operator-(const CurvatureTensor& other) const;
  CurvatureTensor operator*(double s) const;

private:
  FramePtr m_frame;
  std::vector<SymPair> m_pairs;
};

/// a⊙a as a CurvatureTensor.
CurvatureTensor sym_square(const KForm& a);

/// Inner product on Λ² making basis 2-forms orthonormal.
double lambda2_inner(const KForm& a, const KForm& b);

/// Re-express on a larger frame by label match.
CurvatureTensor inject(const CurvatureTensor& r, const FramePtr& big);

/// Pullback of every pair along S (columns = new basis vectors in old coordinates).
CurvatureTensor pullback(const CurvatureTensor& r, const Eigen::MatrixXd& S, FramePtr new_frame);

} // namespace nrw

#endif
