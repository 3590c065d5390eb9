#ifndef NRW_KFORM_HPP
#define NRW_KFORM_HPP

#include <Eigen/Dense>
#include <map>
#include <vector>

#include "nrw/frame.hpp"

namespace nrw {

/// Strictly increasing tuple of 0-based frame indices.
using IndexTuple = std::vector<int>;

/// Sparse antisymmetric k-linear form over an orthonormal frame.
/// Terms are keyed by strictly increasing index tuples; tiny coefficients are pruned.
class KForm {
public:
  KForm() : m_degree(0) {} // empty state; assign before use
  KForm(FramePtr frame, int degree);

  static KForm zero(FramePtr frame, int degree) { return KForm(std::move(frame), degree); }

  /// Basis form e_{i1} ∧ … ∧ e_{ik}; indices may be unsorted (sign is tracked).
  static KForm basis(FramePtr frame, const IndexTuple& idx);

  int degree() const { return m_degree; }
  const FramePtr& frame() const { return m_frame; }
  const std::map<IndexTuple, double>& terms() const { return m_terms; }

  bool is_zero() const { return m_terms.empty(); }
  double inf_norm() const;

  /// Coefficient at an arbitrary-order index tuple (0 on repeats, signed on permutations).
  double coeff(IndexTuple idx) const;

  /// Accumulate c·e_idx (idx in arbitrary order); normalizes, merges and prunes.
  KForm& add_term(IndexTuple idx, double c);

  KForm operator+(const KForm& other) const;
  KForm operator-(const KForm& other) const;
  KForm operator*(double s) const;
  KForm operator-() const { return *this * -1.0; }
  KForm& operator+=(const KForm& other);

private:
  FramePtr m_frame;
  int m_degree;
  std::map<IndexTuple, double> m_terms;
};

inline KForm operator*(double s, const KForm& a) { return a * s; }

/// Sort `idx` in place; returns the permutation sign, or 0 on a repeated index.
int sort_index_tuple(IndexTuple& idx);

/// Exterior product.
KForm wedge(const KForm& a, const KForm& b);

/// Interior product e_i ⌟ a with antiderivation signs.
KForm contract(int i, const KForm& a);

/// α ⊼ β = Σ_i (e_i⌟α) ∧ (e_i⌟β); for 2-forms this is the so(n) commutator.
KForm barwedge(const KForm& a, const KForm& b);

/// Inner product on forms making the basis tuples orthonormal (degree must match).
double form_inner(const KForm& a, const KForm& b);

/// Pullback along a linear map: result(v_{a1},…) = t(S e_{a1}, …) where column a of S
/// holds the coordinates of the new basis vector v_a in t's frame.
KForm pullback(const KForm& t, const Eigen::MatrixXd& S, FramePtr new_frame);

/// Re-express a form on a subframe inside a larger frame via a label match.
KForm inject(const KForm& t, const FramePtr& big);

} // namespace nrw

#endif
