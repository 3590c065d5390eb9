#ifndef NRW_SKEW_HPP
#define NRW_SKEW_HPP

#include <Eigen/Dense>

#include "nrw/frame.hpp"
#include "nrw/kform.hpp"

namespace nrw {

/// Element of so(n) acting on the frame's vector space.
class SkewMap {
public:
  SkewMap(FramePtr frame, Eigen::MatrixXd matrix);

  const FramePtr& frame() const { return m_frame; }
  const Eigen::MatrixXd& matrix() const { return m_matrix; }

  SkewMap operator+(const SkewMap& other) const;
  SkewMap operator*(double s) const;

private:
  FramePtr m_frame;
  Eigen::MatrixXd m_matrix;
};

/// Λ² ≅ so(n) with e_i∧e_j ↦ (e_i ↦ e_j, e_j ↦ −e_i).
SkewMap two_form_to_skew(const KForm& a);
KForm skew_to_two_form(const SkewMap& A);

SkewMap commutator(const SkewMap& a, const SkewMap& b);

/// Natural derivation action of so(n) on forms; for 2-form arguments equals barwedge.
KForm skew_action(const SkewMap& A, const KForm& t);

} // namespace nrw

#endif
