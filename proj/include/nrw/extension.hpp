#ifndef NRW_EXTENSION_HPP
#define NRW_EXTENSION_HPP

#include <vector>

#include "nrw/liealgebra.hpp"
#include "nrw/model.hpp"

namespace nrw {

/// Input of the (k,B)-extension: a compact Lie algebra k with positive-definite
/// invariant metric B (stored as k's bilinear form), a faithful representation
/// φ: k → so(m) given as 2-forms on the base frame, and the base model.
struct ExtensionData {
  LieAlgebra k;                 // bilinear_form() holds B
  std::vector<KForm> phi;       // one 2-form per k basis vector
  InfinitesimalModel base;
  std::vector<std::string> n_labels; // labels for the n = k copy in the new frame
};

/// Basis of {A ∈ so(m) : A·T₀ = 0, A·R₀ = 0, [A,H] = 0 ∀H ∈ isotropy} — the
/// so(m)-realization of the symmetry algebra s(g).
std::vector<SkewMap> compute_s(const InfinitesimalModel& base,
                               const std::vector<SkewMap>& isotropy);

/// Checks every ExtensionData invariant and reports named residuals.
VerificationReport validate_extension_data(const ExtensionData& data, double tol = tolerance());

/// Re-bases k so that B becomes the identity (modified Gram–Schmidt); structure
/// constants and φ transform consistently.
ExtensionData orthonormalize_k(const ExtensionData& data);

/// The extension model on the frame n-labels ++ m-labels:
///   T = T₀ + Σ φ(k_i)∧n_i + 2T_n,  R = R₀ + Σ ψ(k_i)⊙ψ(k_i),  ψ = ad ⊕ φ.
/// Expects orthonormalized data (B = identity).
InfinitesimalModel build_extension(const ExtensionData& data);

/// Fiber model on the n-frame: T_f = 2T_n, R_f = Σ ad(k_i)⊙ad(k_i).
InfinitesimalModel fiber_model(const ExtensionData& data);

/// ψ(k_i) = ad(k_i) ⊕ φ(k_i) as a 2-form on the extended frame.
KForm psi_form(const ExtensionData& data, int i, const FramePtr& extended_frame);

} // namespace nrw

#endif
