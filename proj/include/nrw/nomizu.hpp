#ifndef NRW_NOMIZU_HPP
#define NRW_NOMIZU_HPP

#include "nrw/extension.hpp"
#include "nrw/liealgebra.hpp"
#include "nrw/model.hpp"

namespace nrw {

/// Nomizu construction on isotropy ⊕ m with bracket
/// [A+X, B+Y] = [A,B]_{so(m)} − R(X,Y) + A(Y) − B(X) − T(X,Y).
/// The isotropy must contain im(R) and stabilize (T,R) (guards can be disabled
/// for diagnostics of corrupted models).
GradedLieAlgebra nomizu_algebra(const InfinitesimalModel& model,
                                const std::vector<SkewMap>& isotropy,
                                bool enforce_guards = true);

/// Max over basis triples of ‖𝔖[[x,y],z]‖∞.
double jacobi_residual(const GradedLieAlgebra& L);

/// The double extension g(k) = h ⊕ k ⊕ n ⊕ m, built block by block from
/// orthonormalized ExtensionData with h = im(R₀).
GradedLieAlgebra double_extension(const ExtensionData& data);

/// Structure checks on a double-extension output, plus the
/// fibration shadows: r = h⊕k⊕n subalgebra and q = ker of its m-action.
struct StructureChecks {
  VerificationReport report;
  double l_two_step_residual; // ‖[[l,l],l]‖∞ — 0 for the 2-step nilpotent family
  int q_dim;
};
StructureChecks structure_checks(const GradedLieAlgebra& L, double tol = tolerance());

/// Invariant symmetric bilinear form on a graded algebra.
struct InvariantMetric {
  Eigen::MatrixXd g;
  double invariance_residual;
};

/// Kostant's metric: unique ad-invariant extension of g0 (given on the
/// non-isotropy block, usually the identity) with h ⊥ m and ḡ|_h nondegenerate.
InvariantMetric invariant_metric_extension(const GradedLieAlgebra& base,
                                           const Eigen::MatrixXd& g0);

/// Kostant metric on the semisimple part h ⊕ m_ss of the base transvection
/// algebra (flat directions dropped per the base grading), with g₀ = identity.
InvariantMetric base_invariant_metric(const GradedLieAlgebra& base_alg, const ExtensionData& ext);

/// The homomorphism f(x) = x − a(x) from the (semisimple part of the) base
/// transvection algebra into g(k).
struct HomomorphismF {
  Eigen::MatrixXd matrix;                 // dim g(k) × dim g_ss
  double residual;                        // max ‖f([x,y]) − [f(x),f(y)]‖∞
  bool injective;
  std::vector<Eigen::VectorXd> b;         // b-realization of each k basis vector in g_ss
  std::vector<int> ss_columns;            // base-algebra indices forming g_ss
};
HomomorphismF homomorphism_f(const GradedLieAlgebra& base_alg, const ExtensionData& ext,
                             const InvariantMetric& gbar);

/// Transitive-presentation basis (flat bases get the identity
/// presentation). Vectors are given in g(k) coordinates; e-vectors additionally
/// carry their a-coefficients over the k basis (e_j = m_j + Σ coeff·(n_i+k_i)).
struct PresentationVector {
  std::string label;
  Eigen::VectorXd gk;
};
struct PresentationBasis {
  std::vector<PresentationVector> f1z, f1p, f2, f3, e;
  Eigen::MatrixXd e_acoords;              // n_m × l matrix of a(m_j) coefficients
  std::vector<PresentationVector> h0, h2; // residual isotropy pieces
  VerificationReport checks;
};
PresentationBasis presentation_basis(const GradedLieAlgebra& base_alg, const ExtensionData& ext,
                                     const InvariantMetric& gbar);

/// Splitting of k over a product base g ⊕ R^k, with consistency checks.
struct MixedDecomposition {
  Eigen::MatrixXd k1z, k1p, k2, k3;       // orthonormal column bases in k coordinates
  VerificationReport checks;
  PresentationBasis presentation;
};
MixedDecomposition mixed_decomposition(const GradedLieAlgebra& base_alg, const ExtensionData& ext,
                                       const InvariantMetric& gbar);

/// Nomizu algebra of the base with isotropy = im(R₀) — the ingredient shared by
/// the presentation operations; blocks "h" and "m".
GradedLieAlgebra base_transvection_algebra(const InfinitesimalModel& base);

} // namespace nrw

#endif
