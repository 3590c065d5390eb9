#ifndef NRW_MODEL_HPP
#define NRW_MODEL_HPP

#include <map>
#include <string>
#include <vector>

#include "nrw/curvature.hpp"
#include "nrw/kform.hpp"
#include "nrw/skew.hpp"
#include "nrw/tolerance.hpp"

namespace nrw {

/// Torsion/curvature pair on an orthonormal frame, with optional index grading
/// and provenance parameters.
struct InfinitesimalModel {
  FramePtr frame;
  KForm torsion;       // degree 3
  CurvatureTensor curvature;
  std::map<std::string, std::vector<int>> grading; // block name -> 0-based indices
  std::map<std::string, double> params;

  static InfinitesimalModel flat(FramePtr frame);
};

struct Check {
  std::string name;
  double residual;
  bool pass;
};

struct VerificationReport {
  std::vector<Check> checks;
  double tolerance;
  std::string frame_fingerprint;

  void add(const std::string& name, double residual);
  void add(const std::string& name, double residual, bool pass);
  bool pass() const;
  double residual(const std::string& name) const; // -1 when absent
};

/// Coefficient vector of T(e_i, e_j).
Eigen::VectorXd torsion_map(const InfinitesimalModel& m, int i, int j);

/// Bilinear extension of torsion_map.
Eigen::VectorXd torsion_map(const InfinitesimalModel& m, const Eigen::VectorXd& u,
                            const Eigen::VectorXd& v);

/// σ_T = ½ Σ (e_i⌟T)∧(e_i⌟T).
KForm sigma_T(const KForm& t);

/// 4-form component of R: Σ w·(a∧b) over the symmetric pairs.
KForm bianchi_4form(const CurvatureTensor& r);

/// max over basis pairs of ‖R(e_i,e_j)·T‖∞ and ‖R(e_i,e_j)·R‖∞.
Check check_invariance(const InfinitesimalModel& m, double tol = tolerance());

/// First Bianchi identity, both routes: cyclic sum over basis triples, and the
/// 4-form identity b(R) = 2σ_T (scaled so both residuals are comparable).
std::pair<Check, Check> check_bianchi1(const InfinitesimalModel& m, double tol = tolerance());

/// Second Bianchi identity 𝔖 R(T(X,Y),Z) = 0 over basis triples.
Check check_bianchi2(const InfinitesimalModel& m, double tol = tolerance());

/// All Ambrose–Singer checks.
VerificationReport verify_model(const InfinitesimalModel& m, double tol = tolerance());

/// Basis of {A ∈ so(n) : A·T = 0, A·R = 0} in deterministic canonical order.
std::vector<SkewMap> stabilizer(const InfinitesimalModel& m);

/// Canonical basis of span{R(e_i,e_j)}; asserts it lies in the stabilizer and is
/// commutator-closed. Throws ImageNotInStabilizer on an inconsistent model.
std::vector<SkewMap> image_of_R(const InfinitesimalModel& m, double tol = tolerance());

} // namespace nrw

#endif
