#ifndef NRW_LIEALGEBRA_HPP
#define NRW_LIEALGEBRA_HPP

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace nrw {

/// Finite-dimensional real Lie algebra given by structure constants over a
/// labeled basis, with an optional bilinear form.
class LieAlgebra {
public:
  LieAlgebra() = default;
  explicit LieAlgebra(std::vector<std::string> labels);

  int dim() const { return static_cast<int>(m_labels.size()); }
  const std::vector<std::string>& labels() const { return m_labels; }

  void set_bracket(int i, int j, const Eigen::VectorXd& value);
  const Eigen::VectorXd& bracket(int i, int j) const;
  Eigen::VectorXd bracket(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const;

  Eigen::MatrixXd ad(int i) const;
  Eigen::MatrixXd ad(const Eigen::VectorXd& u) const;

  double antisymmetry_residual() const;
  double jacobi_residual() const;
  Eigen::MatrixXd killing_form() const;

  /// ‖B([x,y],z) + B(y,[x,z])‖∞ over basis triples.
  double invariance_residual(const Eigen::MatrixXd& B) const;

  const std::optional<Eigen::MatrixXd>& bilinear_form() const { return m_form; }
  void set_bilinear_form(Eigen::MatrixXd B) { m_form = std::move(B); }

  /// Re-express along a basis change: column a of P holds new basis vector a
  /// in old coordinates (P must be invertible).
  LieAlgebra rebased(const Eigen::MatrixXd& P, std::vector<std::string> new_labels) const;

private:
  std::vector<std::string> m_labels;
  std::vector<std::vector<Eigen::VectorXd>> m_c;
  std::optional<Eigen::MatrixXd> m_form;
};

/// Lie algebra with a named partition of basis indices and designated isotropy blocks.
struct GradedLieAlgebra {
  LieAlgebra algebra;
  std::map<std::string, std::vector<int>> blocks;
  std::set<std::string> isotropy_blocks;

  std::vector<int> block(const std::string& name) const;
  std::vector<int> isotropy_indices() const;
  std::vector<int> complement_indices() const;

  /// ‖[isotropy, complement]-component-in-isotropy‖∞.
  double reductivity_residual() const;
};

} // namespace nrw

#endif
