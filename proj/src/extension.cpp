#include "nrw/extension.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "nrw/error.hpp"
#include "nrw/linalg.hpp"

namespace nrw {

namespace {

Eigen::VectorXd two_form_coords(const KForm& a) {
  int n = a.frame()->dim();
  Eigen::VectorXd v = Eigen::VectorXd::Zero(lambda2_dim(n));
  for (const auto& [idx, c] : a.terms()) v(lambda2_index(idx[0], idx[1], n)) = c;
  return v;
}

/// ad(k_i) of the (orthonormal-basis) algebra k as a 2-form on the n-block of `frame`,
/// where the n-block occupies indices [0, l).
KForm ad_form(const LieAlgebra& k, int i, const FramePtr& frame) {
  KForm f(frame, 2);
  int l = k.dim();
  for (int a = 0; a < l; ++a)
    for (int b = a + 1; b < l; ++b) f.add_term({a, b}, k.bracket(i, a)(b));
  return f;
}

} // namespace

std::vector<SkewMap> compute_s(const InfinitesimalModel& base,
                               const std::vector<SkewMap>& isotropy) {
  int n = base.frame->dim();
  int n2 = lambda2_dim(n);
  auto pairs = lambda2_pairs(n);
  std::vector<std::array<int, 3>> triples;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int kk = j + 1; kk < n; ++kk) triples.push_back({i, j, kk});
  int n3 = static_cast<int>(triples.size());
  int rows = n3 + n2 * n2 + static_cast<int>(isotropy.size()) * n * n;

  Eigen::MatrixXd M(rows, n2);
  for (int a = 0; a < n2; ++a) {
    KForm beta(base.frame, 2);
    beta.add_term({pairs[a].first, pairs[a].second}, 1.0);
    SkewMap A = two_form_to_skew(beta);
    KForm at = skew_action(A, base.torsion);
    for (int t = 0; t < n3; ++t)
      M(t, a) = at.coeff({triples[t][0], triples[t][1], triples[t][2]});
    Eigen::MatrixXd g = base.curvature.acted_by(A).gram();
    M.col(a).segment(n3, n2 * n2) = Eigen::Map<Eigen::VectorXd>(g.data(), n2 * n2);
    for (size_t h = 0; h < isotropy.size(); ++h) {
      Eigen::MatrixXd c = commutator(A, isotropy[h]).matrix();
      M.col(a).segment(n3 + n2 * n2 + static_cast<int>(h) * n * n, n * n) =
          Eigen::Map<Eigen::VectorXd>(c.data(), n * n);
    }
  }
  Eigen::MatrixXd ker = nullspace(M);
  Eigen::MatrixXd basis = canonical_row_basis(ker.transpose());
  std::vector<SkewMap> out;
  for (int r = 0; r < basis.rows(); ++r) {
    KForm f(base.frame, 2);
    for (size_t a = 0; a < pairs.size(); ++a)
      f.add_term({pairs[a].first, pairs[a].second}, basis(r, a));
    out.push_back(two_form_to_skew(f));
  }
  return out;
}

VerificationReport validate_extension_data(const ExtensionData& data, double tol) {
  VerificationReport rep;
  rep.tolerance = tol;
  rep.frame_fingerprint = data.base.frame->fingerprint();
  const LieAlgebra& k = data.k;
  int l = k.dim();

  rep.add("k-antisymmetry", k.antisymmetry_residual());
  rep.add("k-jacobi", k.jacobi_residual());

  Eigen::MatrixXd B =
      k.bilinear_form() ? *k.bilinear_form() : Eigen::MatrixXd::Identity(l, l);
  double sym = l ? (B - B.transpose()).cwiseAbs().maxCoeff() : 0.0;
  double min_eig = 1.0;
  if (l) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (B + B.transpose()));
    min_eig = es.eigenvalues().minCoeff();
  }
  rep.add("B-positive-definite", std::max(sym, std::max(0.0, tol - min_eig)),
          sym < tol && min_eig > 0);
  rep.add("B-invariance", k.invariance_residual(B));

  double deg = 0;
  for (const auto& f : data.phi) {
    if (f.degree() != 2 || *f.frame() != *data.base.frame) deg = 1;
  }
  rep.add("phi-shape", deg, deg == 0 && static_cast<int>(data.phi.size()) == l);
  if (deg != 0 || static_cast<int>(data.phi.size()) != l) return rep;

  // φ is a Lie homomorphism: [φ(k_i), φ(k_j)] = φ([k_i, k_j]).
  double hom = 0;
  std::vector<SkewMap> skews;
  for (const auto& f : data.phi) skews.push_back(two_form_to_skew(f));
  for (int i = 0; i < l; ++i)
    for (int j = i + 1; j < l; ++j) {
      KForm lhs = skew_to_two_form(commutator(skews[i], skews[j]));
      for (int s = 0; s < l; ++s) lhs += data.phi[s] * (-k.bracket(i, j)(s));
      hom = std::max(hom, lhs.inf_norm());
    }
  rep.add("phi-homomorphism", hom);

  // Faithfulness: the 2-forms are linearly independent.
  int n2 = lambda2_dim(data.base.frame->dim());
  Eigen::MatrixXd cols(n2, l);
  for (int i = 0; i < l; ++i) cols.col(i) = two_form_coords(data.phi[i]);
  int rk = l ? rank(cols) : 0;
  rep.add("phi-faithful", static_cast<double>(l - rk), rk == l);

  // φ(k) ⊆ s(base): kills T₀ and R₀, commutes with the base isotropy im(R₀).
  double in_s = 0;
  std::vector<SkewMap> iso = image_of_R(data.base, tol);
  for (int i = 0; i < l; ++i) {
    in_s = std::max(in_s, skew_action(skews[i], data.base.torsion).inf_norm());
    in_s = std::max(in_s, data.base.curvature.acted_by(skews[i]).inf_norm());
    for (const auto& h : iso)
      in_s = std::max(in_s, commutator(skews[i], h).matrix().cwiseAbs().maxCoeff());
  }
  rep.add("phi-in-s", in_s);

  // Label bookkeeping for the extended frame.
  double lab = 0;
  if (static_cast<int>(data.n_labels.size()) != l) lab = 1;
  for (const auto& s : data.n_labels)
    if (data.base.frame->index_of(s) >= 0) lab = 1;
  rep.add("n-labels", lab, lab == 0);
  return rep;
}

ExtensionData orthonormalize_k(const ExtensionData& data) {
  int l = data.k.dim();
  Eigen::MatrixXd B =
      data.k.bilinear_form() ? *data.k.bilinear_form() : Eigen::MatrixXd::Identity(l, l);
  Eigen::MatrixXd P = gram_schmidt(Eigen::MatrixXd::Identity(l, l), B);

  ExtensionData out = data;
  out.k = data.k.rebased(P, data.k.labels());
  out.k.set_bilinear_form(Eigen::MatrixXd::Identity(l, l));
  out.phi.clear();
  for (int i = 0; i < l; ++i) {
    KForm f(data.base.frame, 2);
    for (int j = 0; j < l; ++j) f += data.phi[j] * P(j, i);
    out.phi.push_back(std::move(f));
  }
  return out;
}

KForm psi_form(const ExtensionData& data, int i, const FramePtr& extended_frame) {
  KForm psi = ad_form(data.k, i, extended_frame);
  psi += inject(data.phi[i], extended_frame);
  return psi;
}

InfinitesimalModel build_extension(const ExtensionData& data) {
  int l = data.k.dim();
  if (l == 0) return data.base;
  if (data.k.bilinear_form() &&
      (*data.k.bilinear_form() - Eigen::MatrixXd::Identity(l, l)).cwiseAbs().maxCoeff() >
          tolerance())
    throw Error("BNotOrthonormal", "build_extension expects B = identity; run orthonormalize_k");

  FramePtr nf = make_frame(data.n_labels);
  FramePtr frame = concat_frames(*nf, *data.base.frame);

  KForm T = inject(data.base.torsion, frame);
  for (int i = 0; i < l; ++i) {
    KForm ni(frame, 1);
    ni.add_term({i}, 1.0);
    T += wedge(inject(data.phi[i], frame), ni);
  }
  // 2T_n with T_n(n_i,n_j,n_s) = B([k_i,k_j],k_s) = c_{ij}^s on the orthonormal basis.
  for (int i = 0; i < l; ++i)
    for (int j = i + 1; j < l; ++j)
      for (int s = j + 1; s < l; ++s) T.add_term({i, j, s}, 2.0 * data.k.bracket(i, j)(s));

  CurvatureTensor R = inject(data.base.curvature, frame);
  for (int i = 0; i < l; ++i) R.add_square(psi_form(data, i, frame));

  InfinitesimalModel out{frame, std::move(T), std::move(R), {}, data.base.params};
  std::vector<int> nidx(l), midx(data.base.frame->dim());
  for (int i = 0; i < l; ++i) nidx[i] = i;
  for (int i = 0; i < data.base.frame->dim(); ++i) midx[i] = l + i;
  out.grading["n"] = nidx;
  out.grading["m"] = midx;
  for (const auto& [name, idx] : data.base.grading) {
    if (name == "n" || name == "m") continue;
    std::vector<int> shifted;
    for (int i : idx) shifted.push_back(l + i);
    out.grading[name] = shifted;
  }
  return out;
}

InfinitesimalModel fiber_model(const ExtensionData& data) {
  FramePtr nf = make_frame(data.n_labels);
  int l = data.k.dim();
  KForm T(nf, 3);
  for (int i = 0; i < l; ++i)
    for (int j = i + 1; j < l; ++j)
      for (int s = j + 1; s < l; ++s) T.add_term({i, j, s}, 2.0 * data.k.bracket(i, j)(s));
  CurvatureTensor R(nf);
  for (int i = 0; i < l; ++i) R.add_square(ad_form(data.k, i, nf));
  return InfinitesimalModel{nf, std::move(T), std::move(R), {}, {}};
}

} // namespace nrw
