#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "nrw/catalog.hpp"
#include "nrw/error.hpp"
#include "nrw/extension.hpp"
#include "nrw/nomizu.hpp"

using namespace nrw;

TEST_CASE("transvection algebra of a bi-invariant base") {
  // S^3 x S^3 base: R = 0, so the isotropy is empty and [X,Y] = -T(X,Y).
  CatalogInstance su = catalog_instantiate("su2xsu2"); // alpha = 1: q = 1/sqrt(2)
  GradedLieAlgebra L = nomizu_algebra(su.data.base, {});
  CHECK(L.algebra.dim() == 6);
  Eigen::VectorXd v = L.algebra.bracket(0, 1);
  CHECK(v(2) == doctest::Approx(-1.0 / std::sqrt(2.0)));
  CHECK(jacobi_residual(L) == doctest::Approx(0.0));
  CHECK(L.reductivity_residual() == doctest::Approx(0.0));
}

TEST_CASE("nomizu guards") {
  CatalogInstance s2 = catalog_instantiate("s2r2");
  // im(R) is nonempty, so an empty isotropy cannot contain it.
  CHECK_THROWS_WITH_AS(nomizu_algebra(s2.data.base, {}),
                       doctest::Contains("IsotropyTooSmall"), Error);
  // A generator that moves T is rejected...
  CatalogInstance qh7 = catalog_instantiate("qh7");
  std::vector<SkewMap> bad = image_of_R(qh7.model);
  bad.push_back(two_form_to_skew(KForm::basis(qh7.model.frame, {0, 3})));
  CHECK_THROWS_AS(nomizu_algebra(qh7.model, bad), Error);
  // ...unless guards are disabled for diagnostics.
  GradedLieAlgebra L = nomizu_algebra(qh7.model, bad, false);
  CHECK(L.algebra.dim() == 4 + 7);
}

TEST_CASE("Jacobi holds exactly when the model checks do") {
  CatalogInstance qh7 = catalog_instantiate("qh7");
  std::vector<SkewMap> iso = image_of_R(qh7.model);
  CHECK(jacobi_residual(nomizu_algebra(qh7.model, iso)) < 1e-12);

  // Corrupting one torsion coefficient breaks a model check and Jacobi alike.
  InfinitesimalModel bad = qh7.model;
  bad.torsion.add_term({0, 1, 2}, 1e-2);
  CHECK_FALSE(verify_model(bad).pass());
  CHECK(jacobi_residual(nomizu_algebra(bad, iso, false)) > 1e-4);
}

TEST_CASE("double extension of the quaternionic example") {
  CatalogInstance qh7 = catalog_instantiate("qh7");
  GradedLieAlgebra gk = double_extension(orthonormalize_k(qh7.data));
  CHECK(gk.block("h").empty());
  CHECK(gk.block("k").size() == 3);
  CHECK(gk.block("n").size() == 3);
  CHECK(gk.block("m").size() == 4);
  CHECK(jacobi_residual(gk) < 1e-12);
  StructureChecks sc = structure_checks(gk);
  CHECK(sc.report.pass());
  CHECK(sc.q_dim == 3);
  CHECK(sc.l_two_step_residual == doctest::Approx(0.0));
}

TEST_CASE("structure checks across the catalog") {
  struct Row {
    const char* name;
    int q_dim;
    double two_step;
  };
  const Row rows[] = {{"su2xsu2", 3, 0.5},
                      {"gordon-nil", 2, 0.0},
                      {"qh7", 3, 0.0},
                      {"s2r2", 1, 1.0},
                      {"aloff-wallach", 5, 3.0 * std::sqrt(2.0)}};
  for (const Row& r : rows) {
    CatalogInstance inst = catalog_instantiate(r.name);
    GradedLieAlgebra gk = double_extension(orthonormalize_k(inst.data));
    INFO(r.name);
    CHECK(jacobi_residual(gk) < 1e-10);
    StructureChecks sc = structure_checks(gk);
    CHECK(sc.report.pass());
    CHECK(sc.q_dim == r.q_dim);
    CHECK(sc.l_two_step_residual == doctest::Approx(r.two_step).epsilon(1e-6));
  }
}

TEST_CASE("invariant metric extension") {
  // Round 2-sphere: transvection algebra is so(3), the extension gives
  // unit length to the isotropy generator.
  FramePtr f2 = standard_frame(2);
  CurvatureTensor r(f2);
  r.add_square(KForm::basis(f2, {0, 1}), -1.0);
  InfinitesimalModel s2{f2, KForm(f2, 3), r, {}, {}};
  GradedLieAlgebra alg = base_transvection_algebra(s2);
  REQUIRE(alg.block("h").size() == 1);
  InvariantMetric gm = invariant_metric_extension(alg, Eigen::MatrixXd::Identity(2, 2));
  CHECK(gm.g(alg.block("h")[0], alg.block("h")[0]) == doctest::Approx(1.0));
  CHECK(gm.invariance_residual < 1e-12);

  // A flat factor makes the algebra non-semisimple.
  CatalogInstance s2r2 = catalog_instantiate("s2r2");
  GradedLieAlgebra mixed = base_transvection_algebra(s2r2.data.base);
  CHECK_THROWS_WITH_AS(invariant_metric_extension(mixed, Eigen::MatrixXd::Identity(4, 4)),
                       doctest::Contains("NotSemisimple"), Error);

  // base_invariant_metric drops the flat block first and succeeds.
  InvariantMetric gss = base_invariant_metric(mixed, orthonormalize_k(s2r2.data));
  CHECK(gss.g.rows() == 3);
  CHECK(gss.g(0, 0) == doctest::Approx(1.0));
  CHECK(gss.invariance_residual < 1e-12);

  // Anchor value: the normal metric on su(3) gives the isotropy
  // generator squared length 1/6.
  CatalogInstance al = catalog_instantiate("aloff-wallach");
  GradedLieAlgebra ba = base_transvection_algebra(al.data.base);
  InvariantMetric ga = base_invariant_metric(ba, orthonormalize_k(al.data));
  CHECK(ga.g(0, 0) == doctest::Approx(1.0 / 6.0));
}

TEST_CASE("homomorphism f on the bi-invariant base") {
  CatalogInstance su = catalog_instantiate("su2xsu2");
  GradedLieAlgebra ba = base_transvection_algebra(su.data.base);
  ExtensionData ext = orthonormalize_k(su.data);
  HomomorphismF hf = homomorphism_f(ba, ext, base_invariant_metric(ba, ext));
  CHECK(hf.residual < 1e-12);
  CHECK(hf.injective);
  CHECK(hf.matrix.rows() == 12); // g(k) = k(3) + n(3) + m(6)
  CHECK(hf.matrix.cols() == 6);
  // f(m_1) = m_1 - lambda(n_1 + k_1) with lambda = 1.
  Eigen::VectorXd c0 = hf.matrix.col(0);
  CHECK(c0(0) == doctest::Approx(-1.0)); // k_1
  CHECK(c0(3) == doctest::Approx(-1.0)); // n_1
  CHECK(c0(6) == doctest::Approx(1.0));  // m_1
  CHECK(c0.cwiseAbs().sum() == doctest::Approx(3.0));
}

TEST_CASE("presentation basis: bi-invariant base") {
  CatalogInstance su = catalog_instantiate("su2xsu2", {{"lambda", 2.0}});
  GradedLieAlgebra ba = base_transvection_algebra(su.data.base);
  ExtensionData ext = orthonormalize_k(su.data);
  PresentationBasis p = presentation_basis(ba, ext, base_invariant_metric(ba, ext));
  CHECK(p.checks.pass());
  CHECK(p.f1z.empty());
  CHECK(p.f1p.size() == 3);
  CHECK(p.f2.empty());
  CHECK(p.f3.empty());
  CHECK(p.e.size() == 6);
  // e_j = m_j + lambda f_j: the a-coefficients are lambda on the matching
  // generator and zero elsewhere.
  Eigen::MatrixXd expect = Eigen::MatrixXd::Zero(6, 3);
  expect.topLeftCorner(3, 3) = 2.0 * Eigen::MatrixXd::Identity(3, 3);
  CHECK((p.e_acoords - expect).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("presentation basis: nilpotent-fiber kernels") {
  struct Row {
    const char* name;
    size_t f2, f3;
  };
  for (const Row& r : {Row{"gordon-nil", 0, 2}, Row{"qh7", 0, 3}, Row{"s2r2", 1, 0}}) {
    CatalogInstance inst = catalog_instantiate(r.name);
    GradedLieAlgebra ba = base_transvection_algebra(inst.data.base);
    ExtensionData ext = orthonormalize_k(inst.data);
    PresentationBasis p = presentation_basis(ba, ext, base_invariant_metric(ba, ext));
    INFO(r.name);
    CHECK(p.checks.pass());
    CHECK(p.f2.size() == r.f2);
    CHECK(p.f3.size() == r.f3);
  }
  // s2r2 keeps one residual isotropy direction h + a(h).
  CatalogInstance s2 = catalog_instantiate("s2r2");
  GradedLieAlgebra ba = base_transvection_algebra(s2.data.base);
  ExtensionData ext = orthonormalize_k(s2.data);
  PresentationBasis p = presentation_basis(ba, ext, base_invariant_metric(ba, ext));
  CHECK(p.h2.size() == 1);
}

TEST_CASE("presentation basis: Aloff-Wallach") {
  CatalogInstance al = catalog_instantiate("aloff-wallach");
  GradedLieAlgebra ba = base_transvection_algebra(al.data.base);
  ExtensionData ext = orthonormalize_k(al.data);
  PresentationBasis p = presentation_basis(ba, ext, base_invariant_metric(ba, ext));
  CHECK(p.checks.pass());
  CHECK(p.f1z.size() == 1);
  CHECK(p.f1p.empty());
  CHECK(p.f2.size() == 3);
  CHECK(p.f3.empty());
  CHECK(p.e.size() == 11);
  CHECK(p.h0.empty());
  CHECK(p.h2.empty());
  // The central direction pairs the isotropy generator with the abelian
  // k-generator only (g(k) blocks: h | k1..k4 | n1..n4 | m).
  const Eigen::VectorXd& z = p.f1z[0].gk;
  CHECK(std::abs(z(0)) > 0.5);                            // h component
  CHECK(z.segment(1, 3).cwiseAbs().maxCoeff() < 1e-12);   // no su(2) k-part
  CHECK(std::abs(z(4)) > 0.5);                            // k4 component
}

TEST_CASE("mixed decomposition") {
  // Non-product base is rejected.
  CatalogInstance su = catalog_instantiate("su2xsu2");
  GradedLieAlgebra bs = base_transvection_algebra(su.data.base);
  ExtensionData es = orthonormalize_k(su.data);
  CHECK_THROWS_WITH_AS(mixed_decomposition(bs, es, base_invariant_metric(bs, es)),
                       doctest::Contains("BaseNotProduct"), Error);

  // Aloff-Wallach: one central generator, three compact ones.
  CatalogInstance al = catalog_instantiate("aloff-wallach");
  GradedLieAlgebra ba = base_transvection_algebra(al.data.base);
  ExtensionData ea = orthonormalize_k(al.data);
  MixedDecomposition md = mixed_decomposition(ba, ea, base_invariant_metric(ba, ea));
  CHECK(md.checks.pass());
  CHECK(md.k1z.cols() == 1);
  CHECK(md.k1p.cols() == 0);
  CHECK(md.k2.cols() == 3);
  CHECK(md.k3.cols() == 0);

  // Fully flat base: everything lands in the two-step kernel piece.
  CatalogInstance go = catalog_instantiate("gordon-nil");
  GradedLieAlgebra bg = base_transvection_algebra(go.data.base);
  ExtensionData eg = orthonormalize_k(go.data);
  MixedDecomposition mg = mixed_decomposition(bg, eg, base_invariant_metric(bg, eg));
  CHECK(mg.checks.pass());
  CHECK(mg.k1z.cols() == 0);
  CHECK(mg.k2.cols() == 0);
  CHECK(mg.k3.cols() == 2);
  CHECK(mg.presentation.f3.size() == 2);
}
