#include "nrw/catalog.hpp"

#include <cmath>
#include <complex>
#include <map>
#include <set>

#include "nrw/error.hpp"

namespace nrw {

namespace {

using cmat = Eigen::Matrix3cd;
const std::complex<double> I(0.0, 1.0);

/// Negative real trace form −½ Re tr(XY) on su(3); makes m1..m7 orthonormal.
double su3_ip(const cmat& a, const cmat& b) { return -0.5 * (a * b).trace().real(); }

cmat su3_comm(const cmat& a, const cmat& b) { return a * b - b * a; }

std::vector<std::string> labeled(const std::string& stem, int n, int start = 1) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back(stem + std::to_string(start + i));
  return out;
}

KForm two_form(const FramePtr& f, std::initializer_list<std::pair<std::pair<int, int>, double>> t) {
  KForm out(f, 2);
  for (const auto& [ij, c] : t) out.add_term({ij.first, ij.second}, c);
  return out;
}

double get_param(const std::map<std::string, double>& p, const std::string& name) {
  return p.at(name);
}

// --- su2xsu2: 1-parameter family on SU(2)×SU(2)×R³ over a flat biinvariant base.

CatalogInstance build_su2xsu2(const std::map<std::string, double>& p) {
  double alpha = get_param(p, "alpha");
  double lambda = get_param(p, "lambda");
  if (alpha <= 0) throw Error("ParamDomain", "su2xsu2 requires alpha > 0");
  if (lambda == 0) throw Error("ParamDomain", "su2xsu2 requires lambda != 0");
  double q = 1.0 / std::sqrt(1.0 + alpha);
  double c = (1.0 - alpha) * std::sqrt(1.0 + 1.0 / alpha) / (1.0 + alpha);

  FramePtr bf = make_frame(labeled("e", 6));
  KForm T0(bf, 3);
  T0.add_term({0, 1, 2}, q);
  T0.add_term({0, 4, 5}, q);
  T0.add_term({1, 3, 5}, -q); // m_{264}
  T0.add_term({2, 3, 4}, q);
  T0.add_term({3, 4, 5}, -c);
  InfinitesimalModel base{bf, T0, CurvatureTensor::zero(bf), {}, {{"alpha", alpha}}};

  LieAlgebra k(labeled("k", 3));
  Eigen::VectorXd v(3);
  v << 0, 0, -lambda * q;
  k.set_bracket(0, 1, v);
  v << -lambda * q, 0, 0;
  k.set_bracket(1, 2, v);
  v << 0, -lambda * q, 0; // [k3,k1] = -λq k2
  k.set_bracket(2, 0, v);
  k.set_bilinear_form(Eigen::MatrixXd::Identity(3, 3));

  std::vector<KForm> phi;
  phi.push_back(two_form(bf, {{{1, 2}, -lambda * q}, {{4, 5}, -lambda * q}}));
  phi.push_back(two_form(bf, {{{0, 2}, lambda * q}, {{3, 5}, lambda * q}}));   // −λq(m31+m64)
  phi.push_back(two_form(bf, {{{0, 1}, -lambda * q}, {{3, 4}, -lambda * q}})); // −λq(m12+m45)

  CatalogInstance out;
  out.data = ExtensionData{std::move(k), std::move(phi), std::move(base), labeled("f", 3)};
  out.model = build_extension(out.data);

  // Reference tensors, transcribed verbatim (frame f1 f2 f3 e1..e6, 0-based 0..8).
  KForm gt(out.model.frame, 3);
  gt.add_term({3, 4, 5}, q);
  gt.add_term({3, 7, 8}, q);
  gt.add_term({4, 6, 8}, -q);
  gt.add_term({5, 6, 7}, q);
  gt.add_term({6, 7, 8}, -c);
  double w = lambda * q;
  gt.add_term({0, 4, 5}, w);  // f1∧e23
  gt.add_term({0, 7, 8}, w);  // f1∧e56
  gt.add_term({1, 3, 5}, -w); // f2∧e31
  gt.add_term({1, 6, 8}, -w); // f2∧e64
  gt.add_term({2, 3, 4}, w);  // f3∧e12
  gt.add_term({2, 6, 7}, w);  // f3∧e45
  gt.add_term({0, 1, 2}, -2.0 * w);
  out.golden_torsion = gt;

  CurvatureTensor gr(out.model.frame);
  double w2 = lambda * lambda * q * q;
  gr.add_square(two_form(out.model.frame, {{{4, 5}, 1}, {{7, 8}, 1}, {{1, 2}, 1}}), w2);
  gr.add_square(two_form(out.model.frame, {{{3, 5}, -1}, {{6, 8}, -1}, {{0, 2}, -1}}), w2);
  gr.add_square(two_form(out.model.frame, {{{3, 4}, 1}, {{6, 7}, 1}, {{0, 1}, 1}}), w2);
  out.golden_curvature = gr;
  return out;
}

// --- gordon-nil: 2-step nilpotent family over a flat R⁵ base, abelian k.

CatalogInstance build_gordon_nil(const std::map<std::string, double>& p) {
  double l1 = get_param(p, "lambda1");
  double l2 = get_param(p, "lambda2");
  if (l1 == 0 || l2 == 0) throw Error("ParamDomain", "gordon-nil requires lambda1, lambda2 != 0");

  FramePtr bf = make_frame(labeled("e", 5));
  InfinitesimalModel base = InfinitesimalModel::flat(bf);
  base.grading["flat"] = {0, 1, 2, 3, 4};

  LieAlgebra k(labeled("k", 2));
  k.set_bilinear_form(Eigen::MatrixXd::Identity(2, 2));
  std::vector<KForm> phi;
  phi.push_back(two_form(bf, {{{0, 1}, l1}}));
  phi.push_back(two_form(bf, {{{2, 3}, l2}}));

  CatalogInstance out;
  out.data = ExtensionData{std::move(k), std::move(phi), std::move(base), labeled("f", 2)};
  out.model = build_extension(out.data);
  return out;
}

// --- qh7: quaternionic Heisenberg group, su(2) over flat R⁴.

CatalogInstance build_qh7(const std::map<std::string, double>& p) {
  double lambda = get_param(p, "lambda");
  if (lambda == 0) throw Error("ParamDomain", "qh7 requires lambda != 0");

  FramePtr bf = make_frame(labeled("e", 4));
  InfinitesimalModel base = InfinitesimalModel::flat(bf);
  base.grading["flat"] = {0, 1, 2, 3};

  LieAlgebra k(labeled("k", 3));
  Eigen::VectorXd v(3);
  v << 0, 0, 2 * lambda;
  k.set_bracket(0, 1, v);
  v << 2 * lambda, 0, 0;
  k.set_bracket(1, 2, v);
  v << 0, 2 * lambda, 0;
  k.set_bracket(2, 0, v);
  k.set_bilinear_form(Eigen::MatrixXd::Identity(3, 3));

  std::vector<KForm> phi;
  phi.push_back(two_form(bf, {{{0, 2}, lambda}, {{1, 3}, lambda}}));
  phi.push_back(two_form(bf, {{{0, 1}, -lambda}, {{2, 3}, lambda}}));
  phi.push_back(two_form(bf, {{{0, 3}, -lambda}, {{1, 2}, lambda}}));

  CatalogInstance out;
  out.data = ExtensionData{std::move(k), std::move(phi), std::move(base), labeled("f", 3)};
  out.model = build_extension(out.data);

  // Reference tensors (frame f1 f2 f3 e1..e4, 0-based 0..6).
  KForm gt(out.model.frame, 3);
  gt.add_term({0, 3, 5}, lambda);
  gt.add_term({0, 4, 6}, lambda);
  gt.add_term({1, 3, 4}, -lambda);
  gt.add_term({1, 5, 6}, lambda);
  gt.add_term({2, 3, 6}, -lambda);
  gt.add_term({2, 4, 5}, lambda);
  gt.add_term({0, 1, 2}, 4 * lambda);
  out.golden_torsion = gt;

  CurvatureTensor gr(out.model.frame);
  gr.add_square(two_form(out.model.frame,
                         {{{1, 2}, 2 * lambda}, {{3, 5}, lambda}, {{4, 6}, lambda}}));
  gr.add_square(two_form(out.model.frame, // 2λf31 = −2λf13
                         {{{0, 2}, -2 * lambda}, {{3, 4}, -lambda}, {{5, 6}, lambda}}));
  gr.add_square(two_form(out.model.frame,
                         {{{0, 1}, 2 * lambda}, {{3, 6}, -lambda}, {{4, 5}, lambda}}));
  out.golden_curvature = gr;
  return out;
}

// --- s2r2: (SU(2)×H³)/R over the product base S² × R².

CatalogInstance build_s2r2(const std::map<std::string, double>& p) {
  double lambda = get_param(p, "lambda");
  double mu = get_param(p, "mu");
  if (lambda == 0 || mu == 0) throw Error("ParamDomain", "s2r2 requires lambda, mu != 0");

  FramePtr bf = make_frame(labeled("e", 4));
  CurvatureTensor R0(bf);
  R0.add_square(two_form(bf, {{{0, 1}, 1}}), -1.0);
  InfinitesimalModel base{bf, KForm(bf, 3), std::move(R0), {{"flat", {2, 3}}}, {}};

  LieAlgebra k(labeled("k", 1));
  k.set_bilinear_form(Eigen::MatrixXd::Identity(1, 1));
  std::vector<KForm> phi;
  phi.push_back(two_form(bf, {{{0, 1}, lambda}, {{2, 3}, mu}}));

  CatalogInstance out;
  out.data = ExtensionData{std::move(k), std::move(phi), std::move(base), labeled("f", 1)};
  out.model = build_extension(out.data);

  // Reference tensors (frame f1 e1..e4, 0-based 0..4).
  KForm gt(out.model.frame, 3);
  gt.add_term({0, 1, 2}, lambda);
  gt.add_term({0, 3, 4}, mu);
  out.golden_torsion = gt;
  CurvatureTensor gr(out.model.frame);
  gr.add_square(two_form(out.model.frame, {{{1, 2}, 1}}), -1.0);
  gr.add_square(two_form(out.model.frame, {{{1, 2}, lambda}, {{3, 4}, mu}}));
  out.golden_curvature = gr;
  return out;
}

// --- aloff-wallach: SU(3)/S¹ × R⁴ base, 4-dimensional k.

CatalogInstance build_aloff(const std::map<std::string, double>& p) {
  double lambda = get_param(p, "lambda");
  double mu1 = get_param(p, "mu1");
  double mu2 = get_param(p, "mu2");
  if (lambda == 0) throw Error("ParamDomain", "aloff-wallach requires lambda != 0");
  if (mu1 == 0 && mu2 == 0)
    throw Error("ParamDomain", "aloff-wallach requires (mu1, mu2) != (0, 0)");

  cmat H, M[7];
  H << I, 0, 0, 0, I, 0, 0, 0, -2.0 * I;
  M[0] << 0, -1, 0, 1, 0, 0, 0, 0, 0;
  M[1] << I, 0, 0, 0, -I, 0, 0, 0, 0;
  M[2] << 0, I, 0, I, 0, 0, 0, 0, 0;
  M[3] << 0, 0, -1, 0, 0, 0, 1, 0, 0;
  M[4] << 0, 0, I, 0, 0, 0, I, 0, 0;
  M[5] << 0, 0, 0, 0, 0, -1, 0, 1, 0;
  M[6] << 0, 0, 0, 0, 0, I, 0, I, 0;

  FramePtr bf = make_frame(labeled("e", 11));
  auto adform = [&](const cmat& x) {
    KForm f(bf, 2);
    for (int i = 0; i < 7; ++i)
      for (int j = i + 1; j < 7; ++j) f.add_term({i, j}, su3_ip(su3_comm(x, M[i]), M[j]));
    return f;
  };

  KForm T0(bf, 3);
  for (int i = 0; i < 7; ++i)
    for (int j = i + 1; j < 7; ++j)
      for (int s = j + 1; s < 7; ++s)
        T0.add_term({i, j, s}, -su3_ip(su3_comm(M[i], M[j]), M[s]));
  CurvatureTensor R0(bf);
  R0.add_square(adform(H), -1.0 / su3_ip(H, H));
  InfinitesimalModel base{bf, std::move(T0), std::move(R0), {{"flat", {7, 8, 9, 10}}}, {}};

  LieAlgebra k(labeled("k", 4));
  Eigen::VectorXd v = Eigen::VectorXd::Zero(4);
  v(2) = 2 * lambda;
  k.set_bracket(0, 1, v);
  v.setZero();
  v(0) = 2 * lambda;
  k.set_bracket(1, 2, v);
  v.setZero();
  v(1) = 2 * lambda;
  k.set_bracket(2, 0, v);
  k.set_bilinear_form(Eigen::MatrixXd::Identity(4, 4));

  std::vector<KForm> phi;
  phi.push_back((adform(M[0]) + two_form(bf, {{{7, 9}, 1}, {{8, 10}, 1}})) * lambda);
  phi.push_back((adform(M[1]) + two_form(bf, {{{7, 8}, -1}, {{9, 10}, 1}})) * lambda);
  phi.push_back((adform(M[2]) + two_form(bf, {{{7, 10}, -1}, {{8, 9}, 1}})) * lambda);
  phi.push_back(adform(H) * mu1 + two_form(bf, {{{7, 8}, 1}, {{9, 10}, 1}}) * mu2);

  CatalogInstance out;
  out.data = ExtensionData{std::move(k), std::move(phi), std::move(base), labeled("f", 4)};
  out.model = build_extension(out.data);
  if (mu2 != 0.0) return out; // reference tensors cover only the μ2 = 0 family

  // Reference tensors (frame f1..f4 e1..e11, 0-based 0..14), transcribed verbatim.
  const FramePtr& ef = out.model.frame;
  KForm gt(ef, 3);
  gt.add_term({4, 5, 6}, -2);
  gt.add_term({4, 8, 10}, -1); // −e1∧e57
  gt.add_term({4, 7, 9}, -1);  // −e1∧e46
  gt.add_term({5, 7, 8}, 1);   // e2∧e45
  gt.add_term({5, 9, 10}, -1); // −e2∧e67
  gt.add_term({6, 7, 10}, 1);  // e3∧e47
  gt.add_term({6, 8, 9}, -1);  // −e3∧e56
  gt.add_term({0, 5, 6}, 2 * lambda);
  gt.add_term({0, 8, 10}, lambda);
  gt.add_term({0, 7, 9}, lambda);
  gt.add_term({0, 11, 13}, lambda); // e_{8,10}
  gt.add_term({0, 11, 14}, lambda); // e_{8,11}
  gt.add_term({1, 4, 6}, -2 * lambda); // 2e31
  gt.add_term({1, 7, 8}, -lambda);
  gt.add_term({1, 9, 10}, lambda);
  gt.add_term({1, 11, 12}, lambda);  // e_{89}
  gt.add_term({1, 13, 14}, -lambda); // −e_{10,11}
  gt.add_term({2, 4, 5}, 2 * lambda);
  gt.add_term({2, 7, 10}, -lambda);
  gt.add_term({2, 8, 9}, lambda);
  gt.add_term({2, 11, 14}, lambda); // e_{8,11}
  gt.add_term({2, 13, 14}, lambda); // e_{10,11}
  gt.add_term({3, 7, 8}, -3 * mu1);
  gt.add_term({3, 9, 10}, -3 * mu1);
  gt.add_term({0, 1, 2}, 4 * lambda);
  out.golden_torsion = gt;

  CurvatureTensor gr(ef);
  gr.add_square(two_form(ef, {{{5, 6}, 2}, {{8, 10}, 1}, {{7, 9}, 1},
                              {{11, 13}, 1}, {{11, 14}, 1}, {{1, 2}, 2}}),
                lambda * lambda);
  gr.add_square(two_form(ef, {{{4, 6}, -2}, {{7, 8}, -1}, {{9, 10}, 1},
                              {{11, 12}, 1}, {{13, 14}, -1}, {{0, 2}, -2}}),
                lambda * lambda);
  gr.add_square(two_form(ef, {{{4, 5}, 2}, {{7, 10}, -1}, {{8, 9}, 1},
                              {{11, 14}, 1}, {{13, 14}, 1}, {{0, 1}, 2}}),
                lambda * lambda);
  gr.add_square(two_form(ef, {{{6, 7}, 1}, {{9, 10}, 1}}), 9 * mu1 * mu1); // e_{34}+e_{67}
  out.golden_curvature = gr;
  return out;
}

const char* kSu2xsu2Notes =
    "The reference mixed torsion terms +λ/√(1+α)·f_i∧(…) have the opposite sign from the "
    "construction T = T0 + Σ φ(k_i)∧n_i with the stated φ(k_i) = −λ/√(1+α)(…); the diff "
    "reports the 6 affected coefficients. The pure f123 term and the curvature agree.";

const char* kAloffNotes =
    "Reference tensors cover only mu2 = 0. Internal inconsistencies in the reference formulas: "
    "the f1- and f3-wedge terms both contain e_{8,11} although the stated φ(k_1) uses "
    "e_{9,11}; the reference curvature term (3μ1)²(e_{34}+e_{67})^⊙2 conflicts with the "
    "torsion term −3μ1 f_4∧(e_{45}+e_{67}); the reference curvature omits the base term R0. "
    "The diff lists every affected coefficient; the construction is the reference.";

} // namespace

const std::vector<CatalogEntry>& catalog_entries() {
  static const std::vector<CatalogEntry> entries = {
      {"su2xsu2",
       {{"alpha", 1.0, "alpha > 0"}, {"lambda", 1.0, "lambda != 0"}},
       kSu2xsu2Notes},
      {"gordon-nil",
       {{"lambda1", 1.0, "lambda1 != 0"}, {"lambda2", 1.0, "lambda2 != 0"}},
       "Two commuting rotations of flat R^5; no reference tensors. Arbitrary "
       "subalgebras k ⊂ so(n) are supported through the extension file format."},
      {"qh7", {{"lambda", 1.0, "lambda != 0"}}, ""},
      {"s2r2", {{"lambda", 1.0, "lambda != 0"}, {"mu", 1.0, "mu != 0"}}, ""},
      {"aloff-wallach",
       {{"lambda", 1.0, "lambda != 0"},
        {"mu1", 1.0, "(mu1, mu2) != (0, 0)"},
        {"mu2", 0.0, "(mu1, mu2) != (0, 0)"}},
       kAloffNotes},
  };
  return entries;
}

CatalogInstance catalog_instantiate(const std::string& name,
                                    const std::map<std::string, double>& overrides) {
  const CatalogEntry* entry = nullptr;
  for (const auto& e : catalog_entries())
    if (e.name == name) entry = &e;
  if (!entry) throw Error("UnknownEntry", "no catalog entry named '" + name + "'");

  std::map<std::string, double> params;
  for (const auto& ps : entry->params) params[ps.name] = ps.def;
  for (const auto& [key, val] : overrides) {
    if (!params.count(key))
      throw Error("ParamDomain", "unknown parameter '" + key + "' for entry '" + name + "'");
    params[key] = val;
  }

  CatalogInstance out;
  if (name == "su2xsu2")
    out = build_su2xsu2(params);
  else if (name == "gordon-nil")
    out = build_gordon_nil(params);
  else if (name == "qh7")
    out = build_qh7(params);
  else if (name == "s2r2")
    out = build_s2r2(params);
  else
    out = build_aloff(params);
  out.name = name;
  out.params = params;
  out.notes = entry->notes;
  if (out.golden_torsion)
    out.diff = golden_diff(out.model, *out.golden_torsion, *out.golden_curvature, tolerance());
  return out;
}

std::vector<DiffEntry> golden_diff(const InfinitesimalModel& model, const KForm& golden_t,
                                   const CurvatureTensor& golden_r, double threshold) {
  std::vector<DiffEntry> out;
  const FramePtr& f = model.frame;
  auto tuple_label = [&](const IndexTuple& idx) {
    std::string s;
    for (size_t i = 0; i < idx.size(); ++i) s += (i ? "," : "") + f->label(idx[i]);
    return s;
  };

  std::set<IndexTuple> keys;
  for (const auto& [idx, c] : model.torsion.terms()) keys.insert(idx);
  for (const auto& [idx, c] : golden_t.terms()) keys.insert(idx);
  for (const auto& idx : keys) {
    double a = model.torsion.coeff(idx);
    double b = golden_t.coeff(idx);
    if (std::abs(a - b) > threshold) out.push_back({"T(" + tuple_label(idx) + ")", a, b});
  }

  Eigen::MatrixXd gm = model.curvature.gram();
  Eigen::MatrixXd gg = golden_r.gram();
  auto pairs = lambda2_pairs(f->dim());
  for (size_t a = 0; a < pairs.size(); ++a)
    for (size_t b = a; b < pairs.size(); ++b)
      if (std::abs(gm(a, b) - gg(a, b)) > threshold)
        out.push_back({"R(" + f->label(pairs[a].first) + "," + f->label(pairs[a].second) + ";" +
                           f->label(pairs[b].first) + "," + f->label(pairs[b].second) + ")",
                       gm(a, b), gg(a, b)});
  return out;
}

} // namespace nrw
