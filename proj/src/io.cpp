#include "nrw/io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "nrw/error.hpp"

namespace nrw {

namespace {

using nlohmann::json;

[[noreturn]] void parse_fail(const std::string& msg) { throw Error("ParseError", msg); }

const json& need(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) parse_fail(std::string("missing field '") + key + "'");
  return j.at(key);
}

int need_int(const json& j, const char* what) {
  if (!j.is_number_integer()) parse_fail(std::string(what) + " must be an integer");
  return j.get<int>();
}

double need_number(const json& j, const char* what) {
  if (!j.is_number()) parse_fail(std::string(what) + " must be a number");
  return j.get<double>();
}

/// 1-based strictly increasing index tuple of the given length.
IndexTuple parse_idx(const json& j, int dim, size_t len) {
  if (!j.is_array() || j.size() != len) parse_fail("idx must be an array of the right length");
  IndexTuple out;
  int prev = 0;
  for (const auto& e : j) {
    int v = need_int(e, "idx entry");
    if (v < 1 || v > dim) parse_fail("idx entry out of range");
    if (v <= prev) parse_fail("idx must be strictly increasing");
    prev = v;
    out.push_back(v - 1);
  }
  return out;
}

KForm parse_form(const json& j, const FramePtr& frame, int degree) {
  if (!j.is_array()) parse_fail("form must be an array of {idx, c} terms");
  KForm out(frame, degree);
  for (const auto& t : j)
    out.add_term(parse_idx(need(t, "idx"), frame->dim(), degree), need_number(need(t, "c"), "c"));
  return out;
}

Eigen::MatrixXd parse_matrix(const json& j, int rows, int cols, const char* what) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows)
    parse_fail(std::string(what) + " has wrong shape");
  Eigen::MatrixXd m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    const auto& row = j.at(r);
    if (!row.is_array() || static_cast<int>(row.size()) != cols)
      parse_fail(std::string(what) + " has wrong shape");
    for (int c = 0; c < cols; ++c) m(r, c) = need_number(row.at(c), what);
  }
  return m;
}

json form_to_json(const KForm& f) {
  json out = json::array();
  for (const auto& [idx, c] : f.terms()) {
    json idx1 = json::array();
    for (int i : idx) idx1.push_back(i + 1);
    out.push_back({{"c", c}, {"idx", idx1}});
  }
  return out;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(row);
  }
  return out;
}

} // namespace

InfinitesimalModel model_from_json(const json& j) {
  if (!j.is_object()) parse_fail("model must be a JSON object");
  int dim = need_int(need(j, "dim"), "dim");
  if (dim < 0) parse_fail("dim must be nonnegative");
  const json& basis = need(j, "basis");
  if (!basis.is_array() || static_cast<int>(basis.size()) != dim)
    parse_fail("basis must list exactly dim labels");
  std::vector<std::string> labels;
  for (const auto& b : basis) {
    if (!b.is_string()) parse_fail("basis labels must be strings");
    labels.push_back(b.get<std::string>());
  }
  FramePtr frame = make_frame(labels);

  KForm torsion(frame, 3);
  if (j.contains("torsion")) torsion = parse_form(j.at("torsion"), frame, 3);

  CurvatureTensor curvature(frame);
  if (j.contains("curvature")) {
    const json& cv = j.at("curvature");
    if (!cv.is_object()) parse_fail("curvature must be an object");
    if (cv.contains("squares"))
      for (const auto& s : cv.at("squares"))
        curvature.add_square(parse_form(need(s, "form"), frame, 2),
                             need_number(need(s, "w"), "w"));
    if (cv.contains("pairs"))
      for (const auto& s : cv.at("pairs"))
        curvature.add_pair(parse_form(need(s, "a"), frame, 2), parse_form(need(s, "b"), frame, 2),
                           need_number(need(s, "w"), "w"));
  }

  std::map<std::string, std::vector<int>> grading;
  if (j.contains("grading")) {
    const json& g = j.at("grading");
    if (!g.is_object()) parse_fail("grading must be an object");
    for (const auto& [name, lst] : g.items()) {
      if (!lst.is_array()) parse_fail("grading block must be a list");
      std::vector<int> idx;
      for (const auto& e : lst) {
        int v = need_int(e, "grading index");
        if (v < 1 || v > dim) parse_fail("grading index out of range");
        idx.push_back(v - 1);
      }
      grading[name] = idx;
    }
  }

  std::map<std::string, double> params;
  if (j.contains("params")) {
    const json& p = j.at("params");
    if (!p.is_object()) parse_fail("params must be an object");
    for (const auto& [name, val] : p.items()) params[name] = need_number(val, "param");
  }

  const json& metric = need(j, "metric");
  InfinitesimalModel out{frame, std::move(torsion), std::move(curvature), std::move(grading),
                         std::move(params)};
  if (metric.is_string()) {
    if (metric.get<std::string>() != "orthonormal") parse_fail("unknown metric keyword");
    return out;
  }
  // SPD matrix: orthonormalize the frame via Cholesky, G = LLᵀ, new basis L^{-T}.
  Eigen::MatrixXd G = parse_matrix(metric, dim, dim, "metric");
  if (dim && (G - G.transpose()).cwiseAbs().maxCoeff() > tolerance())
    parse_fail("metric must be symmetric");
  Eigen::LLT<Eigen::MatrixXd> llt(G);
  if (llt.info() != Eigen::Success) parse_fail("metric must be positive definite");
  Eigen::MatrixXd S = Eigen::MatrixXd(llt.matrixL()).transpose().inverse();
  out.torsion = pullback(out.torsion, S, frame);
  out.curvature = pullback(out.curvature, S, frame);
  return out;
}

InfinitesimalModel load_model_file(const std::string& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    parse_fail(std::string("invalid JSON in ") + path + ": " + e.what());
  }
  return model_from_json(j);
}

json model_to_json(const InfinitesimalModel& m) {
  json j;
  j["dim"] = m.frame->dim();
  j["basis"] = m.frame->labels();
  j["metric"] = "orthonormal";
  if (!m.grading.empty()) {
    json g;
    for (const auto& [name, idx] : m.grading) {
      json lst = json::array();
      for (int i : idx) lst.push_back(i + 1);
      g[name] = lst;
    }
    j["grading"] = g;
  }
  j["torsion"] = form_to_json(m.torsion);
  json cv;
  json squares = json::array(), pairs = json::array();
  for (const auto& p : m.curvature.pairs()) {
    if (p.a.terms() == p.b.terms())
      squares.push_back({{"form", form_to_json(p.a)}, {"w", p.weight}});
    else
      pairs.push_back({{"a", form_to_json(p.a)}, {"b", form_to_json(p.b)}, {"w", p.weight}});
  }
  if (!squares.empty()) cv["squares"] = squares;
  if (!pairs.empty()) cv["pairs"] = pairs;
  j["curvature"] = cv.is_null() ? json::object() : cv;
  if (!m.params.empty()) j["params"] = m.params;
  return j;
}

ExtensionData extension_from_json(const json& j, std::optional<InfinitesimalModel> base_override,
                                  const std::string& base_dir) {
  if (!j.is_object()) parse_fail("extension must be a JSON object");

  const json& kj = need(j, "k");
  int l = need_int(need(kj, "dim"), "k.dim");
  if (l < 0) parse_fail("k.dim must be nonnegative");
  std::vector<std::string> klabels;
  if (kj.contains("labels")) {
    for (const auto& s : kj.at("labels")) {
      if (!s.is_string()) parse_fail("k.labels must be strings");
      klabels.push_back(s.get<std::string>());
    }
    if (static_cast<int>(klabels.size()) != l) parse_fail("k.labels must have k.dim entries");
  } else {
    for (int i = 0; i < l; ++i) klabels.push_back("k" + std::to_string(i + 1));
  }
  LieAlgebra k(klabels);
  if (kj.contains("brackets"))
    for (const auto& b : kj.at("brackets")) {
      int i = need_int(need(b, "i"), "bracket i") - 1;
      int jj = need_int(need(b, "j"), "bracket j") - 1;
      if (i < 0 || i >= l || jj < 0 || jj >= l) parse_fail("bracket index out of range");
      const json& co = need(b, "coeffs");
      if (!co.is_array() || static_cast<int>(co.size()) != l)
        parse_fail("bracket coeffs must have k.dim entries");
      Eigen::VectorXd v(l);
      for (int s = 0; s < l; ++s) v(s) = need_number(co.at(s), "bracket coeff");
      k.set_bracket(i, jj, v);
    }
  if (kj.contains("B"))
    k.set_bilinear_form(parse_matrix(kj.at("B"), l, l, "B"));
  else
    k.set_bilinear_form(Eigen::MatrixXd::Identity(l, l));

  InfinitesimalModel base = [&] {
    if (base_override) return *base_override;
    const json& bj = need(j, "base");
    if (bj.is_string()) {
      std::filesystem::path p(bj.get<std::string>());
      if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
      return load_model_file(p.string());
    }
    return model_from_json(bj);
  }();

  const json& pj = need(j, "phi");
  if (!pj.is_array() || static_cast<int>(pj.size()) != l)
    parse_fail("phi must list one 2-form per k basis vector");
  std::vector<KForm> phi;
  for (const auto& f : pj) phi.push_back(parse_form(f, base.frame, 2));

  std::vector<std::string> n_labels;
  if (j.contains("n_labels")) {
    for (const auto& s : j.at("n_labels")) {
      if (!s.is_string()) parse_fail("n_labels must be strings");
      n_labels.push_back(s.get<std::string>());
    }
    if (static_cast<int>(n_labels.size()) != l) parse_fail("n_labels must have k.dim entries");
  } else {
    for (const char* stem : {"f", "n", "nn"}) {
      n_labels.clear();
      bool ok = true;
      for (int i = 0; i < l; ++i) {
        std::string lab = stem + std::to_string(i + 1);
        if (base.frame->index_of(lab) >= 0) ok = false;
        n_labels.push_back(lab);
      }
      if (ok) break;
    }
  }
  return ExtensionData{std::move(k), std::move(phi), std::move(base), std::move(n_labels)};
}

ExtensionData load_extension_file(const std::string& path,
                                  std::optional<InfinitesimalModel> base_override) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    parse_fail(std::string("invalid JSON in ") + path + ": " + e.what());
  }
  return extension_from_json(j, std::move(base_override),
                             std::filesystem::path(path).parent_path().string());
}

json report_to_json(const VerificationReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name}, {"pass", c.pass}, {"residual", c.residual}});
  return {{"checks", checks}, {"pass", r.pass()}, {"tolerance", r.tolerance}};
}

json skew_basis_to_json(const std::vector<SkewMap>& basis) {
  json out = json::array();
  for (const auto& a : basis) out.push_back(form_to_json(skew_to_two_form(a)));
  return out;
}

json algebra_to_json(const GradedLieAlgebra& L) {
  json j;
  j["labels"] = L.algebra.labels();
  json blocks;
  for (const auto& [name, idx] : L.blocks) {
    json lst = json::array();
    for (int i : idx) lst.push_back(i + 1);
    blocks[name] = lst;
  }
  j["blocks"] = blocks;
  j["isotropy_blocks"] = L.isotropy_blocks;
  json brackets = json::array();
  int d = L.algebra.dim();
  for (int i = 0; i < d; ++i)
    for (int jj = i + 1; jj < d; ++jj) {
      const Eigen::VectorXd& v = L.algebra.bracket(i, jj);
      if (v.size() == 0 || v.cwiseAbs().maxCoeff() == 0.0) continue;
      json coeffs = json::array();
      for (int s = 0; s < d; ++s) coeffs.push_back(v(s));
      brackets.push_back({{"coeffs", coeffs}, {"i", i + 1}, {"j", jj + 1}});
    }
  j["brackets"] = brackets;
  return j;
}

std::string canonical_dump(const json& j) { return j.dump(2) + "\n"; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) parse_fail("cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) parse_fail("cannot write file: " + path);
  out << content;
}

} // namespace nrw
