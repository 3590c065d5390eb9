#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "nrw/catalog.hpp"
#include "nrw/error.hpp"
#include "nrw/extension.hpp"
#include "nrw/io.hpp"
#include "nrw/model.hpp"
#include "nrw/nomizu.hpp"

namespace {

using nlohmann::json;

void emit(const json& j, const std::string& out_path) {
  std::string text = nrw::canonical_dump(j);
  if (out_path.empty())
    std::cout << text;
  else
    nrw::write_file(out_path, text);
}

std::map<std::string, double> parse_params(const std::vector<std::string>& raw) {
  std::map<std::string, double> out;
  for (const auto& s : raw) {
    auto eq = s.find('=');
    if (eq == std::string::npos) throw nrw::Error("ParseError", "--param expects name=value");
    try {
      out[s.substr(0, eq)] = std::stod(s.substr(eq + 1));
    } catch (const std::exception&) {
      throw nrw::Error("ParseError", "--param value must be a number: " + s);
    }
  }
  return out;
}

std::vector<nrw::SkewMap> isotropy_from_spec(const nrw::InfinitesimalModel& model,
                                             const std::string& spec) {
  if (spec == "auto") return nrw::image_of_R(model);
  json j;
  try {
    j = json::parse(nrw::read_file(spec));
  } catch (const nlohmann::json::exception& e) {
    throw nrw::Error("ParseError", std::string("invalid isotropy JSON: ") + e.what());
  }
  if (!j.is_array()) throw nrw::Error("ParseError", "isotropy file must be a list of 2-forms");
  std::vector<nrw::SkewMap> out;
  for (const auto& fj : j) {
    nrw::KForm f(model.frame, 2);
    for (const auto& t : fj) {
      const auto& idx = t.at("idx");
      f.add_term({idx.at(0).get<int>() - 1, idx.at(1).get<int>() - 1}, t.at("c").get<double>());
    }
    out.push_back(nrw::two_form_to_skew(f));
  }
  return out;
}

int cmd_verify(const std::string& path, const std::string& out_path) {
  nrw::InfinitesimalModel model = nrw::load_model_file(path);
  nrw::VerificationReport rep = nrw::verify_model(model);
  emit(nrw::report_to_json(rep), out_path);
  return rep.pass() ? 0 : 1;
}

int cmd_extend(const std::vector<std::string>& paths, const std::string& out_path) {
  nrw::ExtensionData data =
      paths.size() == 2
          ? nrw::load_extension_file(paths[1], nrw::load_model_file(paths[0]))
          : nrw::load_extension_file(paths[0]);
  nrw::VerificationReport rep = nrw::validate_extension_data(data);
  if (!rep.pass()) {
    emit(nrw::report_to_json(rep), "");
    return 1;
  }
  nrw::InfinitesimalModel model = nrw::build_extension(nrw::orthonormalize_k(data));
  emit(nrw::model_to_json(model), out_path);
  return 0;
}

int cmd_s_alg(const std::string& path, const std::string& isotropy, const std::string& out_path) {
  nrw::InfinitesimalModel model = nrw::load_model_file(path);
  std::vector<nrw::SkewMap> basis = nrw::compute_s(model, isotropy_from_spec(model, isotropy));
  emit({{"dim", static_cast<int>(basis.size())}, {"generators", nrw::skew_basis_to_json(basis)}},
       out_path);
  return 0;
}

int cmd_nomizu(const std::string& path, const std::string& ext_path, const std::string& out_path) {
  nrw::InfinitesimalModel model = nrw::load_model_file(path);
  json j;
  nrw::GradedLieAlgebra alg = [&] {
    if (ext_path.empty()) return nrw::nomizu_algebra(model, nrw::image_of_R(model));
    nrw::ExtensionData data = nrw::load_extension_file(ext_path, model);
    return nrw::double_extension(nrw::orthonormalize_k(data));
  }();
  j["algebra"] = nrw::algebra_to_json(alg);
  double jac = nrw::jacobi_residual(alg);
  j["jacobi_residual"] = jac;
  bool pass = jac < nrw::tolerance();
  if (!ext_path.empty()) {
    nrw::StructureChecks sc = nrw::structure_checks(alg);
    j["structure"] = nrw::report_to_json(sc.report);
    j["q_dim"] = sc.q_dim;
    j["l_two_step_residual"] = sc.l_two_step_residual;
    pass = pass && sc.report.pass();
  }
  emit(j, out_path);
  return pass ? 0 : 1;
}

int cmd_catalog_list(const std::string& out_path) {
  json entries = json::array();
  for (const auto& e : nrw::catalog_entries()) {
    json params = json::array();
    for (const auto& p : e.params)
      params.push_back({{"default", p.def}, {"domain", p.domain}, {"name", p.name}});
    entries.push_back({{"name", e.name}, {"notes", e.notes}, {"params", params}});
  }
  emit({{"entries", entries}}, out_path);
  return 0;
}

int cmd_catalog_run(const std::string& name, const std::vector<std::string>& raw_params,
                    const std::string& export_path, const std::string& out_path) {
  nrw::CatalogInstance inst = nrw::catalog_instantiate(name, parse_params(raw_params));
  nrw::VerificationReport rep = nrw::verify_model(inst.model);
  json diff = json::array();
  for (const auto& d : inst.diff)
    diff.push_back({{"constructed", d.constructed},
                    {"golden", d.golden},
                    {"location", d.location}});
  json j = {{"checks", nrw::report_to_json(rep)},
            {"diff", diff},
            {"has_golden", inst.golden_torsion.has_value()},
            {"name", inst.name},
            {"notes", inst.notes},
            {"params", inst.params}};
  if (!inst.diff.empty()) j["diff_note"] = "suspected transcription differences";
  if (!export_path.empty()) nrw::write_file(export_path, nrw::canonical_dump(nrw::model_to_json(inst.model)));
  emit(j, out_path);
  return rep.pass() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"construct and verify infinitesimal models of naturally reductive spaces"};
  app.require_subcommand(1);
  app.fallthrough();

  double tol = 0;
  bool tol_given = false;
  app.add_option("--tol", tol, "verification tolerance (default 1e-9 or NRW_TOL)")
      ->each([&](const std::string&) { tol_given = true; });
  std::string out_path;
  app.add_option("-o,--out", out_path, "write the JSON result to a file instead of stdout");
  bool json_flag = true;
  app.add_flag("--json,!--no-json", json_flag, "JSON output (default on)");

  auto* verify = app.add_subcommand("verify", "run all model checks on a model file");
  std::string verify_path;
  verify->add_option("model", verify_path, "model JSON file")->required();

  auto* extend = app.add_subcommand("extend", "build the extension of a base model");
  std::vector<std::string> extend_paths;
  extend->add_option("files", extend_paths, "either <base.json> <ext.json> or one extension file with an embedded base")
      ->expected(1, 2);

  auto* salg = app.add_subcommand("s-alg", "compute the symmetry algebra s of a model");
  std::string salg_path, isotropy = "auto";
  salg->add_option("model", salg_path, "model JSON file")->required();
  salg->add_option("--isotropy", isotropy, "'auto' (= image of R) or a 2-form list file");

  auto* nomizu = app.add_subcommand("nomizu", "Nomizu construction / double extension");
  std::string nomizu_path, nomizu_ext;
  nomizu->add_option("model", nomizu_path, "model JSON file")->required();
  nomizu->add_option("--double-extend", nomizu_ext, "extension file for the double extension");

  auto* catalog = app.add_subcommand("catalog", "built-in examples");
  auto* cat_list = catalog->add_subcommand("list", "list entries with parameter specs");
  auto* cat_run = catalog->add_subcommand("run", "instantiate and verify an entry");
  catalog->require_subcommand(1);
  std::string cat_name, export_path;
  std::vector<std::string> cat_params;
  cat_run->add_option("name", cat_name, "entry name")->required();
  cat_run->add_option("--param", cat_params, "parameter override name=value");
  cat_run->add_option("--export", export_path, "also export the constructed model file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (tol_given) {
      if (tol <= 0) throw nrw::Error("ParseError", "--tol must be positive");
      nrw::set_tolerance(tol);
    }
    if (*verify) return cmd_verify(verify_path, out_path);
    if (*extend) {
      if (extend_paths.empty()) throw nrw::Error("ParseError", "extend needs 1 or 2 files");
      return cmd_extend(extend_paths, out_path);
    }
    if (*salg) return cmd_s_alg(salg_path, isotropy, out_path);
    if (*nomizu) return cmd_nomizu(nomizu_path, nomizu_ext, out_path);
    if (*cat_list) return cmd_catalog_list(out_path);
    if (*cat_run) return cmd_catalog_run(cat_name, cat_params, export_path, out_path);
    return 2;
  } catch (const nrw::Error& e) {
    std::cerr << "error [" << e.code() << "]: " << e.what() << "\n";
    std::string c = e.code();
    return (c == "ParseError" || c == "UnknownEntry" || c == "ParamDomain") ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
