#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "json.hpp"
#include "nrw/catalog.hpp"
#include "nrw/extension.hpp"
#include "nrw/io.hpp"

using namespace nrw;
using nlohmann::json;

namespace {

struct RunResult {
  int exit_code;
  std::string out;
  std::string err;
};

std::string tmp(const std::string& name) { return std::string(NRW_TMP_DIR) + "/" + name; }

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run(const std::string& args) {
  std::string out_path = tmp("cli_stdout.txt"), err_path = tmp("cli_stderr.txt");
  std::string cmd = std::string(NRW_CLI_PATH) + " " + args + " > " + out_path + " 2> " + err_path;
  int status = std::system(cmd.c_str());
  int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return {code, slurp(out_path), slurp(err_path)};
}

/// qh7 extension input: su(2) fiber over flat R^4.
json qh7_extension_json() {
  json base = {{"dim", 4},
               {"basis", {"e1", "e2", "e3", "e4"}},
               {"metric", "orthonormal"}};
  json phi = json::array();
  phi.push_back({{{"idx", {1, 3}}, {"c", 1.0}}, {{"idx", {2, 4}}, {"c", 1.0}}});
  phi.push_back({{{"idx", {1, 2}}, {"c", -1.0}}, {{"idx", {3, 4}}, {"c", 1.0}}});
  phi.push_back({{{"idx", {1, 4}}, {"c", -1.0}}, {{"idx", {2, 3}}, {"c", 1.0}}});
  json brackets = json::array();
  brackets.push_back({{"i", 1}, {"j", 2}, {"coeffs", {0.0, 0.0, 2.0}}});
  brackets.push_back({{"i", 2}, {"j", 3}, {"coeffs", {2.0, 0.0, 0.0}}});
  brackets.push_back({{"i", 3}, {"j", 1}, {"coeffs", {0.0, 2.0, 0.0}}});
  return {{"k", {{"dim", 3}, {"brackets", brackets}}}, {"phi", phi}, {"base", base}};
}

} // namespace

TEST_CASE("catalog list") {
  RunResult r = run("catalog list");
  CHECK(r.exit_code == 0);
  json j = json::parse(r.out);
  CHECK(j.at("entries").size() == 5);
  CHECK(j.at("entries")[0].at("name") == "su2xsu2");
}

TEST_CASE("catalog run, export and re-verify") {
  std::string model_path = tmp("cli_qh7.json");
  RunResult r = run("catalog run qh7 --export " + model_path);
  CHECK(r.exit_code == 0);
  json j = json::parse(r.out);
  CHECK(j.at("checks").at("pass") == true);
  CHECK(j.at("diff").empty());

  RunResult v = run("verify " + model_path);
  CHECK(v.exit_code == 0);
  CHECK(json::parse(v.out).at("pass") == true);

  // The exported file is the canonical serialization of the catalog model.
  CHECK(slurp(model_path) == canonical_dump(model_to_json(catalog_instantiate("qh7").model)));
}

TEST_CASE("catalog run reports reference discrepancies without failing") {
  RunResult r = run("catalog run su2xsu2");
  CHECK(r.exit_code == 0);
  json j = json::parse(r.out);
  CHECK(j.at("diff").size() == 6);
  CHECK(j.contains("diff_note"));
}

TEST_CASE("usage and parse errors exit with 2") {
  CHECK(run("frobnicate").exit_code == 2);
  CHECK(run("verify").exit_code == 2);
  CHECK(run("catalog run nope").exit_code == 2);
  CHECK(run("catalog run qh7 --param lambda=0").exit_code == 2);
  CHECK(run("catalog run qh7 --param lambda=abc").exit_code == 2);
  std::string bad = tmp("cli_bad.json");
  write_file(bad, "{ not json ]");
  CHECK(run("verify " + bad).exit_code == 2);
}

TEST_CASE("verify reports a failing model with exit 1") {
  json j = {{"dim", 5},
            {"basis", {"e1", "e2", "e3", "e4", "e5"}},
            {"metric", "orthonormal"},
            {"torsion", {{{"idx", {1, 2, 3}}, {"c", 1.0}}, {{"idx", {1, 4, 5}}, {"c", 1.0}}}}};
  std::string path = tmp("cli_fail.json");
  write_file(path, canonical_dump(j));
  RunResult r = run("verify " + path);
  CHECK(r.exit_code == 1);
  CHECK(r.out.find("bianchi1") != std::string::npos);

  // A huge tolerance waves it through.
  CHECK(run("--tol 10 verify " + path).exit_code == 0);
  CHECK(run("--tol -1 verify " + path).exit_code == 2);
}

TEST_CASE("extend builds the extension model") {
  std::string ext_path = tmp("cli_ext.json");
  write_file(ext_path, canonical_dump(qh7_extension_json()));
  RunResult r = run("extend " + ext_path);
  CHECK(r.exit_code == 0);
  // Byte-identical to the in-process construction.
  ExtensionData data = load_extension_file(ext_path);
  CHECK(r.out == canonical_dump(model_to_json(build_extension(orthonormalize_k(data)))));
  // The result itself verifies.
  std::string out_path = tmp("cli_ext_model.json");
  CHECK(run("extend " + ext_path + " -o " + out_path).exit_code == 0);
  CHECK(run("verify " + out_path).exit_code == 0);

  // Two-file form: explicit base plus extension without one.
  json base = qh7_extension_json().at("base");
  json ext_only = qh7_extension_json();
  ext_only.erase("base");
  std::string base_path = tmp("cli_base.json"), ext2_path = tmp("cli_ext2.json");
  write_file(base_path, canonical_dump(base));
  write_file(ext2_path, canonical_dump(ext_only));
  RunResult r2 = run("extend " + base_path + " " + ext2_path);
  CHECK(r2.exit_code == 0);
  CHECK(r2.out == r.out);
}

TEST_CASE("extend with an empty fiber returns the base") {
  json j = {{"k", {{"dim", 0}}},
            {"phi", json::array()},
            {"base", qh7_extension_json().at("base")}};
  std::string path = tmp("cli_ext_empty.json");
  write_file(path, canonical_dump(j));
  RunResult r = run("extend " + path);
  CHECK(r.exit_code == 0);
  json m = json::parse(r.out);
  CHECK(m.at("dim") == 4);
  CHECK(m.at("torsion").empty());
}

TEST_CASE("extend rejects inconsistent data with exit 1") {
  json j = qh7_extension_json();
  j["k"]["B"] = {{7.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}; // not invariant
  std::string path = tmp("cli_ext_bad.json");
  write_file(path, canonical_dump(j));
  RunResult r = run("extend " + path);
  CHECK(r.exit_code == 1);
  CHECK(r.out.find("B-invariance") != std::string::npos);
}

TEST_CASE("s-alg dimensions") {
  json flat = {{"dim", 4},
               {"basis", {"e1", "e2", "e3", "e4"}},
               {"metric", "orthonormal"}};
  std::string flat_path = tmp("cli_flat.json");
  write_file(flat_path, canonical_dump(flat));
  RunResult r = run("s-alg " + flat_path);
  CHECK(r.exit_code == 0);
  CHECK(json::parse(r.out).at("dim") == 6);

  std::string s2r2_path = tmp("cli_s2r2_base.json");
  write_file(s2r2_path, canonical_dump(model_to_json(catalog_instantiate("s2r2").data.base)));
  RunResult r2 = run("s-alg " + s2r2_path);
  CHECK(r2.exit_code == 0);
  CHECK(json::parse(r2.out).at("dim") == 2);
}

TEST_CASE("nomizu and the double extension") {
  std::string model_path = tmp("cli_qh7_full.json");
  write_file(model_path, canonical_dump(model_to_json(catalog_instantiate("qh7").model)));
  RunResult r = run("nomizu " + model_path);
  CHECK(r.exit_code == 0);
  json j = json::parse(r.out);
  CHECK(j.at("jacobi_residual").get<double>() < 1e-12);
  CHECK(j.at("algebra").at("labels").size() == 10); // im(R) is 3-dim over m = R^7

  std::string base_path = tmp("cli_qh7_base.json");
  write_file(base_path, canonical_dump(qh7_extension_json().at("base")));
  std::string ext_path = tmp("cli_qh7_ext.json");
  write_file(ext_path, canonical_dump(qh7_extension_json()));
  RunResult r2 = run("nomizu " + base_path + " --double-extend " + ext_path);
  CHECK(r2.exit_code == 0);
  json j2 = json::parse(r2.out);
  CHECK(j2.at("q_dim") == 3);
  CHECK(j2.at("structure").at("pass") == true);
  CHECK(j2.at("algebra").at("labels").size() == 10); // k(3) + n(3) + m(4)
}
