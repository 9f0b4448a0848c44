#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "paralab/cli.hpp"
#include "paralab/tptp.hpp"

using namespace paralab;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "paralab");
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch_dir() {
  auto dir = std::filesystem::temp_directory_path() / "paralab_cli_test";
  std::filesystem::create_directories(dir);
  return dir;
}

std::string write(const std::string& name, const std::string& text) {
  auto path = (scratch_dir() / name).string();
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST_CASE("c1 export matches the golden file") {
  CHECK(export_tptp(c1()) == slurp(PARALAB_GOLDEN_DIR "/c1.p"));
}

TEST_CASE("export lines") {
  std::string doc = export_tptp(c1(), parse("i(X,X)"));
  CHECK(doc.find("fof(a1, axiom, ![X,Y]: p(i(X,i(Y,X)))).\n") != std::string::npos);
  CHECK(doc.find("fof(mp, axiom, ![X,Y]: ((p(i(X,Y)) & p(X)) => p(Y))).\n") != std::string::npos);
  CHECK(doc.find("fof(goal, conjecture, ![X]: p(i(X,X))).\n") != std::string::npos);
  CHECK(export_tptp(c1(), parse("i(X,X)"), true).find("fof(goal, axiom, ~(![X]: p(i(X,X)))).") != std::string::npos);
  CHECK(answer4_tptp() == "fof(answer4, conjecture, ?[X]: (p(X) => ![Y]: p(Y))).\n");
  CHECK(export_tptp(with_bottom(c1())).find("fof(bot, axiom, ![X]: p(i(bot,X))).") != std::string::npos);
}

TEST_CASE("exported axioms re-parse") {
  Theory t = with_bottom(with_explosion(c1()));
  std::istringstream doc(export_tptp(t));
  std::size_t parsed = 0;
  for (std::string line; std::getline(doc, line);) {
    auto term = axiom_term(line);
    if (!term) continue;
    ++parsed;
    CHECK(t.find_schema(line.substr(4, line.find(',') - 4)) == nullptr);  // ids are lowercased
    bool found = false;
    for (const auto& s : t.schemata) found = found || s.body == *term;
    CHECK(found);
  }
  CHECK(parsed == t.schemata.size());
}

TEST_CASE("cli: prove and check-proof") {
  auto r = cli({"prove", "--theory", "c1", "--goal", "i(X,X)"});
  CHECK(r.code == kExitSuccess);
  CHECK(r.out.find("i(X,X)") != std::string::npos);
  auto path = write("id.proof", r.out);
  CHECK(cli({"check-proof", path, "--goal", "i(p,p)"}).code == kExitSuccess);
  CHECK(cli({"check-proof", path, "--goal", "i(p,q)"}).code == kExitNegative);
  CHECK(cli({"check-proof", write("bad.proof", "1 AX A1 i(p,p)\n")}).code == kExitNegative);
  CHECK(cli({"check-proof", (scratch_dir() / "missing.proof").string()}).code == kExitUsage);
  CHECK(cli({"prove", "--goal", "p", "--max-generated", "100"}).code == kExitUnknown);
}

TEST_CASE("cli: models") {
  auto trivial = write("trivial.json", to_json(trivial_model()));
  CHECK(cli({"check-model", "--theory", "c1", "--model", trivial}).code == kExitSuccess);
  CHECK(cli({"check-model", "--theory", "c1+structural", "--model", trivial}).code == kExitNegative);
  CHECK(cli({"check-model", "--model", trivial, "require ?[X]: ~p(X)"}).code == kExitNegative);
  CHECK(cli({"check-model", "--model", write("broken.json", "{\"size\":1}")}).code == kExitUsage);

  auto found = cli({"find-model", "--max-size", "3", "require ?[X,Y]: ~p(i(a(X,n(X)),Y))"});
  CHECK(found.code == kExitSuccess);
  FiniteModel m = model_from_json(found.out.substr(0, found.out.find('\n')));
  CHECK(check_model(m, c1()).ok());

  auto none = cli({"find-model", "--theory", "c1+explosion", "--max-size", "3", "require ?[X,Y]: ~p(i(a(X,n(X)),Y))"});
  CHECK(none.code == kExitNegative);
  CHECK(none.out.find("\"last_completed_size\":3") != std::string::npos);

  auto listed = cli({"enumerate", "--max-size", "1"});
  CHECK(listed.code == kExitSuccess);
  CHECK(std::count(listed.out.begin(), listed.out.end(), '\n') == 2);
}

TEST_CASE("cli: experiment and export") {
  auto r = cli({"experiment", "3", "--max-size", "2"});
  CHECK(r.code == kExitSuccess);
  CHECK(r.out.find("\"verdict\": \"Evidence\"") != std::string::npos);
  CHECK(r.out.find("\"bound\": 2") != std::string::npos);
  auto e = cli({"export-tptp", "--theory", "c1"});
  CHECK(e.code == kExitSuccess);
  CHECK(e.out == export_tptp(c1()));
}

TEST_CASE("cli: usage errors") {
  CHECK(cli({}).code == kExitUsage);
  CHECK(cli({"frobnicate"}).code == kExitUsage);
  CHECK(cli({"prove"}).code == kExitUsage);
  CHECK(cli({"prove", "--goal", "i(X"}).code == kExitUsage);
  CHECK(cli({"prove", "--theory", "c7", "--goal", "p"}).code == kExitUsage);
  CHECK(cli({"find-model", "--max-size", "0"}).code == kExitUsage);
  CHECK(cli({"find-model", "require ?[X]: p(Y)"}).code == kExitUsage);
  CHECK(cli({"experiment", "7"}).code == kExitUsage);
  CHECK(cli({"prove", "--goal", "p", "--bogus"}).code == kExitUsage);
  auto help = cli({"--help"});
  CHECK(help.code == kExitSuccess);
  CHECK(help.out.find("find-model") != std::string::npos);
}

TEST_CASE("cli: PARALAB_MAX_SECONDS") {
  setenv("PARALAB_MAX_SECONDS", "never", 1);
  CHECK(cli({"find-model", "--max-size", "1"}).code == kExitUsage);
  setenv("PARALAB_MAX_SECONDS", "30", 1);
  CHECK(cli({"find-model", "--max-size", "1"}).code == kExitSuccess);
  unsetenv("PARALAB_MAX_SECONDS");
}
