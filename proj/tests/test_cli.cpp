#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include "nuca/json_io.hpp"

// Black-box tests: run the installed binary and look only at exit codes,
// stdout bytes, and parsed JSON.

namespace {

using nuca::Json;

struct RunResult {
  int exit_code = -1;
  std::string out;
};

std::string tmp_dir() {
  static std::string dir = [] {
    std::string d = "/tmp/nucadec-cli-" + std::to_string(::getpid());
    std::system(("mkdir -p " + d).c_str());
    return d;
  }();
  return dir;
}

std::string write_fixture(const std::string& name, const std::string& body) {
  std::string path = tmp_dir() + "/" + name;
  std::ofstream f(path);
  f << body;
  return path;
}

RunResult run(const std::string& args) {
  std::string out_path = tmp_dir() + "/out.txt";
  std::string cmd = std::string(NUCADEC_BIN) + " " + args + " > " + out_path + " 2>&1";
  int raw = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  std::ifstream f(out_path);
  std::stringstream ss;
  ss << f.rdbuf();
  r.out = ss.str();
  return r;
}

const char* kIdentity = R"js({"p":2,"k":1,"d":1,"memory":[[0]],
  "base":{"kind":"linear","coeffs":{"(0)":[[1]]}}})js";

const char* kReadRight = R"js({"p":2,"k":1,"d":1,"memory":[[-1],[0],[1]],
  "base":{"kind":"linear","coeffs":{}},
  "perturbations":[{"cell":[0],"rule":{"kind":"linear","coeffs":{"(1)":[[1]]}}}]})js";

const char* kOnePlusX = R"js({"p":2,"k":1,"d":1,"memory":[[-1],[0],[1]],
  "base":{"kind":"linear","coeffs":{"(0)":[[1]],"(1)":[[1]]}}})js";

const char* kInvolution = R"js({"p":2,"k":1,"d":1,"memory":[[-1],[0],[1]],
  "base":{"kind":"linear","coeffs":{"(0)":[[1]]}},
  "perturbations":[{"cell":[0],"rule":{"kind":"linear","coeffs":{"(0)":[[1]],"(1)":[[1]]}}}]})js";

const char* kRule90 = R"js({"p":2,"k":1,"d":1,"memory":[[-1],[0],[1]],
  "base":{"kind":"linear","coeffs":{"(-1)":[[1]],"(1)":[[1]]}}})js";

const char* kSparsePromise = R"js({"p":2,"k":1,"d":1,"memory":[[-1],[0],[1]],
  "base":{"kind":"linear","coeffs":{}},
  "sparse":{"clusters":[{"cells":[{"cell":[0],
      "rule":{"kind":"linear","coeffs":{"(1)":[[1]]}}}],
    "anchors":[[0]],"infinite":true}],"placement":"promise"}})js";

const char* kDelta = R"js({"support":[{"cell":[0],"value":[1]}]})js";

}  // namespace

TEST_CASE("decide: verdicts, certificates, exit 0") {
  std::string id = write_fixture("identity.json", kIdentity);
  RunResult r = run("decide periodic " + id);
  REQUIRE(r.exit_code == 0);
  Json j = Json::parse(r.out);
  CHECK(j["verdict"] == true);
  CHECK(j["certificate"]["period"] == 1);
  CHECK(j["property"] == "periodic");

  std::string rr = write_fixture("readright.json", kReadRight);
  r = run("decide nilpotent " + rr);
  REQUIRE(r.exit_code == 0);
  j = Json::parse(r.out);
  CHECK(j["verdict"] == true);
  CHECK(j["certificate"]["exponent"] == 2);

  // A negative verdict is still a completed decision: exit 0.
  std::string ox = write_fixture("onepx.json", kOnePlusX);
  r = run("decide injective " + ox);
  REQUIRE(r.exit_code == 0);
  j = Json::parse(r.out);
  CHECK(j["verdict"] == false);
  CHECK(j["certificate"].is_null());
  CHECK(j["diagnostics"]["kernel-window-dimension"] == "1");
}

TEST_CASE("decide: spec errors exit 2") {
  std::string sp = write_fixture("sparse.json", kSparsePromise);
  CHECK(run("decide injective " + sp).exit_code == 2);       // unsupported for sparse
  CHECK(run("decide nilpotent " + sp).exit_code == 0);       // supported for sparse

  std::string bad = write_fixture("bad.json", "{nope");
  CHECK(run("decide periodic " + bad).exit_code == 2);

  std::string id = write_fixture("identity.json", kIdentity);
  CHECK(run("decide frobnication " + id).exit_code == 2);    // unknown property

  std::string np = write_fixture("nonprime.json",
      R"js({"p":4,"k":1,"d":1,"memory":[[0]],"base":{"kind":"linear","coeffs":{}}})js");
  RunResult r = run("decide periodic " + np);
  CHECK(r.exit_code == 2);
  CHECK(r.out.find("prime") != std::string::npos);

  std::string d3 = write_fixture("d3.json",
      R"js({"p":2,"k":1,"d":3,"memory":[[0,0,0]],"base":{"kind":"linear","coeffs":{}}})js");
  CHECK(run("decide periodic " + d3).exit_code == 2);        // d gated to {1, 2}
}

TEST_CASE("invert: inverses, failures, and radius limits") {
  std::string inv = write_fixture("involution.json", kInvolution);
  RunResult r = run("invert " + inv);
  REQUIRE(r.exit_code == 0);
  // The involution is its own inverse, and emission is canonical, so the
  // inverse must match the canonical form of the input byte-for-byte.
  RunResult canon = run("power -n 1 " + inv);
  REQUIRE(canon.exit_code == 0);
  CHECK(r.out == canon.out);

  std::string ox = write_fixture("onepx.json", kOnePlusX);
  CHECK(run("invert " + ox).exit_code == 2);                 // not injective

  CHECK(run("invert --max-radius 0 " + inv).exit_code == 3); // too tight a budget
}

TEST_CASE("power: canonical emission and round-trip stability") {
  std::string r90 = write_fixture("rule90.json", kRule90);
  RunResult sq = run("power -n 2 " + r90);
  REQUIRE(sq.exit_code == 0);
  Json j = Json::parse(sq.out);
  CHECK(j["base"]["coeffs"].size() == 2);
  CHECK(j["base"]["coeffs"].contains("(-2)"));
  CHECK(j["base"]["coeffs"].contains("(2)"));

  std::string again = write_fixture("rule90sq.json", sq.out);
  RunResult rt = run("power -n 1 " + again);
  REQUIRE(rt.exit_code == 0);
  CHECK(rt.out == sq.out);

  CHECK(run("power -n 0 " + r90).exit_code == 2);            // exponent must be >= 1
}

TEST_CASE("dual: adjoint round-trip") {
  std::string r90 = write_fixture("rule90.json", kRule90);
  RunResult once = run("dual " + r90);
  REQUIRE(once.exit_code == 0);
  std::string dual_path = write_fixture("rule90dual.json", once.out);
  RunResult twice = run("dual " + dual_path);
  REQUIRE(twice.exit_code == 0);
  RunResult canon = run("power -n 1 " + r90);
  CHECK(twice.out == canon.out);                             // dual of dual = original
}

TEST_CASE("simulate: one line per time step") {
  std::string r90 = write_fixture("rule90.json", kRule90);
  std::string x0 = write_fixture("delta.json", kDelta);
  RunResult r = run("simulate --steps 2 " + r90 + " " + x0);
  REQUIRE(r.exit_code == 0);

  std::vector<std::string> lines;
  std::stringstream ss(r.out);
  std::string line;
  while (std::getline(ss, line))
    if (!line.empty()) lines.push_back(line);
  REQUIRE(lines.size() == 3);

  auto support_of = [](const std::string& s) {
    Json j = Json::parse(s);  // keep alive: the loop ranges over a subobject
    std::vector<int> cells;
    for (const Json& e : j["support"]) cells.push_back(e["cell"][0].get<int>());
    return cells;
  };
  CHECK(support_of(lines[0]) == std::vector<int>{0});
  CHECK(support_of(lines[1]) == std::vector<int>{-1, 1});
  CHECK(support_of(lines[2]) == std::vector<int>{-2, 2});
}

TEST_CASE("oracle: cross-checks agree and caps are honoured") {
  std::string rr = write_fixture("readright.json", kReadRight);
  RunResult r = run("oracle nilpotent " + rr);
  REQUIRE(r.exit_code == 0);
  Json j = Json::parse(r.out);
  CHECK(j["diagnostics"]["agree"] == "true");

  std::string ox = write_fixture("onepx.json", kOnePlusX);
  r = run("oracle injective " + ox);
  REQUIRE(r.exit_code == 0);
  CHECK(Json::parse(r.out)["diagnostics"]["agree"] == "true");

  std::string inv = write_fixture("involution.json", kInvolution);
  CHECK(run("oracle periodic --bound 2 " + inv).exit_code == 3);
}
