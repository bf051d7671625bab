#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

namespace fs = std::filesystem;
using tancone::cli::run;

namespace {

const fs::path kProblems{TANCONE_PROBLEMS_DIR};

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome call(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string problem(const char* name) { return (kProblems / name).string(); }

class TempDir {
 public:
  TempDir() : path_(fs::temp_directory_path() / ("tancone_cli_" + std::to_string(std::random_device{}()))) {
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name, const std::string& contents = {}) const {
    const fs::path p = path_ / name;
    if (!contents.empty()) std::ofstream(p) << contents;
    return p.string();
  }

 private:
  fs::path path_;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

// Accepts nothing and rejects nothing, so every membership is Inconclusive.
const char* const kUndecided = R"([problem]
dimension = 2
objective = x2
point = 0, 0
[set]
type = builtin
name = parabola
[collections]
e1 = 1, 0
[config]
accept_tol = 1e-300
reject_floor = 1e300
resolution = 4
)";

}  // namespace

TEST_CASE("member exit codes") {
  CHECK(call({"member", problem("cusp.prob"), "--slice=infinity", "--coll=h01", "--w=1,0"}).code == 0);
  const Outcome rej = call({"member", problem("cusp.prob"), "--slice=proper", "--coll=h01", "--w=1,0"});
  CHECK(rej.code == 1);
  CHECK(rej.out.find("Rejected") != std::string::npos);
  CHECK(call({"member", problem("cusp.prob"), "--slice=first-order", "--w=0,1"}).code == 0);

  TempDir tmp;
  const std::string undecided = tmp.file("undecided.prob", kUndecided);
  CHECK(call({"member", undecided, "--slice=first-order", "--w=1,0"}).code == 3);

  const std::string csv = tmp.file("evidence.csv");
  CHECK(call({"member", problem("cusp.prob"), "--slice=zero", "--coll=h01", "--w=0,1", "--csv", csv}).code == 1);
  CHECK(slurp(csv).rfind("level,t,tau,ratio,distance,scaledDistance\n", 0) == 0);
}

TEST_CASE("usage and file errors") {
  CHECK(call({}).code == 64);
  CHECK(call({"frobnicate"}).code == 64);
  CHECK(call({"--help"}).code == 0);
  CHECK(call({"member", problem("cusp.prob"), "--slice=sideways", "--coll=h01", "--w=1,0"}).code == 64);
  CHECK(call({"member", problem("cusp.prob"), "--slice=proper", "--coll=nope", "--w=1,0"}).code == 64);
  CHECK(call({"member", problem("cusp.prob"), "--slice=proper", "--w=1,0"}).code == 64);
  CHECK(call({"member", problem("cusp.prob"), "--slice=proper", "--coll=h01", "--w=1,0,0"}).code == 64);
  CHECK(call({"member", problem("cusp.prob"), "--slice=proper", "--coll=h01", "--w=a,b"}).code == 64);
  const Outcome missing = call({"member", problem("missing.prob"), "--slice=proper", "--coll=h01", "--w=1,0"});
  CHECK(missing.code == 65);
  CHECK(missing.err.find("missing.prob") != std::string::npos);

  TempDir tmp;
  const std::string bad = tmp.file("bad.prob", "[problem]\ndimension = 2\npoint = 0, 0\nshape = round\n");
  const Outcome broken = call({"member", bad, "--slice=first-order", "--w=1,0"});
  CHECK(broken.code == 65);
  CHECK(broken.err.find("line 4") != std::string::npos);
}

TEST_CASE("sample writes one row per direction") {
  TempDir tmp;
  const std::string csv = tmp.file("cone.csv");
  const Outcome o = call({"sample", problem("cusp.prob"), "--slice=first-order", "--resolution=32", "--out", csv});
  CHECK(o.code == 0);
  const std::vector<std::string> rows = lines(slurp(csv));
  REQUIRE(rows.size() == 33);
  CHECK(rows[0] == "index,w1,w2,status");
  int accepted = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].ends_with(",Accepted")) {
      ++accepted;
      CHECK(rows[i].rfind("8,", 0) == 0);
    }
  }
  CHECK(accepted == 1);

  const Outcome again = call({"sample", problem("cusp.prob"), "--slice=first-order", "--resolution=32"});
  CHECK(again.out == slurp(csv));

  const Outcome single = call({"sample", problem("singleton.prob"), "--slice=first-order", "--resolution=8"});
  CHECK(single.code == 0);
  const std::vector<std::string> srows = lines(single.out);
  REQUIRE(srows.size() == 9);
  for (std::size_t i = 1; i < srows.size(); ++i) CHECK(srows[i].ends_with(",Rejected"));

  CHECK(call({"sample", problem("cusp.prob"), "--slice=infinity", "--resolution=8"}).code == 64);
  CHECK(call({"sample", problem("cusp.prob"), "--slice=first-order", "--resolution=0"}).code == 64);
}

TEST_CASE("checkmin exit codes") {
  const Outcome v = call({"checkmin", problem("cusp.prob"), "--max-order=2"});
  CHECK(v.code == 2);
  CHECK(v.out.find("Violated") != std::string::npos);
  CHECK(call({"checkmin", problem("sum_of_squares.prob"), "--max-order=2"}).code == 0);
  CHECK(call({"checkmin", problem("cusp_implicit.prob")}).code == 64);
  CHECK(call({"checkmin", problem("cusp.prob"), "--max-order=9"}).code == 64);
  CHECK(call({"checkmin", problem("cusp.prob"), "--max-order=1"}).code == 0);

  TempDir tmp;
  const std::string undecided = tmp.file("undecided.prob", kUndecided);
  CHECK(call({"checkmin", undecided, "--max-order=2"}).code == 3);
}

TEST_CASE("verify-props exit codes") {
  const Outcome ok = call({"verify-props", "--suite=pr5a", "--sets=half-plane", "--resolution=8"});
  CHECK(ok.code == 0);
  CHECK(ok.out.find("total contradictions: 0") != std::string::npos);
  CHECK(call({"verify-props", "--suite=bogus"}).code == 64);
  CHECK(call({"verify-props", "--suite=pr2", "--sets=torus"}).code == 64);
}
