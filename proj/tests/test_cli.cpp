#include "doctest.h"

#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "json.hpp"

namespace {

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
  bool has(const std::string& needle) const { return out.find(needle) != std::string::npos; }
};

RunResult run(std::vector<std::string> args) {
  std::ostringstream out, err;
  RunResult r;
  r.code = dmt::run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

}  // namespace

TEST_CASE("witt law prints one polynomial per level") {
  auto r = run({"witt", "law", "--p", "2", "--n", "1"});
  CHECK(r.code == 0);
  CHECK(r.out == "phi_0 = x0 + y0\nphi_1 = x1 + y1 - x0*y0\n");
}

TEST_CASE("witt law kinds choose the symbol and the variable blocks") {
  auto mul = run({"witt", "law", "--p", "3", "--n", "0", "--kind", "mul"});
  CHECK(mul.code == 0);
  CHECK(mul.out == "psi_0 = x0*y0\n");
  auto neg = run({"witt", "law", "--p", "2", "--n", "1", "--kind", "neg"});
  CHECK(neg.code == 0);
  CHECK(neg.out == "nu_0 = -x0\nnu_1 = -x1 - x0^2\n");
}

TEST_CASE("witt eval carries into the next component") {
  auto r = run({"witt", "eval", "--p", "2", "--n", "2", "--lhs", "1,0,0", "--rhs", "1,0,0",
                "--op", "add"});
  CHECK(r.code == 0);
  CHECK(r.out == "0,1,0\n");
  auto m = run({"witt", "eval", "--p", "2", "--n", "1", "--lhs", "1,1", "--rhs", "1,0",
                "--op", "mul"});
  CHECK(m.code == 0);
  CHECK(m.out == "1,1\n");
}

TEST_CASE("levels past the cap are refused unless forced") {
  auto r = run({"witt", "law", "--p", "2", "--n", "99"});
  CHECK(r.code == 3);
  CHECK(r.out.empty());
  CHECK(r.err.find("--force") != std::string::npos);
}

TEST_CASE("bad arguments exit with code 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"nonsense"}).code == 2);
  CHECK(run({"witt", "law", "--p", "4", "--n", "1"}).code == 2);
  CHECK(run({"witt", "law", "--p", "2"}).code == 2);
  CHECK(run({"witt", "eval", "--p", "2", "--n", "1", "--lhs", "1", "--rhs", "0,0", "--op",
             "add"}).code == 2);
  CHECK(run({"witt", "eval", "--p", "3", "--n", "0", "--lhs", "5", "--rhs", "0", "--op",
             "add"}).code == 2);
  CHECK(run({"verify", "wobble"}).code == 2);
  CHECK(run({"witt", "law", "--p", "2", "--n", "1", "--format", "yaml"}).code == 2);
  CHECK(run({"scheme", "build", "--kind", "alpha:5", "--p", "2"}).code == 2);
  CHECK(run({"dieudonne", "inverse", "--module", "A/(F*V)", "--p", "2"}).code == 2);
}

TEST_CASE("help requests succeed") {
  auto r = run({"--help"});
  CHECK(r.code == 0);
  CHECK(r.has("witt"));
  CHECK(r.has("verify"));
  CHECK(r.has("DIEUDONNE_CACHE"));
}

TEST_CASE("scheme build prints the hopf presentation") {
  auto r = run({"scheme", "build", "--kind", "witt:1,1", "--p", "2"});
  CHECK(r.code == 0);
  CHECK(r.has("scheme witt:1,1 over F_2\n"));
  CHECK(r.has("dimension 16\n"));
  CHECK(r.has("length 4\n"));
  CHECK(r.has("a-number 1\n"));
  CHECK(r.has("ring F_2[x0, x1] with x0^4 = 0, x1^4 = 0\n"));
  CHECK(r.has("comul x0 = 1(x)x0 + x0(x)1\n"));
  CHECK(r.has("comul x1 = 1(x)x1 + x0(x)x0 + x1(x)1\n"));
  CHECK(r.has("hopf axioms: pass\n"));
}

TEST_CASE("scheme build handles duals and products") {
  auto d = run({"scheme", "build", "--kind", "dual:alpha:4", "--p", "2"});
  CHECK(d.code == 0);
  CHECK(d.has("scheme alpha:4^D over F_2"));
  CHECK(d.has("structure constants"));
  CHECK(d.has("hopf axioms: pass"));
  auto pr = run({"scheme", "build", "--kind", "alpha:2*alpha:2", "--p", "2"});
  CHECK(pr.code == 0);
  CHECK(pr.has("scheme alpha:2 x alpha:2 over F_2"));
  CHECK(pr.has("dimension 4"));
}

TEST_CASE("dieudonne enumerate prints the presentation of the witt module") {
  auto r = run({"dieudonne", "enumerate", "--scheme", "witt:1,1", "--p", "2"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("16 elements; cyclic; relations F^2, V^2\n", 0) == 0);
  CHECK(r.has("level 1\n"));
  CHECK(r.has("generator x1^: A/(F^2,V^2)\n"));
}

TEST_CASE("dieudonne enumerate still counts above the presentation cap") {
  auto r = run({"dieudonne", "enumerate", "--scheme", "witt:2,2", "--p", "2"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("512 elements; presentation skipped", 0) == 0);
  CHECK(r.has("level 2\n"));
}

TEST_CASE("dieudonne inverse realizes the supersingular module as ep") {
  auto r = run({"dieudonne", "inverse", "--module", "A/(F-V,p)", "--p", "2"});
  CHECK(r.code == 0);
  CHECK(r.has("module A/(F-V,p) over F_2: length 2\n"));
  CHECK(r.has("round trip D(inverse) matches: yes\n"));
  CHECK(r.has("isomorphic to ep\n"));
}

TEST_CASE("dieudonne inverse recognizes the biinfinitesimal witt scheme") {
  auto r = run({"dieudonne", "inverse", "--module", "A/(F^2,V^2)", "--p", "2"});
  CHECK(r.code == 0);
  CHECK(r.has("round trip D(inverse) matches: yes\n"));
  CHECK(r.has("isomorphic to witt:1,1\n"));
}

TEST_CASE("dual standard emits the functional and the isomorphism") {
  auto r = run({"dual", "standard", "--n", "1", "--m", "1", "--p", "2"});
  CHECK(r.code == 0);
  CHECK(r.has("standard functional on witt:1,1 over F_2\n"));
  CHECK(r.has("y = x0^2^\n"));
  CHECK(r.has("dieudonne generator: PASS\n"));
  CHECK(r.has("isomorphism witt:1,1^D -> witt:1,1\n"));
  CHECK(r.has("bijective: PASS\n"));
}

TEST_CASE("lambda prints the leibniz law and respects its cap") {
  auto r = run({"lambda", "--p", "2", "--r", "1"});
  CHECK(r.code == 0);
  CHECK(r.out == "lambda_1 = x1 + y1 + x0*y0\n");
  auto beyond = run({"lambda", "--p", "5", "--r", "2"});
  CHECK(beyond.code == 3);
}

TEST_CASE("verify defaults to a json report") {
  auto r = run({"verify", "diffops", "--p", "5"});
  CHECK(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["suite"] == "diffops");
  CHECK(j["pass"] == true);
  CHECK(j["failures"] == 0);
  REQUIRE(j["checks"].is_array());
  CHECK(j["total"].get<size_t>() == j["checks"].size());
  for (const auto& c : j["checks"]) {
    CHECK(c.contains("check"));
    CHECK(c["pass"] == true);
  }
}

TEST_CASE("verify text format prints one line per check") {
  auto r = run({"verify", "hopf", "--p", "3", "--format", "text"});
  CHECK(r.code == 0);
  size_t lines = 0;
  for (char c : r.out)
    if (c == '\n') ++lines;
  auto j = run({"verify", "hopf", "--p", "3"});
  auto total = nlohmann::json::parse(j.out)["total"].get<size_t>();
  CHECK(lines == total + 1);
  CHECK(r.out.rfind("PASS ", 0) == 0);
  CHECK(r.has("suite hopf: "));
}

TEST_CASE("machine output parses as json across commands") {
  for (auto args : std::vector<std::vector<std::string>>{
           {"witt", "law", "--p", "3", "--n", "1", "--format", "json"},
           {"witt", "eval", "--p", "2", "--n", "1", "--lhs", "1,1", "--rhs", "0,1", "--op",
            "mul", "--format", "json"},
           {"scheme", "build", "--kind", "ep", "--p", "3", "--format", "json"},
           {"dieudonne", "enumerate", "--scheme", "alpha:8", "--p", "2", "--format", "json"},
           {"dieudonne", "inverse", "--module", "A/(F,V)", "--p", "3", "--format", "json"},
           {"dual", "standard", "--n", "0", "--m", "1", "--p", "2", "--format", "json"},
           {"lambda", "--p", "3", "--r", "1", "--format", "json"}}) {
    auto r = run(args);
    CAPTURE(args[0]);
    CHECK(r.code == 0);
    CHECK_NOTHROW(nlohmann::json::parse(r.out));
  }
}

TEST_CASE("identical invocations produce identical bytes") {
  for (auto args : std::vector<std::vector<std::string>>{
           {"witt", "law", "--p", "2", "--n", "3", "--kind", "mul"},
           {"verify", "duality", "--p", "2"},
           {"dieudonne", "enumerate", "--scheme", "witt:1,1", "--p", "3"},
           {"scheme", "build", "--kind", "witt:1,1", "--p", "2", "--format", "json"}}) {
    auto a = run(args);
    auto b = run(args);
    CAPTURE(args[0]);
    CHECK(a.code == b.code);
    CHECK(a.out == b.out);
  }
}
