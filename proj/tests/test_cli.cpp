#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "cyclop/cli.hpp"
#include "support.hpp"

using namespace cyclop;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string corpus(const std::string& name) { return std::string(CYCLOP_CORPUS_DIR) + "/" + name; }

struct TempDir {
  fs::path path = fs::temp_directory_path() / ("cyclop_cli_" + std::to_string(::getpid()));
  TempDir() { fs::create_directories(path); }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("check reports the verdict") {
  const Run ok = invoke({"check", corpus("neo.cpf")});
  CHECK(ok.code == cli::kOk);
  CHECK(ok.out == "valid cyclic pre-proof; GTC holds\n");
  CHECK(ok.err.empty());

  const Run bad = invoke({"check", corpus("bad-loop.cpf")});
  CHECK(bad.code == cli::kNegative);
  CHECK(bad.out.find("GTC fails") != std::string::npos);
}

TEST_CASE("gtc prints a lasso or a certificate") {
  const Run bad = invoke({"gtc", corpus("bad-loop.cpf")});
  CHECK(bad.code == cli::kNegative);
  CHECK(bad.out.find("stem: n0") != std::string::npos);
  CHECK(bad.out.find("loop: n0 n1 n0") != std::string::npos);

  const Run cert = invoke({"gtc", corpus("neo.cpf"), "--certificate"});
  CHECK(cert.code == cli::kOk);
  CHECK(cert.out.find("certificate: n1") != std::string::npos);
  CHECK(cert.out.find("0->0!") != std::string::npos);
}

TEST_CASE("structured reports") {
  const Run r = invoke({"check", corpus("neo.cpf"), "--format", "lines"});
  CHECK(r.code == cli::kOk);
  CHECK(r.out == "command=check\nnodes=9\nbuds=1\nvalid=true\ngtc=holds\n");
  const Run before = invoke({"--format", "lines", "check", corpus("neo.cpf")});
  CHECK(before.out == r.out);
}

TEST_CASE("elim-subst writes a Subst-free proof") {
  TempDir tmp;
  const std::string out = tmp.file("out.cpf");
  const Run r = invoke({"elim-subst", corpus("neo.cpf"), "-o", out, "--verify", "--stats",
                        "--format", "lines"});
  CHECK(r.code == cli::kOk);
  CHECK(r.out.find("verified=true") != std::string::npos);
  CHECK(r.out.find("subst_nodes=0") != std::string::npos);
  CHECK(r.out.find("depth_bound=41") != std::string::npos);
  const std::string text = slurp(out);
  CHECK(text.find("Subst") == std::string::npos);
  CHECK(invoke({"check", out}).code == cli::kOk);
  CHECK_FALSE(fs::exists(out + ".tmp"));

  // Byte-identical on a second run, and on stdout without -o.
  const std::string again = tmp.file("again.cpf");
  CHECK(invoke({"elim-subst", corpus("neo.cpf"), "-o", again, "--verify"}).code == cli::kOk);
  CHECK(slurp(again) == text);
  const Run piped = invoke({"elim-subst", corpus("neo.cpf")});
  CHECK(piped.out == text);

  const Run bound = invoke({"elim-subst", corpus("neo.cpf"), "--strategy", "bound", "--verify"});
  CHECK(bound.code == cli::kOk);
  CHECK(bound.out.find("Subst") == std::string::npos);
}

TEST_CASE("a refused elimination leaves no file") {
  TempDir tmp;
  const std::string out = tmp.file("never.cpf");
  const Run r = invoke({"elim-subst", corpus("p-ulprime.cpf"), "-o", out});
  CHECK(r.code == cli::kNegative);
  CHECK(r.err.find("RuleSetTooWeak") != std::string::npos);
  CHECK_FALSE(fs::exists(out));

  const Run weak = invoke({"elim-subst", corpus("composite.cpf"), "--rules", "cutfree"});
  CHECK(weak.code == cli::kNegative);
  CHECK(invoke({"elim-subst", corpus("composite.cpf"), "--rules", "freshl", "--verify"}).code ==
        cli::kOk);
}

TEST_CASE("usage, IO and parse errors exit with 2") {
  CHECK(invoke({}).code == cli::kUsage);
  CHECK(invoke({"frobnicate"}).code == cli::kUsage);
  CHECK(invoke({"check", "/nonexistent/x.cpf"}).code == cli::kUsage);
  CHECK(invoke({"check", corpus("neo.cpf"), "--rules", "bogus"}).code == cli::kUsage);
  CHECK(invoke({"elim-subst", corpus("neo.cpf"), "--strategy", "lazy"}).code == cli::kUsage);

  TempDir tmp;
  const std::string broken = tmp.file("broken.cpf");
  std::ofstream(broken) << "sig 0/0;\npred N/1 ind;\nnode n0 \"N(x |- \" rule Axiom;\n";
  const Run r = invoke({"check", broken});
  CHECK(r.code == cli::kUsage);
  CHECK(r.err.find(broken + ":3:") != std::string::npos);
  CHECK(r.out.empty());
}

TEST_CASE("help exits cleanly") {
  const Run r = invoke({"--help"});
  CHECK(r.code == cli::kOk);
  CHECK(r.out.find("elim-subst") != std::string::npos);
}

TEST_CASE("corpus directory from the environment") {
  ::setenv("CYCLOP_CORPUS", CYCLOP_CORPUS_DIR, 1);
  CHECK(invoke({"check", "neo.cpf"}).code == cli::kOk);
  ::unsetenv("CYCLOP_CORPUS");
}

TEST_CASE("unfold and psc") {
  const Run u = invoke({"unfold", corpus("neo.cpf"), "--depth", "3", "--format", "lines"});
  CHECK(u.code == cli::kOk);
  CHECK(u.out.find("node=0 n0 OrR") != std::string::npos);
  CHECK(u.out.find("node=3 n5 open") != std::string::npos);

  const Run p = invoke({"psc", "--vars", "x,y", "--base", "[y := x]", "--format", "lines"});
  CHECK(p.code == cli::kOk);
  CHECK(p.out.find("size=4\nbound=4\n") != std::string::npos);
  CHECK(p.out.find("element=[x := y, y := x]") != std::string::npos);

  const Run composite = invoke({"psc", "--vars", "x", "--funs", "f/2", "--base", "[x := f(x, y)]"});
  CHECK(composite.code == cli::kNegative);
  CHECK(composite.err.find("CompositeBase") != std::string::npos);
}
