#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace {

struct Run {
  int code;
  std::string out;
};

std::string quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

std::string corpus(const std::string& name) {
  const char* dir = std::getenv("LR_CORPUS");
  return std::string(dir ? dir : LR_CORPUS_DIR) + "/" + name;
}

Run lr(const std::vector<std::string>& args, const std::string& env = "") {
  const char* bin = std::getenv("LR_CLI");
  std::string cmd = env + (env.empty() ? "" : " ") + quote(bin ? bin : LR_CLI_PATH);
  for (auto& a : args) cmd += " " + quote(a);
  cmd += " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return {-1, ""};
  std::string out;
  std::array<char, 4096> buf;
  while (auto n = fread(buf.data(), 1, buf.size(), p)) out.append(buf.data(), n);
  int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

bool has(const Run& r, const std::string& s) { return r.out.find(s) != std::string::npos; }

TEST(Cli, CheckPrintsTypes) {
  auto r = lr({"check", corpus("omega.lam")});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(has(r, "(mu a. a -> a) -> (mu a. a -> a)")) << r.out;
  r = lr({"check", "--output", "lines", "\\x: Bool. x"});
  EXPECT_EQ(r.out, "TYPE Bool -> Bool\n");
  EXPECT_EQ(lr({"check", corpus("leak.lam")}).code, 3);
  EXPECT_EQ(lr({"check", "\\x: Bool."}).code, 3);
}

TEST(Cli, EvalAndTrace) {
  auto r = lr({"eval", "--output", "lines", corpus("counter.lam")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("VALUE <1, 1>", 0), 0u) << r.out;
  r = lr({"eval", "--output", "lines", corpus("omega_app.lam")});
  EXPECT_EQ(r.code, 2);
  EXPECT_TRUE(has(r, "CYCLE first=")) << r.out;
  r = lr({"trace", "--fuel", "5", corpus("landin.lam")});
  EXPECT_EQ(r.code, 2);
  EXPECT_TRUE(has(r, "STEP 0 RULE -"));
  EXPECT_TRUE(has(r, "STEP 3 RULE ASSIGN"));
  EXPECT_TRUE(has(r, "STEP 5 RULE DEREF"));
  EXPECT_FALSE(has(r, "STEP 6"));
}

TEST(Cli, LandinDemo) {
  auto r = lr({"demo", "landin"});
  EXPECT_EQ(r.code, 2);
  EXPECT_TRUE(has(r, "CYCLE first=4 second=6 period=2")) << r.out;
  EXPECT_TRUE(has(r, "CONFIG 4 "));
}

TEST(Cli, EquivalenceAndDistinction) {
  auto r = lr({"equiv", corpus("e1.lam"), corpus("e2.lam"), "--rel", "{(1,true)}"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_TRUE(has(r, "VERDICT Proven"));
  r = lr({"equiv", corpus("e1.lam"), corpus("e3.lam")});
  EXPECT_EQ(r.code, 2) << r.out;
  EXPECT_TRUE(has(r, "note=CatalogExhausted"));
  r = lr({"distinguish", corpus("e1.lam"), corpus("e3.lam")});
  EXPECT_EQ(r.code, 1);
  EXPECT_TRUE(has(r, "DISTINGUISHED size=")) << r.out;
  r = lr({"distinguish", "--ctx-size", "5", corpus("e1.lam"), corpus("e2.lam")});
  EXPECT_EQ(r.code, 2);
  EXPECT_TRUE(has(r, "NO-CONTEXT bound=5"));
  EXPECT_EQ(lr({"demo", "packages", "--rel", "{(1,true)}"}).code, 0);
}

TEST(Cli, PredicatesAndFreeTheorems) {
  EXPECT_EQ(lr({"free-thm", "--kind", "identity", "--tau", "Int", "--v1", "5", corpus("poly_id.lam")}).code, 0);
  EXPECT_EQ(lr({"free-thm", "--kind", "identity", "/\\a. \\x: a. true"}).code, 3);
  EXPECT_EQ(lr({"sn", corpus("omega_app.lam")}).code, 1);
  EXPECT_EQ(lr({"sn", "not true"}).code, 0);
  EXPECT_EQ(lr({"safe", corpus("counter.lam")}).code, 0);
  EXPECT_EQ(lr({"member", "#l0", "--type", "Ref Int", "--world", "W { #l0 : Int }"}).code, 0);
  EXPECT_EQ(lr({"member", "#l0", "--type", "Ref Bool", "--world", "W { #l0 : Int }"}).code, 1);
  EXPECT_EQ(lr({"member", "--type", "Bool -> Bool", "\\x: Bool. 3"}).code, 1);
}

TEST(Cli, SeedsMakeRunsReplayable) {
  auto a = lr({"gen", "--seed", "42", "--count", "5", "--size", "12"});
  auto b = lr({"gen", "--seed", "42", "--count", "5", "--size", "12"});
  auto c = lr({"gen", "--count", "5", "--size", "12"}, "LR_SEED=42");
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out, c.out);
  EXPECT_NE(a.out, lr({"gen", "--seed", "43", "--count", "5", "--size", "12"}).out);
  auto s = lr({"safe", "--alloc", "rand", "--seed", "9", "--output", "lines", corpus("counter.lam")});
  EXPECT_TRUE(has(s, "SEED 9")) << s.out;
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(lr({"check", "--no-such-flag", "true"}).code, 3);
  EXPECT_EQ(lr({"nonsense"}).code, 3);
  EXPECT_EQ(lr({"eval", "--alloc", "weird", "true"}).code, 3);
  EXPECT_EQ(lr({"check", "--level", "stlc", corpus("poly_id.lam")}).code, 3);
}

} // namespace
