#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <string>

#include "json.hpp"

namespace {

struct Run {
  std::string out;
  int code = -1;
};

Run run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + QPL_CLI_PATH + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

nlohmann::json parsed(const Run& r) { return nlohmann::json::parse(r.out); }

}  // namespace

TEST(Cli, MatrixExample) {
  const auto r = run("matrix --kind II --m 1 --hbar 1 --a 1");
  ASSERT_EQ(r.code, 0);
  const auto j = parsed(r);
  EXPECT_EQ(j["matrix"]["M0"], nlohmann::json::parse(R"([["0","0"],["1","0"]])"));
  EXPECT_EQ(j["matrix"]["M1"], nlohmann::json::parse(R"([["0","-1/2"],["0","0"]])"));
}

TEST(Cli, VerifyKzExample) {
  const auto r = run("verify-kz --case V --m 0 --b 1 --c 1 --hbar 1");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(parsed(r)["pass"], true);
}

TEST(Cli, PhiDegreeZero) {
  const auto r = run("phi --kind II --m 0 --t 1");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(parsed(r)["coeffs"], nlohmann::json::parse("[[1,0]]"));
}

TEST(Cli, GaussianRationalParameters) {
  const auto r = run("matrix --kind V --m 1 --a 1 --b 1/2+1/3*i --c -2/5*i");
  ASSERT_EQ(r.code, 0);
  const auto j = parsed(r);
  EXPECT_EQ(j["params"]["b"], "1/2+1/3*i");
  EXPECT_EQ(j["params"]["c"], "-2/5*i");
}

TEST(Cli, VerificationFailuresExitOne) {
  EXPECT_EQ(run("invariance --kind II --m 1 --a 0").code, 1);
  EXPECT_EQ(run("invariance --kind II --m 1 --a 1").code, 0);
  EXPECT_EQ(run("verify-kz --case IV --m 1 --b 1/2").code, 1);
  EXPECT_EQ(run("verify-kz --case IV --m 1 --b 1/2 --statement corrected").code, 0);
  EXPECT_EQ(run("residual --kind II --m 1 --t 1 --threshold 1e-300").code, 1);
}

TEST(Cli, NumericalFailuresExitThree) {
  EXPECT_EQ(run("phi --kind VI --m 1 --a 1 --b 1 --c 1 --d 1 --t 2.5").code, 3);
  EXPECT_EQ(run("residual --kind V --m 1 --b 1/2 --c 1/3 --t 1.5").code, 3);
  EXPECT_EQ(run("phi --kind II --m 2 --t 1", "QPL_EVAL_BUDGET=10").code, 3);
  EXPECT_EQ(run("phi --kind II --m 2 --t 1", "QPL_EVAL_BUDGET=1e9").code, 0);
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("matrix").code, 2);
  EXPECT_EQ(run("matrix --kind X").code, 2);
  EXPECT_EQ(run("matrix --kind II --a 1/0").code, 2);
  EXPECT_EQ(run("matrix --kind II --a one").code, 2);
  EXPECT_EQ(run("matrix --kind IV --m 1 --b 1 --c 1").code, 2);
  EXPECT_EQ(run("phi --kind II --m 1 --t 1 --nodes 4").code, 2);
  EXPECT_EQ(run("phi --kind II --m 1 --t 1 --hbar 1/2").code, 2);
  EXPECT_EQ(run("phi --kind II --m 1 --t 1", "QPL_EVAL_BUDGET=abc").code, 2);
  EXPECT_EQ(run("integrate --kind II --m 1 --t0 0").code, 2);
  EXPECT_EQ(run("integrate --kind II --m 1 --t0 0 --t1 1 --format xml").code, 2);
  EXPECT_EQ(run("verify-kz --case V --m 1 --a 5 --b 1 --c 1").code, 2);
}

TEST(Cli, DeterministicOutput) {
  for (const char* args : {"residual --kind III --m 2 --b -1/2 --t -1.3", "det --kind IV --m 2 --b -1/3 --t 0.7",
                           "ortho --kind II --m 2 --n 1 --t 0.5", "integrate --kind V --m 2 --b -1/2 --c -1/3 --t0 1 --t1 2"}) {
    const auto first = run(args), second = run(args);
    EXPECT_EQ(first.code, 0) << args;
    EXPECT_FALSE(first.out.empty());
    EXPECT_EQ(first.out, second.out) << args;
  }
}

TEST(Cli, CsvTrajectory) {
  const auto r = run("integrate --kind II --m 1 --t0 0 --t1 0.5 --format csv");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "t,re_phi0,im_phi0,re_phi1,im_phi1");
  std::size_t lines = 0;
  for (char c : r.out) lines += c == '\n';
  EXPECT_GT(lines, 2u);
}

TEST(Cli, EverySubcommandRuns) {
  for (const char* args : {"matrix --kind VI --m 2 --a 2 --b 1/2 --c 1/3 --d -1/2",
                           "invariance --kind III --m 2 --a 2 --b 1", "moments --kind II --t 1 --kmax 3",
                           "phi --kind III --m 1 --b -1/2 --t -1", "det --kind II --m 1 --t 0.5",
                           "residual --kind II --m 1 --t 1 --source det", "ortho --kind V --m 1 --n 0 --b -1/2 --c -1/3 --t 1.5",
                           "verify-kz --case VI --m 1 --a 1 --b 1/2 --c 1/3 --d 1/4",
                           "verify-symmetry --kind IV --m 2 --b 1/3",
                           "verify-lemma --m 1 --a 1 --b -7/2 --c -1/3 --d 1/5 --t 2.5"}) {
    const auto r = run(args);
    EXPECT_EQ(r.code, 0) << args;
    EXPECT_NO_THROW(parsed(r)) << args;
  }
}
