#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include "cli.hpp"
#include "format.hpp"
#include "symop/monop.hpp"
#include "symop/pwf.hpp"

using namespace symop;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);)
    if (!l.empty()) out.push_back(l);
  return out;
}

const char* const kHardAlpha =
    "sd{ x < -alpha -> {x}; x = -alpha -> [-alpha, 0]; -alpha < x < alpha -> {0}; x = alpha -> [0, alpha]; "
    "x > alpha -> {x} }";

}  // namespace

TEST(Cli, SoftThreshold) {
  Outcome r = run({"prox", "abs(x)", "--lambda", "l", "--assume", "0 < l"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(lines(r.out), (std::vector<std::string>{"y < -l     -> {y + l}", "y = -l     -> {0}", "-l < y < l -> {0}",
                                                     "y = l      -> {0}", "y > l      -> {y - l}"}));
}

TEST(Cli, HardThresholdPenalty) {
  Outcome r = run({"penalty", "--assume", "0 < alpha", kHardAlpha});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(lines(r.out), (std::vector<std::string>{"y < -alpha     -> 0", "y = -alpha     -> 0",
                                                     "-alpha < y < 0 -> -y^2/2 - alpha*y - alpha^2/2",
                                                     "y = 0          -> -alpha^2/2",
                                                     "0 < y < alpha  -> alpha*y - y^2/2 - alpha^2/2",
                                                     "y = alpha      -> 0", "y > alpha      -> 0"}));
}

TEST(Cli, MultivariateInputIsRejected) {
  Outcome r = run({"conj", "x + y"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("SyntaxError"), std::string::npos);
  EXPECT_TRUE(r.out.empty());
}

TEST(Cli, JsonSchema) {
  Outcome r = run({"--json", "subdiff", "abs(x)"});
  ASSERT_EQ(r.code, 0) << r.err;
  nlohmann::json j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["kind"], "op");
  EXPECT_EQ(j["var"], "x");
  ASSERT_EQ(j["breakpoints"].size(), 1u);
  EXPECT_EQ(j["breakpoints"][0], "0");
  ASSERT_EQ(j["pieces"].size(), 2u);
  EXPECT_EQ(j["pieces"][0]["interval"]["lo"], "-inf");
  EXPECT_EQ(j["pieces"][0]["interval"]["hi"], "0");
  EXPECT_EQ(j["pieces"][0]["expr"], "-1");
  EXPECT_TRUE(j["pieces"][0]["kind"].is_string());
  ASSERT_EQ(j["at_breakpoints"].size(), 1u);
  EXPECT_EQ(j["at_breakpoints"][0]["x"], "0");
  EXPECT_EQ(j["at_breakpoints"][0]["value"]["type"], "interval");
  EXPECT_EQ(j["at_breakpoints"][0]["value"]["lo"], "-1");
  EXPECT_EQ(j["at_breakpoints"][0]["value"]["hi"], "1");
}

TEST(Cli, JsonMatchesText) {
  for (const char* f : {"abs(x)", "x^4", "pw{ x < -1 -> inf ; -1 <= x <= 2 -> 0 ; x > 2 -> inf }", "exp(x)"}) {
    for (std::string cmd : {"conj", "subdiff", "prox"}) {
      Outcome j = run({"--json", cmd, f});
      ASSERT_EQ(j.code, 0) << j.err;
      nlohmann::json doc = nlohmann::json::parse(j.out);
      std::string dsl = cli::dsl_from_json(doc);
      ParseOptions o{doc["var"].get<std::string>(), std::nullopt};
      std::vector<std::string> back =
          doc["kind"] == "pwf" ? cli::rows(parse_pwf(dsl, {}, o)) : cli::rows(parse_operator(dsl, {}, o));
      Outcome t = run({cmd, f});
      ASSERT_EQ(t.code, 0) << t.err;
      std::vector<std::string> text = lines(t.out);
      ASSERT_EQ(back.size(), text.size()) << cmd << " " << f << "\n" << dsl;
      for (std::size_t i = 0; i < text.size(); ++i) {
        auto squash = [](std::string s) {
          s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
          return s;
        };
        EXPECT_EQ(squash(back[i]), squash(text[i])) << cmd << " " << f;
      }
    }
  }
}

TEST(Cli, Verify) {
  Outcome r = run({"verify", "abs(x)"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("pass"), std::string::npos);
}

TEST(Cli, NonConvexWitness) {
  Outcome r = run({"subdiff", "pw{ x<0 -> -x^2 ; x>=0 -> x^2 }"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("NonConvex"), std::string::npos);
  EXPECT_NE(r.err.find("witness"), std::string::npos);
}

TEST(Cli, RiskCommands) {
  Outcome r = run({"risk", "--cdf", "pw{ x < 0 -> 0 ; x >= 0 -> 1 - exp(-x) }", "cvar", "0.95"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("3.99573227355399"), std::string::npos) << r.out;
  Outcome q = run({"risk", "--quantile", "-ln(1 - p)", "quantile", "1/2"});
  ASSERT_EQ(q.code, 0) << q.err;
  Outcome bad = run({"risk", "--cdf", "pw{ x < 0 -> 0 ; x >= 0 -> 1 - exp(-x) }", "cvar", "1"});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("POutOfRange"), std::string::npos);
}

TEST(Cli, ParamBindsValues) {
  Outcome r = run({"eval", "abs(x) + l", "2", "--param", "l=3"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("5"), std::string::npos) << r.out;
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}
