#include "commands.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <sstream>
#include <string>
#include <vector>

namespace elicit {
namespace {

struct Invocation {
  int code = -1;
  std::string out;
  std::string err;
};

Invocation invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "elicit");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Invocation result;
  result.code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  result.out = out.str();
  result.err = err.str();
  return result;
}

std::string data(const std::string& name) { return testing::data_file(name); }

TEST(Cli, VerifyExample2Exists) {
  const auto r = invoke({"verify", data("example2.json")});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("appropriate mechanism EXISTS"), std::string::npos);
}

TEST(Cli, VerifyExample1Json) {
  const auto r = invoke({"verify", data("example1.json"), "--json"});
  EXPECT_EQ(r.code, 3);
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["exists"], false);
  EXPECT_EQ(doc["reason"], nlohmann::json::parse(R"({"c_undefined_at": [0, 0]})"));
  EXPECT_EQ(doc["witness"]["j"], 0);
}

TEST(Cli, VerifyWitnessListsPath) {
  const auto r = invoke({"verify", data("consensus_costly.json"), "--witness"});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.out.find("(0,0)"), std::string::npos);
  EXPECT_NE(r.out.find("c=undefined"), std::string::npos);
}

TEST(Cli, HcfExample2Secrets) {
  const auto r = invoke({"hcf", data("example2.json"), "--secrets", "0001", "--json"});
  EXPECT_EQ(r.code, 0);
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["output"], 0);
  ASSERT_EQ(doc["transcript"].size(), 4u);
  EXPECT_EQ(doc["transcript"][3]["agent"], "4");
  EXPECT_EQ(doc["transcript"][3]["state"], nlohmann::json::parse("[3, 0]"));
  EXPECT_EQ(doc["transcript"][3]["threshold"], "1/2");
  const auto text = invoke({"hcf", data("example2.json"), "--secrets", "0001"});
  EXPECT_NE(text.out.find("output: 0"), std::string::npos);
}

TEST(Cli, HcfMapsSecretsThroughAgentIds) {
  // dave is rank 2 after normalization; bob (rank 1) is free.
  const auto r = invoke({"hcf", data("valued_agents.json"), "--secrets", "1111", "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["output"], 1);
  EXPECT_EQ(doc["approached"], 4);
}

TEST(Cli, HcfFailureIsNegative) {
  const auto r = invoke({"hcf", data("example1.json"), "--seed", "3"});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.out.find("HCF failed"), std::string::npos);
}

TEST(Cli, AuditAndPivotal) {
  EXPECT_EQ(invoke({"audit", data("example2.json")}).code, 0);
  const auto failed = invoke({"audit", data("example1.json"), "--json"});
  EXPECT_EQ(failed.code, 3);
  EXPECT_EQ(nlohmann::json::parse(failed.out)["failure"]["reason"], "NoEligibleAgent");
  const auto table = invoke({"pivotal", data("example2.json"), "--json"});
  const auto doc = nlohmann::json::parse(table.out);
  ASSERT_EQ(doc["nodes"].size(), 7u);
  EXPECT_EQ(doc["nodes"][0]["pivotal_prob"], "1/4");
  EXPECT_EQ(doc["nodes"][0]["threshold"], "1/8");
  EXPECT_EQ(doc["nodes"][0]["c"], 3);
}

TEST(Cli, AuditRecordsShowHistories) {
  const auto r = invoke({"audit", data("example2.json"), "--records"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("[3=0 2=0 1=0]"), std::string::npos);
  EXPECT_NE(r.out.find("[3=1 2=1]"), std::string::npos);
}

TEST(Cli, GraphDot) {
  const auto r = invoke({"graph", data("example2.json")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("// instance: example2-consensus\ndigraph G {", 0), 0u);
}

TEST(Cli, Deviate) {
  const auto r = invoke({"deviate", data("example2.json"), "--agent", "4", "--action",
                         "guess-report-1", "--at", "000", "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["utility"], "1/2");
  EXPECT_EQ(doc["truthful_utility"], "3/5");
  const auto naive = invoke({"deviate", data("example1.json"), "--agent", "1", "--action",
                             "guess-report-1", "--mechanism", "fixed", "--json"});
  EXPECT_EQ(nlohmann::json::parse(naive.out)["utility"], "449/512");
}

TEST(Cli, Oracle) {
  EXPECT_EQ(invoke({"oracle", data("example2.json"), "--mode", "mechanisms"}).code, 0);
  EXPECT_EQ(invoke({"oracle", data("example1.json"), "--mode", "pivotal"}).code, 0);
  EXPECT_EQ(invoke({"oracle", data("example3.json"), "--mode", "hcf-tree"}).code, 0);
}

TEST(Cli, UsageAndFormatErrors) {
  EXPECT_EQ(invoke({"verify", data("example2.json"), "--bogus"}).code, 2);
  EXPECT_EQ(invoke({}).code, 2);
  const auto missing = invoke({"verify", data("does_not_exist.json")});
  EXPECT_EQ(missing.code, 2);
  EXPECT_EQ(missing.err.rfind("error:", 0), 0u);
  EXPECT_EQ(invoke({"hcf", data("example2.json"), "--secrets", "01"}).code, 2);
  EXPECT_EQ(invoke({"deviate", data("example2.json"), "--agent", "9", "--action", "guess-report-1"}).code, 2);
  EXPECT_EQ(invoke({"oracle", data("example1.json"), "--mode", "mechanisms"}).code, 2);
}

TEST(Cli, JsonOutputsParse) {
  for (const auto& cmd : std::vector<std::vector<std::string>>{
           {"verify", data("example3.json"), "--json"},
           {"hcf", data("example3.json"), "--seed", "9", "--json"},
           {"audit", data("example2.json"), "--json"},
           {"pivotal", data("example1.json"), "--json"},
           {"graph", data("example2.json"), "--json"},
           {"oracle", data("example2.json"), "--mode", "pivotal", "--json"}}) {
    const auto r = invoke(cmd);
    EXPECT_TRUE(nlohmann::json::accept(r.out)) << cmd[0];
    EXPECT_EQ(invoke(cmd).out, r.out);
  }
}

}  // namespace
}  // namespace elicit
