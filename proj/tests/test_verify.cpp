#include <gtest/gtest.h>

#include "walker/verify.hpp"

using namespace walker;

TEST(Verify, OssermanSuitePasses) {
  VerificationReport r = verify_suite("thm51", 7);
  ASSERT_EQ(r.entries.size(), 2U);
  EXPECT_EQ(r.entries[0].id, "thm51-k1");
  for (const EntryReport& e : r.entries) {
    std::vector<std::string> names;
    for (const ClauseResult& c : e.clauses) {
      names.push_back(c.name);
      EXPECT_EQ(c.status, ClauseStatus::pass) << e.id << " " << c.name << " " << c.witness.dump();
    }
    EXPECT_NE(std::find(names.begin(), names.end(), "diag_locus"), names.end()) << e.id;
  }
  EXPECT_TRUE(r.passed());
}

TEST(Verify, FullCatalogPasses) {
  VerificationReport r = verify_suite("all", 2024);
  EXPECT_EQ(r.entries.size(), 14U);
  for (const EntryReport& e : r.entries) {
    for (const ClauseResult& c : e.clauses) {
      EXPECT_EQ(c.status, ClauseStatus::pass) << e.id << " " << c.name << " " << c.witness.dump();
    }
  }
}

TEST(Verify, ReportIsDeterministic) {
  std::string a = io::to_json(verify_suite("thm61", 11)).dump();
  std::string b = io::to_json(verify_suite("thm61", 11)).dump();
  EXPECT_EQ(a, b);
  EXPECT_NE(a, io::to_json(verify_suite("thm61", 12)).dump());
}

TEST(Verify, SuiteSelection) {
  auto [t61, w61] = suite_selection("thm61");
  EXPECT_EQ(t61.size(), 11U);
  EXPECT_TRUE(w61.spectral);
  EXPECT_FALSE(w61.dynamics);
  auto [t63, w63] = suite_selection("thm63");
  EXPECT_EQ(t63.size(), 11U);
  EXPECT_FALSE(w63.spectral);
  EXPECT_TRUE(w63.dynamics);
  EXPECT_EQ(suite_selection("thm31").first.size(), 1U);
  EXPECT_THROW(suite_selection("thm62"), InvalidOptions);
  EXPECT_THROW(verify_suite("", 1), InvalidOptions);
}

TEST(Verify, ClauseStatusMapping) {
  auto exhausted = detail::run_clause("x", [](io::Json&) -> bool { throw SamplingBudgetExhausted(); });
  EXPECT_EQ(exhausted.status, ClauseStatus::budget_exhausted);
  EXPECT_EQ(to_string(exhausted.status), std::string("budget-exhausted"));
  auto failed = detail::run_clause("x", [](io::Json&) -> bool { throw InvalidOptions("bad"); });
  EXPECT_EQ(failed.status, ClauseStatus::fail);
  EXPECT_TRUE(failed.witness.contains("error"));
  EntryReport rep{"e", {exhausted}, {}};
  EXPECT_FALSE(rep.passed());
}

TEST(Verify, BlowupWitnessesCarryBlowupTimes) {
  VerificationReport r = verify_suite("thm63", 3);
  for (const EntryReport& e : r.entries) {
    for (const ClauseResult& c : e.clauses) {
      if (c.name == "blowup_verdict") {
        EXPECT_EQ(c.witness["outcome"]["verdict"], "Blowup") << e.id;
        EXPECT_GT(c.witness["outcome"]["t_star"].get<double>(), 0.0) << e.id;
      }
    }
  }
}
