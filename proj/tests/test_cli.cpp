#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>

#include "liesym/cli.hpp"

namespace {

const std::string D = LIESYM_DATA_DIR;

struct Out {
  int code;
  std::string out, err;
};

Out run(std::vector<std::string> args) {
  args.insert(args.begin(), "liesym");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream o, e;
  int c = liesym::cli::run((int)argv.size(), argv.data(), o, e);
  return {c, o.str(), e.str()};
}

nlohmann::json js(const Out& o) { return nlohmann::json::parse(o.out); }

// unset on destruction so other tests see the built-in seed
struct SeedEnv {
  explicit SeedEnv(const char* v) { setenv("LIESYM_SEED", v, 1); }
  ~SeedEnv() { unsetenv("LIESYM_SEED"); }
};

}  // namespace

TEST(Cli, CheckAdmitted) {
  auto r = run({"check", D + "/exp_system.json", D + "/dx.json", "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = js(r);
  EXPECT_EQ(j["verdict"], "admitted");
  EXPECT_EQ(j["seed"], liesym::kDefaultSeed);
  EXPECT_FALSE(j.contains("timings"));
}

TEST(Cli, CheckRejectedReportsWitness) {
  auto r = run({"check", D + "/t1_j1_kappa0.json", D + "/y5.json", "--json"});
  ASSERT_EQ(r.code, 2) << r.err;
  auto j = js(r);
  EXPECT_EQ(j["verdict"], "rejected");
  ASSERT_TRUE(j.contains("witness"));
  EXPECT_TRUE(j["witness"].contains("y"));
  auto t = run({"check", D + "/t1_j1_kappa0.json", D + "/y5.json"});
  EXPECT_EQ(t.code, 2);
  EXPECT_EQ(t.out.rfind("rejected: residual", 0), 0u);
}

TEST(Cli, CheckY4AndSetOverride) {
  EXPECT_EQ(run({"check", D + "/t1_j1_kappa0.json", D + "/y4.json"}).code, 0);
  // y4.json reads gamma from the system, so the override moves both
  auto r = run({"check", D + "/t1_j1_kappa0.json", D + "/y4.json", "--set", "gamma=2", "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(js(r)["system"]["params"]["gamma"], 2.0);
}

TEST(Cli, InputErrors) {
  auto r = run({"check", D + "/no_such_file.json", D + "/dx.json"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("no_such_file"), std::string::npos);
  r = run({"check", D + "/bad_system.json", D + "/dx.json"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find('4'), std::string::npos) << r.err;  // token offset
  EXPECT_EQ(run({"normalize", "1,2,3"}).code, 1);
  EXPECT_EQ(run({"normalize", "1,0,0,0,1,0,0,0", "--algebra", "L4"}).code, 1);
  EXPECT_EQ(run({"normalize", "1,0,0,0,0,0,0,0", "--algebra", "L5"}).code, 1);
  EXPECT_EQ(run({"jordan", "--matrix", "1,2,x,4"}).code, 1);
  EXPECT_EQ(run({"commutator", "4", "9"}).code, 1);
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  EXPECT_EQ(run({"check", D + "/exp_system.json", D + "/dx.json", "--domain", "y=3:1"}).code, 1);
  EXPECT_EQ(run({"check", D + "/exp_system.json", D + "/dx.json", "--samples", "0"}).code, 1);
}

TEST(Cli, HelpIsSuccess) {
  auto r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("catalog"), std::string::npos);
}

TEST(Cli, Normalize) {
  auto r = run({"normalize", "0,0,0,0,1,0.5,0,0", "--algebra", "L4", "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = js(r);
  EXPECT_EQ(j["family"], 1);
  EXPECT_EQ(j["params"]["alpha"], 0.5);
  r = run({"normalize", "3,1,0,0,0,0,0,0", "--json"});
  j = js(r);
  EXPECT_EQ(j["algebra"], "L8");
  EXPECT_EQ(j["family"], 8);
  EXPECT_EQ(j["word"][0]["step"], "A1");
  EXPECT_EQ(j["representative_text"], "X2");
}

TEST(Cli, JordanAndCommutator) {
  auto r = run({"jordan", "--matrix", "5,4,1,2", "--json"});
  ASSERT_EQ(r.code, 0);
  auto j = js(r);
  EXPECT_EQ(j["kind"], "J1");
  EXPECT_NEAR(j["params"]["a11"].get<double>(), 6.0, 1e-12);
  EXPECT_LT(j["residual"].get<double>(), 1e-12);
  r = run({"commutator", "4", "7"});
  EXPECT_EQ(r.out, "[X4, X7] = X3\n");
  r = run({"commutator", "7", "8", "--json"});
  EXPECT_EQ(js(r)["text"], "-X5 + X6");
  r = run({"commutator", D + "/x7.json", D + "/x8.json", "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  // [X7, X8] = X6 - X5 = -y d_y + z d_z
  auto b = js(r)["bracket"];
  liesym::Binding at{{"x", 0.3}, {"y", 1.7}, {"z", 0.4}};
  EXPECT_NEAR(liesym::evaluate(liesym::parse(b["xi"].get<std::string>()), at), 0.0, 1e-14);
  EXPECT_NEAR(liesym::evaluate(liesym::parse(b["eta1"].get<std::string>()), at), -1.7, 1e-14);
  EXPECT_NEAR(liesym::evaluate(liesym::parse(b["eta2"].get<std::string>()), at), 0.4, 1e-14);
}

TEST(Cli, CatalogListAndVerify) {
  auto r = run({"catalog", "list", "--json"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(js(r)["entries"].size(), liesym::list_entries().size());
  r = run({"catalog", "verify", "--id", "T1.J1", "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(js(r)["result"], "PASS");
  r = run({"catalog", "verify", "--id", "T3.S5a", "--json"});
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(js(r)["result"], "QUARANTINED");
  EXPECT_TRUE(js(r).contains("note"));
  EXPECT_EQ(run({"catalog", "verify", "--id", "T1.J1", "--set", "gamma=1"}).code, 1);
  EXPECT_EQ(run({"catalog", "verify", "--id", "T1.J1", "--set", "nope=1"}).code, 1);
  EXPECT_EQ(run({"catalog", "verify", "--id", "T1.J1", "--set", "gamma"}).code, 1);
  EXPECT_EQ(run({"catalog", "verify", "--id", "T9.9"}).code, 1);
}

TEST(Cli, JsonIsByteIdenticalForSameSeed) {
  std::vector<std::string> a{"catalog", "verify", "--id", "T2.5", "--json", "--seed", "77"};
  EXPECT_EQ(run(a).out, run(a).out);
  std::vector<std::string> c{"check", D + "/t1_j1_kappa0.json", D + "/y5.json", "--json"};
  auto x = run(c), y = run(c);
  EXPECT_EQ(x.out, y.out);
  c.push_back("--seed");
  c.push_back("5");
  EXPECT_NE(run(c).out, x.out);
}

TEST(Cli, SeedFromEnvironment) {
  std::vector<std::string> c{"check", D + "/t1_j1_kappa0.json", D + "/y5.json", "--json"};
  std::string base = run(c).out;
  {
    SeedEnv env("5");
    auto r = run(c);
    EXPECT_EQ(js(r)["seed"], 5);
    auto explicit_seed = c;
    explicit_seed.push_back("--seed");
    explicit_seed.push_back("5");
    EXPECT_EQ(r.out, run(explicit_seed).out);
    EXPECT_NE(r.out, base);
  }
  {
    SeedEnv env("abc");
    EXPECT_EQ(run(c).code, 1);
  }
}

TEST(Cli, TimingsOnlyWhenAsked) {
  auto r = run({"jordan", "--matrix", "1,0,0,1", "--json", "--timings"});
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(js(r).contains("timings"));
}
