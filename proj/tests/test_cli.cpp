#include "subspace_forge/cli.hpp"
#include "subspace_forge/document.hpp"
#include "subspace_forge/errors.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace sforge;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("sforge_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    std::filesystem::remove_all(dir_);
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void write(const std::string& name, const std::string& text) const { std::ofstream(dir_ / name) << text; }

  std::filesystem::path dir_;
};

}  // namespace

TEST(Seed, ResolutionOrder) {
  EXPECT_EQ(cli::resolve_seed(7, "9"), 7u);
  EXPECT_EQ(cli::resolve_seed(std::nullopt, "9"), 9u);
  EXPECT_EQ(cli::resolve_seed(std::nullopt, nullptr), 0x5eedf00du);
  EXPECT_EQ(cli::resolve_seed(std::nullopt, ""), 0x5eedf00du);
  EXPECT_THROW(cli::resolve_seed(std::nullopt, "abc"), InputError);
  EXPECT_THROW(cli::resolve_seed(std::nullopt, "-3"), InputError);
}

TEST(Spectrum, ListsFamilies) {
  const auto r = run({"spectrum", "--n", "4", "--depth", "3"});
  ASSERT_EQ(r.code, cli::kPass) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["lambda0"], json({"0", "4/3", "8/5"}));
  EXPECT_EQ(j["lambda1"], json({"1", "3/2", "5/3"}));
}

TEST(Spectrum, ClassifiesAlpha) {
  auto r = run({"spectrum", "--n", "4", "--alpha", "8/5"});
  ASSERT_EQ(r.code, cli::kPass) << r.err;
  auto j = json::parse(r.out);
  EXPECT_EQ(j["member"], true);
  EXPECT_EQ(j["index"], 2);
  r = run({"spectrum", "--n", "4", "--alpha", "9/7"});
  ASSERT_EQ(r.code, cli::kPass) << r.err;
  EXPECT_EQ(json::parse(r.out)["member"], false);
}

TEST(Spectrum, BadInput) {
  EXPECT_EQ(run({"spectrum", "--n", "1"}).code, cli::kInputError);
  EXPECT_EQ(run({"spectrum", "--n", "4", "--alpha", "x"}).code, cli::kInputError);
  EXPECT_EQ(run({"spectrum"}).code, cli::kInputError);
  EXPECT_EQ(run({"bogus"}).code, cli::kInputError);
  EXPECT_EQ(run({}).code, cli::kInputError);
  EXPECT_EQ(run({"--help"}).code, cli::kPass);
}

TEST_F(CliTest, GenerateTowerAndCertify) {
  const auto gen = run({"generate", "phi-tower", "--n", "4", "--base", "0", "--steps", "2", "-o", path("t.json")});
  ASSERT_EQ(gen.code, cli::kPass) << gen.err;
  const auto doc = document::load(path("t.json"));
  EXPECT_EQ(doc.dim, 5);
  EXPECT_EQ(std::get<PnAlpha>(doc.tag).alpha, Rational(8, 5));
  ASSERT_TRUE(doc.report.has_value());
  EXPECT_TRUE(doc.report->overall);

  const auto cert = run({"certify", path("t.json"), "--checks", "relations,irreducible,transitive,indecomposable"});
  ASSERT_EQ(cert.code, cli::kPass) << cert.err;
  const auto j = json::parse(cert.out);
  EXPECT_EQ(j["report"]["overall"], true);
  EXPECT_EQ(j["dim"], 5);
}

TEST_F(CliTest, GenerateToStdoutIsADocument) {
  const auto r = run({"generate", "base", "--n", "4", "--k", "2", "--seed", "5"});
  ASSERT_EQ(r.code, cli::kPass) << r.err;
  const auto doc = document::parse(r.out);
  EXPECT_EQ(doc.dim, 1);
  EXPECT_EQ(doc.seed, 5u);
  EXPECT_EQ(doc.provenance["generator"], "base");
}

TEST_F(CliTest, CatalogDiscrepancyIsRefused) {
  const auto r = run({"generate", "catalog", "--item", "10", "--k", "1", "-o", path("c.json")});
  EXPECT_EQ(r.code, cli::kCheckFailure);
  EXPECT_NE(r.err.find("formula-discrepancy"), std::string::npos);
  EXPECT_FALSE(std::filesystem::exists(path("c.json")));
  const auto forced =
      run({"generate", "catalog", "--item", "10", "--k", "1", "--allow-discrepancy", "-o", path("c.json")});
  EXPECT_EQ(forced.code, cli::kCheckFailure);
  ASSERT_TRUE(std::filesystem::exists(path("c.json")));
  EXPECT_FALSE(document::load(path("c.json")).report->overall);
  EXPECT_EQ(run({"certify", path("c.json")}).code, cli::kCheckFailure);
}

TEST_F(CliTest, CatalogOmegaAndBadOmega) {
  const auto r = run({"generate", "catalog", "--item", "5", "--omega", "0.6,0,0.8", "-o", path("w.json")});
  ASSERT_EQ(r.code, cli::kPass) << r.err;
  EXPECT_EQ(document::load(path("w.json")).dim, 4);
  EXPECT_EQ(run({"generate", "catalog", "--item", "5", "--omega", "0.5,0.5,0.5"}).code, cli::kInputError);
}

TEST_F(CliTest, DomainErrorExitCode) {
  EXPECT_EQ(run({"generate", "phi-tower", "--n", "3", "--base", "0", "--steps", "9"}).code, cli::kDomainError);
}

TEST_F(CliTest, CertifyBadFiles) {
  write("empty.json", "");
  EXPECT_EQ(run({"certify", path("empty.json")}).code, cli::kInputError);
  write("bad.json", R"({"kind":"projection_system","n":1,"dim":2,"matrices":[[[[1,0]]]]})");
  EXPECT_EQ(run({"certify", path("bad.json")}).code, cli::kInputError);
  EXPECT_EQ(run({"certify", path("missing.json")}).code, cli::kInputError);
  write("notproj.json", R"({"kind":"projection_system","n":1,"dim":1,"matrices":[[[[2,0]]]]})");
  EXPECT_EQ(run({"certify", path("notproj.json")}).code, cli::kCheckFailure);
}

TEST_F(CliTest, CompareModes) {
  ASSERT_EQ(run({"generate", "catalog", "--item", "6", "--k", "1", "-o", path("a.json")}).code, cli::kPass);
  ASSERT_EQ(run({"generate", "abo-from-tower", "--n", "4", "--base", "0", "--steps", "1", "-o", path("b.json")}).code,
            cli::kPass);
  auto r = run({"compare", path("a.json"), path("b.json"), "--mode", "unitary", "--seed", "3"});
  ASSERT_EQ(r.code, cli::kPass) << r.err;
  auto j = json::parse(r.out);
  EXPECT_EQ(j["verdict"], "equivalent");
  EXPECT_EQ(j["seed"], 3);

  ASSERT_EQ(run({"generate", "base", "--n", "4", "--k", "1", "-o", path("p1.json")}).code, cli::kPass);
  ASSERT_EQ(run({"generate", "base", "--n", "4", "--k", "2", "-o", path("p2.json")}).code, cli::kPass);
  r = run({"compare", path("p1.json"), path("p2.json")});
  EXPECT_EQ(r.code, cli::kCheckFailure);
  EXPECT_EQ(json::parse(r.out)["verdict"], "inequivalent");

  r = run({"compare", path("a.json"), path("a.json"), "--mode", "hom-dim"});
  ASSERT_EQ(r.code, cli::kPass) << r.err;
  EXPECT_EQ(json::parse(r.out)["end_dimensions"], json({1, 1}));
  EXPECT_EQ(run({"compare", path("a.json"), path("a.json"), "--mode", "other"}).code, cli::kInputError);
}

TEST_F(CliTest, WildSuvAndTriple) {
  write("u.json", "[[[0,0],[1,0]],[[1,0],[0,0]]]");
  write("v.json", "[[[1,0],[0,0]],[[0,0],[-1,0]]]");
  auto r = run({"wild", "suv", "--u", path("u.json"), "--v", path("v.json"), "-o", path("s.json")});
  ASSERT_EQ(r.code, cli::kPass) << r.err;
  const auto s = document::load(path("s.json"));
  EXPECT_EQ(s.kind, DocumentKind::SubspaceSystem);
  EXPECT_EQ(s.dim, 4);

  write("t.json",
        R"({"kind":"projection_system","n":3,"dim":1,"matrices":[[[[1,0]]],[[[1,0]]],[[[1,0]]]]})");
  EXPECT_EQ(run({"wild", "triple", "--file", path("t.json")}).code, cli::kInputError);
  write("t2.json",
        R"({"kind":"projection_system","n":3,"dim":1,"matrices":[[[[1,0]]],[[[1,0]]],[[[0,0]]]]})");
  r = run({"wild", "triple", "--file", path("t2.json"), "--target", path("t2.json")});
  EXPECT_EQ(r.code, cli::kPass) << r.err;
}

TEST(Wild, SweepReportsNoMismatches) {
  const auto r = run({"wild", "sweep", "--dims", "1,2", "--count", "10", "--seed", "4"});
  ASSERT_EQ(r.code, cli::kPass) << r.err;
  EXPECT_NE(r.out.find("seed: 4"), std::string::npos);
  EXPECT_NE(r.out.find("mismatches: 0"), std::string::npos);
}
