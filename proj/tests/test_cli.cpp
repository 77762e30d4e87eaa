#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "cpr/algebra.hpp"

namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace {

struct Invocation {
  int code = -1;
  std::string out;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("cpr_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  // Runs `cpr args` inside the temp dir; stdout is captured, stderr discarded.
  Invocation cpr(const std::string& args, const std::string& env = "") const {
    const std::string cmd = "cd '" + dir_.string() + "' && " + env + " '" CPR_BINARY "' " + args + " 2>/dev/null";
    Invocation r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    std::array<char, 4096> buf{};
    std::size_t got = 0;
    while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
  }

  Json json(const std::string& args) const {
    const Invocation r = cpr(args);
    EXPECT_EQ(r.code, 0) << args << "\n" << r.out;
    return Json::parse(r.out);
  }

  void write(const std::string& name, const std::string& text) const { std::ofstream(dir_ / name) << text; }
  Json read(const std::string& name) const { return Json::parse(std::ifstream(dir_ / name)); }

  fs::path dir_;
};

const char* kMotivating = R"({"m": 2, "n": 3, "field": "real", "columns": [[1, 0], [0, 1], [1, 1]]})";

double rel_gap(const Json& a, const Json& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    num += std::pow(a[k].get<double>() - b[k].get<double>(), 2);
    den += std::pow(a[k].get<double>(), 2);
  }
  return std::sqrt(num / std::max(den, 1e-300));
}

cpr::ComplexSignal signal(const Json& j) {
  std::vector<cpr::Complex> e;
  for (const auto& p : j["entries"]) e.emplace_back(p[0].get<double>(), p[1].get<double>());
  return cpr::ComplexSignal(e);
}

}  // namespace

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(cpr("").code, 2);
  EXPECT_EQ(cpr("bogus").code, 2);
  EXPECT_EQ(cpr("gen --m 2 --n 1").code, 2);
  EXPECT_EQ(cpr("gen --m 2 --n 4 --cone").code, 2);
  EXPECT_EQ(cpr("certify missing.json").code, 2);
  EXPECT_EQ(cpr("witness --diag 1,1").code, 2);
  EXPECT_EQ(cpr("witness --diag 1,-1,1").code, 2);
}

TEST_F(Cli, GenWritesFrames) {
  EXPECT_EQ(cpr("gen --m 3 --n 6 --seed 7 -o f.json").code, 0);
  const Json f = read("f.json");
  EXPECT_EQ(f["m"], 3);
  EXPECT_EQ(f["n"], 6);
  EXPECT_EQ(f["field"], "real");
  EXPECT_EQ(f["columns"].size(), 6u);

  EXPECT_EQ(cpr("gen --m 3 --n 8 --cone -o cone.json").code, 0);
  for (const auto& c : read("cone.json")["columns"]) EXPECT_EQ(c[2], 1.0);

  const Json j = json("gen --m 4 --n 8 --json");
  EXPECT_EQ(j["below_generic_size"], true);
  EXPECT_EQ(cpr("gen --m 3 --n 6 --seed 7").out, cpr("gen --m 3 --n 6 --seed 7").out);
}

TEST_F(Cli, CertifyMotivatingFrame) {
  write("mot.json", kMotivating);
  const Invocation r = cpr("certify mot.json");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("CertifiedCPR (Det2)"), std::string::npos) << r.out;
  const Json j = json("certify mot.json --json");
  EXPECT_EQ(j["verdict"], "CertifiedCPR");
  EXPECT_EQ(j["method"], "Det2");
  EXPECT_NEAR(std::abs(j["det_value"].get<double>()), 2.0, 1e-12);
  EXPECT_FALSE(fs::exists(dir_ / "mot.witness.json"));
}

TEST_F(Cli, CertifyCsv) {
  write("mot.csv", "1,0,1\n0,1,1\n");
  const Json j = json("certify mot.csv --json");
  EXPECT_EQ(j["verdict"], "CertifiedCPR");
}

TEST_F(Cli, NotCprWitnessIsConfirmedByMeasure) {
  ASSERT_EQ(cpr("gen --m 3 --n 5 --seed 3 -o f35.json").code, 0);
  const Invocation r = cpr("certify f35.json");
  EXPECT_NE(r.out.find("NotCPR (KernelWitness)"), std::string::npos) << r.out;
  const Json cert = json("certify f35.json --json");
  EXPECT_EQ(cert["verdict"], "NotCPR");
  ASSERT_TRUE(cert["witness_file"].is_string());
  const Json w = read(fs::path(cert["witness_file"].get<std::string>()).filename().string());
  write("x.json", w["x"].dump());
  write("y.json", w["y"].dump());
  ASSERT_EQ(cpr("measure f35.json x.json -o bx.json").code, 0);
  ASSERT_EQ(cpr("measure f35.json y.json -o by.json").code, 0);
  EXPECT_LE(rel_gap(read("bx.json")["values"], read("by.json")["values"]), 1e-9);
  const auto x = signal(w["x"]), y = signal(w["y"]);
  EXPECT_GE(cpr::conj_class_distance(x, y) / std::max(x.norm_sq(), y.norm_sq()), 0.05);
}

TEST_F(Cli, CertifyUndecidedOrSearchWitness) {
  ASSERT_EQ(cpr("gen --m 4 --n 9 --seed 5 -o f49.json").code, 0);
  const Json j = json("certify f49.json --budget 0 --json");
  EXPECT_EQ(j["verdict"], "Undecided");
  EXPECT_TRUE(j["witness_file"].is_null());

  ASSERT_EQ(cpr("gen --m 4 --n 8 --seed 1 -o f48.json").code, 0);
  const Json s = json("certify f48.json --budget 500 --json");
  ASSERT_TRUE(s["trials"].is_object());
  EXPECT_EQ(s["trials"]["budget"], 500);
  if (s["verdict"] == "NotCPR") {
    EXPECT_EQ(s["method"], "SearchWitness");
    EXPECT_TRUE(fs::exists(dir_ / "f48.witness.json"));
  } else {
    EXPECT_EQ(s["verdict"], "Undecided");
  }
}

TEST_F(Cli, CertifyRejectsComplexFrames) {
  write("c.json", R"({"m": 2, "n": 2, "field": "complex", "columns": [[[1,0],[0,1]], [[1,0],[0,0]]]})");
  EXPECT_EQ(cpr("certify c.json").code, 2);
  const Invocation r = cpr("certify c.json --json");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("strict"), std::string::npos);
  EXPECT_EQ(cpr("strict c.json").code, 0);
}

TEST_F(Cli, MeasureReconstructRoundTrip) {
  write("mot.json", kMotivating);
  write("x.json", R"({"m": 2, "entries": [[1, 0], [0, 1]]})");
  ASSERT_EQ(cpr("measure mot.json x.json -o b.json").code, 0);
  EXPECT_EQ(read("b.json")["values"], Json::parse("[1.0, 1.0, 2.0]"));
  const Invocation r = cpr("reconstruct mot.json b.json -o xhat.json");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("lift_residual"), std::string::npos);
  EXPECT_NE(r.out.find("rank_excess"), std::string::npos);
  EXPECT_NE(r.out.find("converged: true"), std::string::npos);
  EXPECT_TRUE(cpr::conj_equivalent(signal(read("xhat.json")), cpr::ComplexSignal{1.0, cpr::Complex{0.0, 1.0}}));

  write("bad.json", R"({"m": 3, "entries": [[1, 0], [0, 1], [0, 0]]})");
  EXPECT_EQ(cpr("measure mot.json bad.json").code, 2);
  write("short.json", R"({"values": [1, 2]})");
  EXPECT_EQ(cpr("reconstruct mot.json short.json").code, 2);
  write("neg.json", R"({"values": [-1, -1, -2], "noise_sigma": 0})");
  EXPECT_EQ(cpr("reconstruct mot.json neg.json").code, 3);
}

TEST_F(Cli, AltProjOnGenericFrame) {
  ASSERT_EQ(cpr("gen --m 4 --n 10 --seed 2 -o f.json").code, 0);
  write("x.json", R"({"m": 4, "entries": [[1, 0.5], [-0.3, 2], [0.7, -1], [0.2, 0.1]]})");
  ASSERT_EQ(cpr("measure f.json x.json -o b.json").code, 0);
  const Json r = json("reconstruct f.json b.json --method altproj --strict --json");
  EXPECT_EQ(r["converged"], true);
  const auto x = signal(read("x.json"));
  EXPECT_LE(cpr::conj_class_distance(signal(r["estimate"]), x), 1e-6 * x.norm_sq());
}

TEST_F(Cli, FalsifyReportsWitnessOrNone) {
  write("mot.json", kMotivating);
  const Invocation none = cpr("falsify mot.json --budget 200");
  EXPECT_EQ(none.code, 0);
  EXPECT_NE(none.out.find("no witness found in 200 restarts"), std::string::npos) << none.out;

  ASSERT_EQ(cpr("gen --m 3 --n 5 --seed 1 -o f.json").code, 0);
  const Json j = json("falsify f.json --budget 100 --seed 4 -o w.json --json");
  ASSERT_TRUE(j["witness"].is_object());
  EXPECT_TRUE(fs::exists(dir_ / "w.json"));
}

TEST_F(Cli, WitnessSubcommand) {
  const Json j = json("witness --diag 1,1,1 -o p.json --json");
  EXPECT_LE(j["witness"]["residual"].get<double>(), 1e-12);
  EXPECT_LE(read("p.json")["residual"].get<double>(), 1e-12);
  EXPECT_EQ(cpr("witness --diag 1,0,1 -o d.json").code, 0);
  EXPECT_EQ(cpr("witness --diag2 2,3 -o m2.json").code, 0);

  write("psd.json", "[[1, 0, 0], [0, 1, 0], [0, 0, 1]]");
  EXPECT_EQ(cpr("witness --matrix psd.json -o q.json").code, 3);
  write("h.json", R"({"matrix": [[0, 1], [1, 0]]})");
  EXPECT_EQ(cpr("witness --matrix h.json -o h2.json").code, 0);
  write("big.json", "[[1,0,0,0],[0,-1,0,0],[0,0,1,0],[0,0,0,1]]");
  EXPECT_EQ(cpr("witness --matrix big.json").code, 3);
}

TEST_F(Cli, StrictRealFrame) {
  write("mot.json", kMotivating);
  const Invocation r = cpr("strict mot.json");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("StrictlyCPR; witness y = (1, i)"), std::string::npos) << r.out;
  const Json j = json("strict mot.json --json");
  EXPECT_EQ(j["verdict"], "StrictlyCPR");
}

TEST_F(Cli, JsonOutputIsDeterministic) {
  ASSERT_EQ(cpr("gen --m 4 --n 9 --seed 11 -o f.json").code, 0);
  for (const std::string cmd : {"certify f.json --budget 200 --seed 3 --json", "falsify f.json --budget 50 --json",
                                "strict f.json --json", "gen --m 3 --n 4 --seed 1 --json"}) {
    const Invocation a = cpr(cmd);
    const Invocation b = cpr(cmd, "CPR_THREADS=3");
    EXPECT_EQ(a.code, 0) << cmd;
    EXPECT_EQ(a.out, b.out) << cmd;
    EXPECT_TRUE(Json::accept(a.out)) << cmd;
  }
}

TEST_F(Cli, JsonErrorDocument) {
  const Invocation r = cpr("certify nothing.json --json");
  EXPECT_EQ(r.code, 2);
  const Json j = Json::parse(r.out);
  EXPECT_TRUE(j.contains("error"));
  EXPECT_TRUE(j.contains("message"));
}
