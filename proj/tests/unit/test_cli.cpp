// End-to-end tests of the command-line tool: exit codes, output formats and metadata.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "viscowave/io.hpp"

namespace fs = std::filesystem;
using viscowave::json;

namespace {

const fs::path kTmp = VISCOWAVE_TEST_TMPDIR;

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  fs::create_directories(kTmp);
  const fs::path out = kTmp / "stdout.txt";
  const std::string cmd = std::string(VISCOWAVE_CLI_PATH) + " " + args + " > " + out.string() +
                          " 2> " + (kTmp / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  r.out = ss.str();
  return r;
}

std::string write_file(const std::string& name, const std::string& text) {
  fs::create_directories(kTmp);
  const fs::path p = kTmp / name;
  std::ofstream(p) << text;
  return p.string();
}

std::string model(const std::string& name, const std::string& law) {
  return write_file(name, R"({"rho":1,"c0":1,"law":)" + law + R"(,"mu":null,"mu0":0})");
}

viscowave::CsvTable parse_csv(const std::string& s) {
  std::istringstream in(s);
  return viscowave::read_csv(in);
}

}  // namespace

TEST(Cli, EvalPowerLaw) {
  const auto m = model("pl.json", R"({"type":"power","a":1,"alpha":0.5})");
  const auto r = run("eval --model " + m + " --omega-min 1e-3 --omega-max 1e3 --omega-points 64 --omega-log");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("# viscowave ", 0), 0u);
  const auto t = parse_csv(r.out);
  EXPECT_EQ(t.rows.size(), 64u);
  EXPECT_EQ(t.header, (std::vector<std::string>{"omega", "attenuation", "dispersion", "phase_speed",
                                               "variable_exponent"}));
}

TEST(Cli, EvalZeroLaw) {
  const auto m = write_file("zero.json", R"({"rho":1,"c0":2,"law":null,"mu":null,"mu0":0})");
  const auto r = run("eval --model " + m + " --omega-points 10");
  ASSERT_EQ(r.code, 0);
  const auto t = parse_csv(r.out);
  for (const auto& row : t.rows) {
    EXPECT_EQ(row[1], 0.0);
    EXPECT_EQ(row[3], 2.0);
  }
}

TEST(Cli, EvalTwoExponentColumn) {
  const auto m = model("b2.json", R"({"type":"two_exponent","c":1,"tau":1,"alpha":0.8,"beta":0.4})");
  const auto r = run("eval --model " + m + " --omega-min 10 --omega-max 1e6 --omega-points 30 --omega-log");
  ASSERT_EQ(r.code, 0);
  const auto t = parse_csv(r.out);
  // alpha(p) = ln b/ln p approaches 0.8 from above on (1, inf) for this law.
  for (const auto& row : t.rows) EXPECT_GT(row[4], 0.8);
}

TEST(Cli, HashIsDeterministicAndConfigSensitive) {
  const auto m = model("pl2.json", R"({"type":"power","a":1,"alpha":0.5})");
  const auto a = run("eval --model " + m + " --omega-points 5");
  const auto b = run("eval --model " + m + " --omega-points 5");
  const auto c = run("eval --model " + m + " --omega-points 6");
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out.substr(0, a.out.find('\n')), c.out.substr(0, c.out.find('\n')));
}

TEST(Cli, Classify) {
  const auto run_class = [](const std::string& name, const std::string& law) {
    const auto r = run("classify --model " + model(name, law));
    EXPECT_EQ(r.code, 0);
    const auto j = json::parse(r.out);
    EXPECT_TRUE(j.contains("metadata"));
    return j["class"].get<std::string>();
  };
  EXPECT_EQ(run_class("c1.json", R"({"type":"power","a":1,"alpha":0.5})"), "finite");
  EXPECT_EQ(run_class("c2.json", R"({"type":"log_power","alpha":2})"), "finite");
  // Re b(-i w) of LogPower(1) decays like w/ln^2 w, so the integral converges.
  EXPECT_EQ(run_class("c3.json", R"({"type":"log_power","alpha":1})"), "finite");
}

TEST(Cli, GreenSnapshotsAndSidecar) {
  const auto half = model("g05.json", R"({"type":"power","a":1,"alpha":0.5})");
  const auto sup = model("g15.json", R"({"type":"power","a":-1,"alpha":1.5})");
  const auto oa = (kTmp / "g05.csv").string();
  const auto ob = (kTmp / "g15.csv").string();
  ASSERT_EQ(run("green --model " + half + " --t 2 --no-fast-path --out " + oa).code, 0);
  ASSERT_EQ(run("green --model " + sup + " --t 2 --out " + ob).code, 0);
  auto ahead = [](const std::string& path) {
    std::ifstream in(path);
    const auto t = viscowave::read_csv(in);
    double peak = 0.0, front = 0.0;
    for (const auto& r : t.rows) {
      peak = std::max(peak, std::abs(r[1]));
      if (r[0] > 2.0) front = std::max(front, std::abs(r[1]));
    }
    return front / peak;
  };
  EXPECT_LE(ahead(oa), 1e-6);
  EXPECT_GT(ahead(ob), 1e-3);
  std::ifstream side(ob + ".json");
  const auto j = json::parse(side);
  EXPECT_EQ(j["t"], 2.0);
  EXPECT_TRUE(j["contour"].contains("max_omega_reached"));
  EXPECT_EQ(j["errors"].size(), 80u);
}

TEST(Cli, GreenNodeDoubling) {
  const auto sup = model("g15b.json", R"({"type":"power","a":-1,"alpha":1.5})");
  const auto a = run("green --model " + sup + " --t 2 --x-points 20");
  const auto b = run("green --model " + sup + " --t 2 --x-points 20 --contour-nodes 4");
  ASSERT_EQ(a.code, 0);
  ASSERT_EQ(b.code, 0);
  const auto ta = parse_csv(a.out), tb = parse_csv(b.out);
  for (std::size_t i = 0; i < ta.rows.size(); ++i)
    EXPECT_NEAR(ta.rows[i][1], tb.rows[i][1], 1e-6 * std::max(std::abs(ta.rows[i][1]), 1e-3));
}

TEST(Cli, GreenElasticStep) {
  const auto el = write_file("el.json", R"({"rho":1,"c0":1,"law":null,"mu":null,"mu0":0})");
  const auto r = run("green --model " + el + " --t 1 --dim 1 --x-min -2 --x-max 2 --x-points 9");
  ASSERT_EQ(r.code, 0);
  const auto t = parse_csv(r.out);
  EXPECT_EQ(t.rows.front()[1], 0.0);
  EXPECT_EQ(t.rows[4][1], 0.5);
}

TEST(Cli, FitRoundtripAndConversion) {
  std::ostringstream csv;
  csv.precision(17);
  csv << "omega,attenuation\n";
  for (int i = 0; i < 50; ++i) {
    const double w = std::pow(10.0, -2.0 + 5.0 * i / 49.0);
    csv << w << ',' << (w * w / (1.0 + w * w) + 2.0 * w * w / (100.0 + w * w)) << '\n';
  }
  const auto s = write_file("samples.csv", csv.str());
  const auto r = run("fit --samples " + s + " --r-min 0.01 --r-max 1000 --r-per-decade 1 --convert");
  ASSERT_EQ(r.code, 0);
  const auto j = json::parse(r.out);
  ASSERT_EQ(j["atoms"].size(), 2u);
  EXPECT_NEAR(j["atoms"][0]["c"].get<double>(), 1.0, 1e-6);
  EXPECT_NEAR(j["atoms"][1]["c"].get<double>(), 2.0, 1e-6);
  EXPECT_EQ(j["side"], "attenuation");
  EXPECT_FALSE(j["relaxation"]["atomic"].get<bool>());
  EXPECT_FALSE(j["relaxation"]["messages"].empty());
}

TEST(Cli, FitEmptySamplesIsInputError) {
  const auto s = write_file("empty.csv", "");
  EXPECT_EQ(run("fit --samples " + s).code, 2);
}

TEST(Cli, ConvertRelaxationSpectrum) {
  const auto s = write_file("mu.json", R"({"atoms":[{"r":1,"c":1}],"density":null,"side":"relaxation","mu0":0})");
  const auto r = run("convert --spectrum " + s);
  ASSERT_EQ(r.code, 0);
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["side"], "attenuation");
  EXPECT_EQ(j["density"]["type"], "table");
  EXPECT_NEAR(j["c0"].get<double>(), 1.0, 1e-14);
}

TEST(Cli, AdmissibleAndCmCheck) {
  const auto pl = model("adm.json", R"({"type":"power","a":1,"alpha":0.6})");
  const auto a = run("admissible --model " + pl);
  ASSERT_EQ(a.code, 0);
  EXPECT_TRUE(json::parse(a.out)["pass"].get<bool>());
  const auto c = run("cm-check --model " + pl + " --t-points 12");
  ASSERT_EQ(c.code, 0);
  EXPECT_TRUE(json::parse(c.out)["pass"].get<bool>());
  const auto low = model("adm3.json", R"({"type":"power","a":1,"alpha":0.3})");
  const auto d = run("cm-check --model " + low + " --t-points 12");
  ASSERT_EQ(d.code, 0);
  EXPECT_FALSE(json::parse(d.out)["pass"].get<bool>());
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run("eval").code, 2);
  EXPECT_EQ(run("eval --model /nonexistent.json").code, 2);
  EXPECT_EQ(run("bogus").code, 2);
  const auto bad = write_file("bad.json", "{not json");
  EXPECT_EQ(run("classify --model " + bad).code, 2);
  const auto badlaw = model("badlaw.json", R"({"type":"power","a":1,"alpha":7})");
  EXPECT_EQ(run("classify --model " + badlaw).code, 2);
  // A truncated contour too short to converge is a numerical failure.
  const auto pl = model("num.json", R"({"type":"power","a":1,"alpha":0.5})");
  EXPECT_EQ(run("green --model " + pl + " --t 2 --no-fast-path --contour-pmax 1e-3 --x-points 3").code, 3);
  EXPECT_EQ(run("--version").code, 0);
}
