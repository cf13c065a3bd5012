#include "test_support.hpp"

#include "inertid_cli.hpp"

#include <gtest/gtest.h>

#include <algorithm>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace inertid;
using namespace test_support;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code;
  std::string out, err;
};

CliRun run(std::vector<std::string> args) {
  setenv("INERTID_LOG", "quiet", 1);
  args.insert(args.begin(), "inertid");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("inertid_cli_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string golden_path(const std::string& name) { return std::string(INERTID_GOLDEN_DIR) + "/" + name; }

bool numbers_close(double a, double b) { return std::abs(a - b) <= 1e-9 + 1e-6 * std::max(std::abs(a), std::abs(b)); }

void expect_json_close(const nlohmann::json& a, const nlohmann::json& b, const std::string& path) {
  // principal axes are ill-posed for nearly round bodies such as rotors
  if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".axes") == 0) return;
  if (a.is_number() && b.is_number()) {
    EXPECT_TRUE(numbers_close(a.get<double>(), b.get<double>())) << path << ": " << a << " vs " << b;
    return;
  }
  ASSERT_EQ(a.type(), b.type()) << path;
  if (a.is_object()) {
    ASSERT_EQ(a.size(), b.size()) << path;
    for (auto it = a.begin(); it != a.end(); ++it) {
      ASSERT_TRUE(b.contains(it.key())) << path << "." << it.key();
      expect_json_close(it.value(), b[it.key()], path + "." + it.key());
    }
  } else if (a.is_array()) {
    ASSERT_EQ(a.size(), b.size()) << path;
    for (std::size_t i = 0; i < a.size(); ++i) expect_json_close(a[i], b[i], path + "[" + std::to_string(i) + "]");
  } else {
    EXPECT_EQ(a, b) << path;
  }
}

void expect_csv_close(const std::string& a, const std::string& b) {
  std::istringstream sa(a), sb(b);
  std::string la, lb;
  int line = 0;
  while (true) {
    const bool ga = static_cast<bool>(std::getline(sa, la)), gb = static_cast<bool>(std::getline(sb, lb));
    ASSERT_EQ(ga, gb) << "line count differs at " << line;
    if (!ga) break;
    ++line;
    if (la == lb) continue;
    std::istringstream ca(la), cb(lb);
    std::string x, y;
    while (std::getline(ca, x, ',')) {
      ASSERT_TRUE(static_cast<bool>(std::getline(cb, y, ','))) << "line " << line;
      if (x == y) continue;
      char *ex = nullptr, *ey = nullptr;
      const double vx = std::strtod(x.c_str(), &ex), vy = std::strtod(y.c_str(), &ey);
      ASSERT_TRUE(*ex == '\0' && *ey == '\0') << "line " << line << ": " << x << " vs " << y;
      EXPECT_TRUE(numbers_close(vx, vy)) << "line " << line << ": " << x << " vs " << y;
    }
  }
}

/// Compares against tests/golden/<name>; INERTID_UPDATE_GOLDEN=1 rewrites it.
void check_golden(const std::string& name, const std::string& actual) {
  const std::string path = golden_path(name);
  if (std::getenv("INERTID_UPDATE_GOLDEN")) {
    std::ofstream(path) << actual;
    return;
  }
  ASSERT_TRUE(fs::exists(path)) << "missing golden file " << path;
  const std::string expected = slurp(path);
  if (name.size() > 5 && name.substr(name.size() - 5) == ".json")
    expect_json_close(nlohmann::json::parse(actual), nlohmann::json::parse(expected), name);
  else
    expect_csv_close(actual, expected);
}

const std::string kLeg = data_path("cheetah_leg.json");

/// Positions-only log of the leg with friction and light noise.
fs::path leg_log(const fs::path& dir, double duration = 4.0) {
  const fs::path csv = dir / "log.csv";
  const CliRun r = run({"simulate", "--model", kLeg, "--duration", std::to_string(duration), "--noise", "0.05", "--seed", "5",
                     "--scale", "0.9", "--viscous", "0.05,0.08,0.04", "--coulomb", "0.3,0.2,0.15", "--positions-only",
                     "--out", csv.string()});
  EXPECT_EQ(r.code, 0) << r.err;
  return csv;
}

}  // namespace

TEST(Cli, HelpAndUsageErrors) {
  EXPECT_EQ(run({"--help"}).code, 0);
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  EXPECT_EQ(run({"identify", "--model", kLeg}).code, 1);
  const CliRun missing = run({"identify", "--model", "/nonexistent/model.json", "--data", "x.csv"});
  EXPECT_EQ(missing.code, 1);
  EXPECT_NE(missing.err.find("model file not found"), std::string::npos);
  const fs::path d = scratch("usage");
  const fs::path csv = leg_log(d, 0.5);
  EXPECT_EQ(run({"identify", "--model", kLeg, "--data", csv.string(), "--level", "strict", "--out", d.string()}).code, 1);
}

TEST(Cli, SimulateIsDeterministicAndMatchesGolden) {
  const CliRun a = run({"simulate", "--model", kLeg, "--duration", "0.05", "--noise", "0.1", "--seed", "3"});
  const CliRun b = run({"simulate", "--model", kLeg, "--duration", "0.05", "--noise", "0.1", "--seed", "3"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, run({"simulate", "--model", kLeg, "--duration", "0.05", "--noise", "0.1", "--seed", "4"}).out);
  check_golden("simulate_leg.csv", a.out);
  std::istringstream in(a.out);
  const RawLog log = load_csv(in);
  EXPECT_EQ(log.size(), 51);
  EXPECT_TRUE(log.qd.has_value());
}

TEST(Cli, IdentifyEndToEnd) {
  const fs::path d = scratch("identify");
  const fs::path csv = leg_log(d);
  const fs::path out1 = d / "run1", out2 = d / "run2";
  const CliRun r = run({"identify", "--model", kLeg, "--data", csv.string(), "--level", "full+ellipsoid", "--out", out1.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  ASSERT_EQ(run({"identify", "--model", kLeg, "--data", csv.string(), "--level", "full+ellipsoid", "--out", out2.string()}).code, 0);
  for (const char* f : {"identified_params.json", "report.json", "residuals.csv"}) {
    ASSERT_TRUE(fs::exists(out1 / f)) << f;
    EXPECT_EQ(slurp(out1 / f), slurp(out2 / f)) << f;
  }
  const auto rep = nlohmann::json::parse(slurp(out1 / "report.json"));
  EXPECT_EQ(rep["level"], "full+ellipsoid");
  EXPECT_EQ(rep["solver"]["status"], "optimal");
  EXPECT_TRUE(rep["violations"].empty());
  EXPECT_LT(rep["validation"]["overall_rms"].get<double>(), 0.1);
  const auto params = nlohmann::json::parse(slurp(out1 / "identified_params.json"));
  EXPECT_GT(params["strictness"].get<double>(), 0.0);
  check_golden("identify_report.json", slurp(out1 / "report.json"));
  check_golden("identify_params.json", slurp(out1 / "identified_params.json"));

  const CliRun c = run({"check", "--params", (out1 / "identified_params.json").string(), "--model", kLeg});
  ASSERT_EQ(c.code, 0) << c.err;
  EXPECT_TRUE(nlohmann::json::parse(c.out)["consistent"].get<bool>());
}

TEST(Cli, OptionsFileOverridesFlags) {
  const fs::path d = scratch("options");
  const fs::path csv = leg_log(d, 1.0);
  std::ofstream(d / "opts.json") << R"({"level": "semi", "regularization": 1e-4})";
  const CliRun r = run({"identify", "--model", kLeg, "--data", csv.string(), "--level", "none", "--options",
                     (d / "opts.json").string(), "--out", d.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rep = nlohmann::json::parse(slurp(d / "report.json"));
  EXPECT_EQ(rep["level"], "semi");
  EXPECT_EQ(rep["regularization"].get<double>(), 1e-4);
  std::ofstream(d / "bad.json") << R"({"levle": "semi"})";
  EXPECT_EQ(run({"identify", "--model", kLeg, "--data", csv.string(), "--options", (d / "bad.json").string(), "--out",
                 d.string()}).code,
            2);
}

TEST(Cli, DataAndSolverFailures) {
  const fs::path d = scratch("failures");
  std::ofstream(d / "bad.csv") << "t,q1,q2,q3,tau1,tau2\n0,0,0,0,0,0\n";
  const CliRun bad = run({"identify", "--model", kLeg, "--data", (d / "bad.csv").string(), "--out", d.string()});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("tau3"), std::string::npos);

  std::ofstream(d / "broken.json") << "{\"format\": 1, \"bodies\": [{\"name\": \"a\", \"axis\": [2, 0, 0]}]}";
  EXPECT_EQ(run({"identify", "--model", (d / "broken.json").string(), "--data", (d / "bad.csv").string()}).code, 2);

  // every ellipsoid shrunk to a point: no strictly consistent body fits inside
  KinematicModel m = load_model(kLeg);
  for (auto& b : m.bodies) b.ellipsoid = Ellipsoid::sphere(b.ellipsoid->center, 1e-9);
  save_model(m, (d / "tiny.json").string());
  const fs::path csv = leg_log(d, 1.0);
  const CliRun r = run({"identify", "--model", (d / "tiny.json").string(), "--data", csv.string(), "--level",
                     "full+ellipsoid", "--out", d.string()});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("did not reach an optimal solution"), std::string::npos);
}

TEST(Cli, CheckFlagsViolatorAndRepairs) {
  const fs::path d = scratch("check");
  const std::string pend = data_path("pendulum.json");
  const KinematicModel m = load_model(pend);
  InertialParams bad;
  bad.mass = 1.0;
  bad.I_bar = Sym3::diagonal(5, 1, 1);
  ParamVector pv{bad.to_vector(), FrictionParams::zero(1)};
  cli::write_json(d / "bad.json", cli::params_file_json(m, pv, "full", std::nullopt, std::nullopt, kDefaultDeadband, std::nullopt));
  const CliRun r = run({"check", "--params", (d / "bad.json").string(), "--model", pend, "--repair", (d / "fixed.json").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_FALSE(j["consistent"].get<bool>());
  EXPECT_FALSE(j["bodies"]["link"]["fully_consistent"].get<bool>());
  const auto margins = j["bodies"]["link"]["triangle_margins"].get<std::vector<double>>();
  EXPECT_NEAR(*std::min_element(margins.begin(), margins.end()), -3.0, 1e-12);
  const auto fixed = nlohmann::json::parse(slurp(d / "fixed.json"));
  EXPECT_NEAR(fixed["bodies"][0]["params"][4].get<double>(), 4.0, 1e-5);
  EXPECT_NEAR(fixed["bodies"][0]["params"][7].get<double>(), 2.0, 1e-5);
  const CliRun again = run({"check", "--params", (d / "fixed.json").string(), "--model", pend});
  EXPECT_TRUE(nlohmann::json::parse(again.out)["consistent"].get<bool>());

  // the nominal leg is all green, including realizability on its ellipsoids
  ParamVector nominal{load_model(kLeg).stacked_params(), FrictionParams::zero(3)};
  cli::write_json(d / "leg.json", cli::params_file_json(load_model(kLeg), nominal, "full+ellipsoid", std::nullopt,
                                                        std::nullopt, kDefaultDeadband, std::nullopt));
  const CliRun leg = run({"check", "--params", (d / "leg.json").string(), "--model", kLeg});
  EXPECT_TRUE(nlohmann::json::parse(leg.out)["consistent"].get<bool>()) << leg.out;
}

TEST(Cli, RealizeBox) {
  const CliRun r = run({"realize", "--model", data_path("pendulum.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_EQ(j["bodies"][0]["points"].size(), 4u);
  EXPECT_LE(j["bodies"][0]["moment_error"].get<double>(), 1e-9);
  EXPECT_EQ(r.out, run({"realize", "--model", data_path("pendulum.json")}).out);
  check_golden("realize_pendulum.json", r.out);
  const CliRun in = run({"realize", "--model", kLeg, "--in-ellipsoid"});
  ASSERT_EQ(in.code, 0) << in.err;
  EXPECT_EQ(nlohmann::json::parse(in.out)["bodies"].size(), 6u);
  EXPECT_EQ(run({"realize", "--model", kLeg, "--body", "nope"}).code, 1);
}

TEST(Cli, CurveCsv) {
  const fs::path d = scratch("curve");
  const fs::path csv = leg_log(d, 1.0);
  const CliRun r = run({"curve", "--model", kLeg, "--data", csv.string(), "--levels", "none,full", "--sizes", "100,400"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "level,train_samples,status,overall_rms,rms1,rms2,rms3");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 4);
}

TEST(Cli, ExportSdpAndCompare) {
  const fs::path d = scratch("export");
  const fs::path csv = leg_log(d, 0.5);
  const fs::path prog = d / "prog.txt", sol = d / "sol.txt";
  const CliRun r = run({"export-sdp", "--model", kLeg, "--data", csv.string(), "--level", "full+ellipsoid", "--out",
                     prog.string(), "--write-solution", sol.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream pin(prog);
  const ConicProgram p = read_conic_program(pin);
  EXPECT_EQ(p.num_variables(), 1 + 60 + 6);
  setenv("INERTID_LOG", "info", 1);
  std::vector<std::string> args = {"inertid", "export-sdp", "--model", kLeg, "--data", csv.string(), "--level",
                                   "full+ellipsoid", "--out", prog.string(), "--solution", sol.string()};
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  ASSERT_EQ(cli::run(static_cast<int>(argv.size()), argv.data(), out, err), 0);
  const std::string e = err.str();
  const auto cmp = nlohmann::json::parse(e.substr(e.find('{')));
  EXPECT_LE(std::abs(cmp["objective_difference"].get<double>()), 1e-12);
  EXPECT_TRUE(cmp["external_violations"].empty());
}
