#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sdereg/cli.hpp"
#include "sdereg/serialize.hpp"

using namespace sdereg;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run_cli(const std::string& sub, const ExperimentConfig& c) {
  std::ostringstream out, err;
  const int code = cli::run(sub, c, out, err);
  return {code, out.str(), err.str()};
}

ExperimentConfig small(const std::string& model) {
  ExperimentConfig c;
  c.model_name = model;
  c.steps = 64;
  c.n_samples = 200;
  c.deterministic = true;
  return c;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int shell(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::filesystem::path temp_dir() {
  auto dir = std::filesystem::temp_directory_path() /
             ("sdereg_cli_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST(Cli, VerifyModulusZeroModelPasses) {
  const auto r = run_cli("verify-modulus", small("zero"));
  EXPECT_EQ(r.code, cli::kExitPass) << r.err;
  const auto doc = io::Json::parse(r.out);
  EXPECT_TRUE(doc.at("pass").get<bool>());
  const auto report = io::regularity_report_from_json(doc.at("report"));
  EXPECT_TRUE(report.pass);
  EXPECT_EQ(report.ladder.size(), 8u);
}

TEST(Cli, SmallKappaFailsCheckModel) {
  auto c = small("oscillatory1d");
  c.kappa = 0.5;
  const auto r = run_cli("check-model", c);
  EXPECT_EQ(r.code, cli::kExitCheckFailed);
  const auto doc = io::Json::parse(r.out);
  const auto growth = io::condition_report_from_json(doc.at("derivative_growth"));
  EXPECT_GT(growth.violation_count, 0u);
  EXPECT_FALSE(growth.violations.empty());
}

TEST(Cli, CatalogModelsPassCheckModel) {
  for (const auto& name : catalog_names())
    EXPECT_EQ(run_cli("check-model", small(name)).code, cli::kExitPass) << name;
}

TEST(Cli, DeterministicOutputIsStable) {
  auto c = small("oscillatory1d");
  for (const auto& sub : cli::subcommands()) {
    const auto a = run_cli(sub, c), b = run_cli(sub, c);
    EXPECT_EQ(a.out, b.out) << sub;
    EXPECT_EQ(a.out.find("generated_at"), std::string::npos) << sub;
  }
  c.deterministic = false;
  EXPECT_NE(run_cli("solve", c).out.find("generated_at"), std::string::npos);
}

TEST(Cli, ThreadCountDoesNotChangeOutput) {
  auto c = small("oscillatory1d");
  c.threads = 1;
  const auto a = run_cli("verify-modulus", c);
  c.threads = 4;
  const auto b = run_cli("verify-modulus", c);
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, EveryOutputParses) {
  for (const auto& sub : cli::subcommands()) {
    auto c = small("bounded_tanh");
    c.n_samples = 50;
    const auto j = run_cli(sub, c);
    EXPECT_NE(j.code, cli::kExitUsage) << sub << j.err;
    EXPECT_NO_THROW(io::Json::parse(j.out)) << sub;
    c.format = OutputFormat::csv;
    const auto t = run_cli(sub, c);
    EXPECT_NO_THROW(io::read_csv(t.out)) << sub;
  }
  auto c = small("oscillatory1d");
  c.format = OutputFormat::csv;
  const auto sol = io::solution_from_table(io::read_csv(run_cli("solve", c).out));
  EXPECT_EQ(sol.grid.N, 64u);
  EXPECT_EQ(sol.states[0], 0.5);
  const auto rep = io::report_from_table(io::read_csv(run_cli("verify-modulus", c).out));
  EXPECT_EQ(rep.ladder.size(), 8u);
}

TEST(Cli, UsageErrorsExitOne) {
  EXPECT_EQ(run_cli("frobnicate", small("zero")).code, cli::kExitUsage);
  EXPECT_EQ(run_cli("solve", small("no_such_model")).code, cli::kExitUsage);
  auto c = small("zero");
  c.ladder = {0.1, 0.5};
  EXPECT_EQ(run_cli("verify-modulus", c).code, cli::kExitUsage);
  auto d = small("linear1d");
  d.dim = 2;
  d.x0 = {0, 0};
  d.direction = {1, 0};
  EXPECT_EQ(run_cli("solve", d).code, cli::kExitUsage);
}

TEST(Cli, WritesToOutPath) {
  const auto dir = temp_dir();
  auto c = small("linear1d");
  c.out_path = (dir / "sol.csv").string();
  c.format = OutputFormat::csv;
  const auto r = run_cli("solve", c);
  EXPECT_EQ(r.code, cli::kExitPass);
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(io::read_csv(slurp(c.out_path)).rows.size(), 65u);
  std::filesystem::remove_all(dir);
}

TEST(CliBinary, ExitCodesAndFiles) {
  const std::string bin = SDEREG_CLI_PATH;
  const auto dir = temp_dir();
  const std::string a = (dir / "a.json").string(), b = (dir / "b.json").string();
  const std::string common = " --model oscillatory1d --steps 64 --samples 100 --deterministic";
  EXPECT_EQ(shell(bin + " verify-modulus" + common + " --out " + a), 0);
  EXPECT_EQ(shell(bin + " verify-modulus" + common + " --threads 3 --out " + b), 0);
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_NO_THROW(io::regularity_report_from_json(io::Json::parse(slurp(a)).at("report")));

  EXPECT_EQ(shell(bin + " check-model --model oscillatory1d --kappa 0.5 --deterministic --out " +
                  a + " 2>/dev/null"),
            2);
  EXPECT_EQ(shell(bin + " solve --bogus-flag 2>/dev/null"), 1);
  EXPECT_EQ(shell(bin + " 2>/dev/null"), 1);
  EXPECT_EQ(shell(bin + " solve --x0 1,zz 2>/dev/null"), 1);

  const auto cfg = dir / "exp.ini";
  std::ofstream(cfg) << "[model]\nname = zero\n[simulation]\nsteps = 32\nwobble = 3\n";
  const std::string err = (dir / "err.txt").string();
  EXPECT_EQ(shell(bin + " solve --config " + cfg.string() + " 2>" + err), 1);
  EXPECT_NE(slurp(err).find("line 5"), std::string::npos) << slurp(err);

  std::ofstream(cfg) << "[model]\nname = zero\n[simulation]\nsteps = 32\nsamples = 20\n";
  EXPECT_EQ(shell(bin + " verify-modulus --deterministic --config " + cfg.string() + " --out " + a),
            0);
  EXPECT_EQ(io::Json::parse(slurp(a)).at("steps").get<int>(), 32);
  std::filesystem::remove_all(dir);
}
