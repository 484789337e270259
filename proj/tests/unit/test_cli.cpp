#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "csuq/error.hpp"

using namespace csuq;
using namespace csuq::cli;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  TempDir() : path_(fs::temp_directory_path() / ("csuq_cli_" + std::to_string(counter_++) + "_" +
                                                  std::to_string(::testing::UnitTest::GetInstance()->random_seed()))) {
    fs::remove_all(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  static inline int counter_ = 0;
  fs::path path_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunManifest phantom_manifest(Command command, const fs::path& out) {
  RunManifest m;
  m.command = command;
  m.p = 256;
  m.phantom_s0 = {6};
  m.config.sigma = 10.0;
  m.config.trials = 3;
  m.config.sampling_mode = SamplingMode::kDistinct;
  m.output_dir = out;
  return m;
}

int run_cli(std::vector<std::string> args) {
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return cli::main(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

TEST(Cli, ImageShape) {
  EXPECT_EQ(image_shape_for(2048), (std::pair<std::size_t, std::size_t>{32, 64}));
  EXPECT_EQ(image_shape_for(1024), (std::pair<std::size_t, std::size_t>{32, 32}));
  EXPECT_EQ(image_shape_for(13), (std::pair<std::size_t, std::size_t>{1, 13}));
}

TEST(Cli, ReconstructNoiselessFullSampling) {
  TempDir dir;
  RunManifest m = phantom_manifest(Command::kReconstruct, dir.path());
  m.p = 1024;
  m.phantom_s0 = {10};
  m.config.sigma = 0.0;
  m.config.n_fraction = 1.0;
  m.emit_plots = true;
  const auto files = run(m);
  EXPECT_EQ(files.size(), 6u);
  const auto j = nlohmann::json::parse(slurp(dir.path() / "metrics.json"));
  EXPECT_EQ(j["metrics"]["h"].get<double>(), 1.0);
  EXPECT_NEAR(j["metrics"]["ssim"].get<double>(), 1.0, 1e-12);
  EXPECT_EQ(j["manifest"]["config"]["sigma"].get<double>(), 0.0);
  EXPECT_EQ(slurp(dir.path() / "beta_hat.csv").substr(0, 12), "index,re,im\n");
  EXPECT_NE(slurp(dir.path() / "intervals.svg").find("<svg"), std::string::npos);
}

TEST(Cli, TableIsByteIdentical) {
  TempDir a, b;
  RunManifest m = phantom_manifest(Command::kTable, a.path());
  m.phantom_s0 = {4, 8};
  run(m);
  m.output_dir = b.path();
  m.config.threads = 4;
  run(m);
  const std::string first = slurp(a.path() / "table.csv");
  EXPECT_FALSE(first.empty());
  EXPECT_EQ(first, slurp(b.path() / "table.csv"));
  EXPECT_EQ(std::count(first.begin(), first.end(), '\n'), 3);
}

TEST(Cli, TableFromImageThresholds) {
  TempDir dir;
  fs::create_directories(dir.path());
  const fs::path img = dir.path() / "img.pgm";
  {
    std::ofstream out(img);
    out << "P2\n16 16\n255\n";
    for (int i = 0; i < 256; ++i) out << ((i * 37) % 11 == 0 ? 220 : (i % 7 == 0 ? 195 : 3)) << ' ';
  }
  RunManifest m = phantom_manifest(Command::kTable, dir.path() / "out");
  m.phantom_s0.clear();
  m.p = 0;
  m.input_path = img;
  m.thresholds = {210, 190};
  run(m);
  std::istringstream csv(slurp(dir.path() / "out" / "table.csv"));
  std::string header, r1, r2;
  std::getline(csv, header);
  std::getline(csv, r1);
  std::getline(csv, r2);
  EXPECT_EQ(r1.substr(0, 4), "210,");
  EXPECT_EQ(r2.substr(0, 4), "190,");
}

TEST(Cli, TrialsDiagnosticsPhantom) {
  TempDir dir;
  RunManifest m = phantom_manifest(Command::kTrials, dir.path());
  run(m);
  const auto summary = nlohmann::json::parse(slurp(dir.path() / "summary.json"));
  EXPECT_EQ(summary["aggregate"]["successful"].get<int>(), 3);

  m.command = Command::kDiagnostics;
  m.diagnostics.seeds = 3;
  m.diagnostics.coverage_trials = 3;
  m.diagnostics.rip_order = 2;
  m.diagnostics.rip_max_p = 300;
  run(m);
  const auto diag = nlohmann::json::parse(slurp(dir.path() / "diagnostics.json"));
  EXPECT_LT(diag["decomposition"]["residual_linf"].get<double>(), 1e-8);
  EXPECT_EQ(diag["bias_sweep"].size(), 3u);
  EXPECT_EQ(diag["rip"].size(), 2u);

  m.command = Command::kPhantom;
  run(m);
  EXPECT_TRUE(fs::exists(dir.path() / "phantom.csv"));
  EXPECT_TRUE(fs::exists(dir.path() / "phantom_complex.csv"));
}

TEST(Cli, DiagnosticsNoiselessFullSampling) {
  TempDir dir;
  RunManifest m = phantom_manifest(Command::kDiagnostics, dir.path());
  m.config.sigma = 0.0;
  m.config.n_fraction = 1.0;
  m.diagnostics.seeds = 2;
  m.diagnostics.coverage_trials = 2;
  m.diagnostics.sweep_fractions = {1.0};
  run(m);
  const auto diag = nlohmann::json::parse(slurp(dir.path() / "diagnostics.json"));
  EXPECT_LT(diag["decomposition"]["r_linf"].get<double>(), 1e-9);
  EXPECT_EQ(diag["coverage"]["overall"].get<double>(), 1.0);
}

TEST(Cli, IntervalPlot) {
  ConfidenceRegions r;
  r.center = ComplexSignal::Zero(5);
  r.center[2] = 3.0;
  r.radius = 0.5;
  const std::string empty = render_intervals_svg(r, nullptr, 0);
  EXPECT_NE(empty.find("<svg"), std::string::npos);
  EXPECT_NE(empty.find("</svg>"), std::string::npos);
  EXPECT_THROW(render_intervals_svg(r, nullptr, 6), DomainError);
  EXPECT_EQ(render_intervals_svg(r, nullptr, 3), render_intervals_svg(r, nullptr, 3));
  const std::string three = render_intervals_svg(r, nullptr, 3);
  EXPECT_EQ(std::count(three.begin(), three.end(), '\n'), std::count(empty.begin(), empty.end(), '\n') + 6);
}

TEST(Cli, MainExitCodes) {
  TempDir dir;
  EXPECT_NE(run_cli({"csuq", "reconstruct", "--input", "/nonexistent/x.pgm", "--out", dir.path().string()}), 0);
  EXPECT_NE(run_cli({"csuq", "trials", "--sampling", "bogus"}), 0);
  EXPECT_EQ(run_cli({"csuq", "phantom", "--phantom", "s0=3", "--p", "64", "--out", dir.path().string()}), 0);
  EXPECT_TRUE(fs::exists(dir.path() / "phantom.csv"));
}

TEST(Cli, ConfigFileWithFlagOverride) {
  TempDir dir;
  fs::create_directories(dir.path());
  const fs::path cfg = dir.path() / "run.ini";
  {
    std::ofstream out(cfg);
    out << "sigma=7\ntrials=2\nphantom=s0=3\np=128\nsampling=distinct\n";
  }
  const fs::path out = dir.path() / "out";
  ASSERT_EQ(run_cli({"csuq", "trials", "--config", cfg.string(), "--trials", "1", "--out", out.string()}), 0);
  const auto summary = nlohmann::json::parse(slurp(out / "summary.json"));
  EXPECT_EQ(summary["manifest"]["config"]["sigma"].get<double>(), 7.0);
  EXPECT_EQ(summary["manifest"]["config"]["trials"].get<int>(), 1);
  EXPECT_EQ(summary["manifest"]["config"]["sampling"].get<std::string>(), "distinct");
}
