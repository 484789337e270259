#include <gtest/gtest.h>

#include <sstream>

#include "csuq/error.hpp"
#include "csuq/harness.hpp"
#include "csuq/image_io.hpp"
#include "csuq/simulation.hpp"
#include "helpers.hpp"

using namespace csuq;

namespace {

GroundTruth phantom(std::size_t rows, std::size_t cols, std::size_t s0, std::uint64_t seed = 0) {
  PhantomSpec spec;
  spec.rows = rows;
  spec.cols = cols;
  spec.s0 = s0;
  spec.seed = seed;
  return make_phantom(spec);
}

ExperimentConfig quick_config() {
  ExperimentConfig c;
  c.sigma = 20.0;
  c.trials = 6;
  c.sampling_mode = SamplingMode::kDistinct;
  c.master_seed = 3;
  return c;
}

}  // namespace

TEST(Noise, Moments) {
  EXPECT_EQ(generate_noise(10, 0.0, 1).norm(), 0.0);
  const ComplexSignal e = generate_noise(100000, 1000.0, 2);
  EXPECT_NEAR(e.squaredNorm() / 1e5, 1e6, 0.02 * 1e6);
  double sxy = 0, sxx = 0, syy = 0;
  for (const Complex& v : e) {
    sxy += v.real() * v.imag();
    sxx += v.real() * v.real();
    syy += v.imag() * v.imag();
  }
  EXPECT_LT(std::abs(sxy / std::sqrt(sxx * syy)), 0.02);
  EXPECT_EQ(generate_noise(50, 3.0, 7), generate_noise(50, 3.0, 7));
}

TEST(Phantom, Shape) {
  const GroundTruth t = phantom(4, 8, 5, 1);
  EXPECT_EQ(t.p(), 32u);
  EXPECT_EQ(t.s0(), 5u);
  EXPECT_TRUE(std::is_sorted(t.support.begin(), t.support.end()));
  for (std::size_t i : t.support) {
    const double m = std::abs(t.beta0[static_cast<Eigen::Index>(i)]);
    EXPECT_GE(m, 100.0);
    EXPECT_LE(m, 250.0);
  }
  EXPECT_EQ(t.beta0.cwiseAbs().cast<double>().array().count(), 5);
}

TEST(Sparsify, Threshold) {
  Image img(2, 3);
  img.pixels = {0.0, 5.0, 199.9, 200.0, -250.0, 10.0};
  const GroundTruth t = sparsify_threshold(img, 200.0);
  EXPECT_EQ(t.support, (IndexSet{3, 4}));
  EXPECT_EQ(t.beta0[4], Complex(-250.0, 0.0));
  EXPECT_EQ(t.beta0[2], Complex(0.0));
  EXPECT_EQ(sparsify_threshold(img, 0.0).s0(), 5u);
}

TEST(Experiment, NoiselessFullSamplingIsExact) {
  ExperimentConfig c;
  c.n_fraction = 1.0;
  c.sigma = 0.0;
  c.trials = 1;
  c.sampling_mode = SamplingMode::kDistinct;
  const ExperimentResult r = run_experiment(c, phantom(8, 8, 5));
  ASSERT_EQ(r.per_trial.size(), 1u);
  EXPECT_EQ(r.per_trial[0].h, 1.0);
  EXPECT_EQ(r.per_trial[0].h_S0, 1.0);
  EXPECT_NEAR(r.per_trial[0].ssim, 1.0, 1e-12);
}

TEST(Experiment, DeterministicAcrossThreadCounts) {
  const GroundTruth truth = phantom(8, 16, 4);
  ExperimentConfig c = quick_config();
  const ExperimentResult a = run_experiment(c, truth);
  c.threads = 3;
  const ExperimentResult b = run_experiment(c, truth);
  ASSERT_EQ(a.per_trial.size(), b.per_trial.size());
  for (std::size_t t = 0; t < a.per_trial.size(); ++t) {
    EXPECT_EQ(a.per_trial[t].h, b.per_trial[t].h);
    EXPECT_EQ(a.per_trial[t].ssim, b.per_trial[t].ssim);
    EXPECT_EQ(a.per_trial[t].r_linf, b.per_trial[t].r_linf);
  }
  EXPECT_EQ(a.reconstruction, b.reconstruction);
}

TEST(Experiment, AggregateIsMeanOfTrials) {
  const ExperimentResult r = run_experiment(quick_config(), phantom(8, 16, 4));
  double sum = 0.0;
  for (const auto& t : r.per_trial) sum += t.h_S0;
  EXPECT_DOUBLE_EQ(r.aggregate.h_S0.mean, sum / double(r.per_trial.size()));
  EXPECT_EQ(r.aggregate.successful, r.per_trial.size());
  EXPECT_TRUE(r.valid);
}

TEST(Experiment, FailedTrialsAreExcluded) {
  std::vector<TrialMetrics> trials(4);
  for (std::size_t i = 0; i < 4; ++i) trials[i].h = double(i);
  trials[3].failed = true;
  const ExperimentAggregate agg = aggregate(trials);
  EXPECT_EQ(agg.successful, 3u);
  EXPECT_EQ(agg.failed, 1u);
  EXPECT_DOUBLE_EQ(agg.h.mean, 1.0);
  EXPECT_DOUBLE_EQ(agg.h.stddev, 1.0);
}

TEST(Experiment, EstimatedSigmaAndCrossValidation) {
  ExperimentConfig c = quick_config();
  c.trials = 2;
  c.sigma_known = false;
  c.lambda_multiple.reset();
  c.cv_multiples = {5, 25};
  const ExperimentResult r = run_experiment(c, phantom(8, 16, 4));
  for (const auto& t : r.per_trial) {
    EXPECT_FALSE(t.failed) << t.error;
    EXPECT_GT(t.sigma_hat, 0.0);
    EXPECT_NE(t.sigma_hat, c.sigma);
  }
}

TEST(Experiment, ConfigValidation) {
  ExperimentConfig c;
  c.alpha = 1.0;
  EXPECT_ANY_THROW(c.validate());
  ExperimentConfig d;
  d.n_fraction = 1e-6;
  EXPECT_ANY_THROW(d.measurements(100));
  EXPECT_EQ(ExperimentConfig{}.measurements(2048), 819u);
}

TEST(Table, RowsAndCsv) {
  std::vector<ExperimentConfig> configs(3, quick_config());
  const std::vector<std::size_t> s0{2, 4, 2};
  const auto rows = run_table(configs, [&](const ExperimentConfig&, std::size_t row) { return phantom(8, 16, s0[row]); });
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].s0, 2u);
  EXPECT_EQ(rows[1].s0, 4u);
  EXPECT_EQ(rows[0].h_S0, rows[2].h_S0);
  EXPECT_EQ(rows[0].ssim, rows[2].ssim);
  std::ostringstream csv;
  write_table_csv(csv, rows);
  EXPECT_EQ(csv.str().substr(0, csv.str().find('\n')), "threshold,s0,h_S0,h,ssim");
}

TEST(ImageIo, PgmAsciiAndBinary) {
  std::istringstream p2("P2\n# comment\n3 2\n255\n0 10 20\n30 40 255\n");
  const Image a = read_pgm(p2);
  EXPECT_EQ(a.rows, 2u);
  EXPECT_EQ(a.cols, 3u);
  EXPECT_EQ(a(1, 2), 255.0);

  std::string p5 = "P5\n2 1\n65535\n";
  p5 += std::string{char(0x01), char(0x02), char(0xff), char(0xff)};
  std::istringstream in(p5);
  const Image b = read_pgm(in);
  EXPECT_EQ(b(0, 0), 258.0);
  EXPECT_EQ(b(0, 1), 65535.0);

  std::istringstream bad("P2\n2 2\n255\n1 2 3\n");
  EXPECT_THROW(read_pgm(bad), IoError);
}

TEST(ImageIo, CsvRoundTrip) {
  std::istringstream in("1,2,3\n\n4,5.5,6\n");
  const Image img = read_csv_image(in);
  EXPECT_EQ(img.rows, 2u);
  EXPECT_EQ(img(1, 1), 5.5);
  std::ostringstream out;
  write_csv_image(out, img);
  std::istringstream again(out.str());
  EXPECT_EQ(read_csv_image(again).pixels, img.pixels);
  std::istringstream ragged("1,2\n3\n");
  EXPECT_THROW(read_csv_image(ragged), IoError);
}

TEST(ImageIo, MissingFileNamesPath) {
  try {
    load_image("/nonexistent/slice.pgm");
    FAIL();
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/slice.pgm"), std::string::npos);
  }
}
