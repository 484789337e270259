#include <gtest/gtest.h>

#include <sstream>

#include "csuq/error.hpp"
#include "csuq/simulation.hpp"
#include "csuq/uq.hpp"
#include "helpers.hpp"

using namespace csuq;
using csuq::testing::random_signal;

TEST(Debias, FixedPointsAndMatchedFilter) {
  Rng rng(1);
  const SubsampledFourier op(sample_pattern(64, 30, 2));
  const ComplexSignal b = random_signal(64, rng);
  const DebiasedEstimate interp = debias(op, op.forward(b), b);
  EXPECT_LT((interp.beta_u - b).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_EQ(interp.pattern_ref, op.pattern().fingerprint());
  const ComplexSignal y = random_signal(30, rng);
  EXPECT_LT((debias(op, y, ComplexSignal::Zero(64)).beta_u - op.adjoint(y) / 30.0).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Debias, FullSamplingRecoversTruth) {
  Rng rng(2);
  const SubsampledFourier op(sample_pattern(16, 16, 3, SamplingMode::kDistinct));
  const ComplexSignal beta0 = random_signal(16, rng);
  const ComplexSignal any = random_signal(16, rng);
  EXPECT_LT((debias(op, op.forward(beta0), any).beta_u - beta0).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Debias, EmptyPatternThrows) {
  const SubsampledFourier op(sample_pattern(8, 0, 1));
  EXPECT_THROW(debias(op, ComplexSignal(0), ComplexSignal::Zero(8)), DimensionError);
}

TEST(Lambda0, Values) {
  EXPECT_EQ(lambda0(0.0, 1.0, 100, 50), 0.0);
  // (1000 / 192) (2 + sqrt(12 ln 92160)), evaluated independently.
  EXPECT_NEAR(lambda0(1000.0, 1.0, 36864, 92160), 71.41765249568863, 1e-9);
  EXPECT_NEAR(lambda0(3.0, 2.0, 400, 1000) / lambda0(3.0, 2.0, 1600, 1000), 2.0, 1e-14);
  EXPECT_THROW(lambda0(1.0, 1.0, 10, 1), DomainError);
  EXPECT_THROW(lambda0(1.0, 0.5, 10, 10), DomainError);
}

TEST(LambdaScale, Conversion) {
  EXPECT_DOUBLE_EQ(lambda_from_multiple(25.0, 2.0, 10, LambdaScale::kMeanSquares), 50.0);
  EXPECT_DOUBLE_EQ(lambda_from_multiple(25.0, 2.0, 10, LambdaScale::kSumOfSquares), 5.0);
  EXPECT_EQ(parse_lambda_scale(to_string(LambdaScale::kSumOfSquares)), LambdaScale::kSumOfSquares);
  EXPECT_THROW(parse_lambda_scale("median"), DomainError);
}

TEST(NoiseEstimate, ZeroResidualAndScale) {
  Rng rng(3);
  const SubsampledFourier op(sample_pattern(32, 20, 4));
  const ComplexSignal b = random_signal(32, rng);
  EXPECT_EQ(estimate_noise(op, op.forward(b), b), 0.0);
  const ComplexSignal y = random_signal(20, rng);
  EXPECT_NEAR(estimate_noise(op, y, ComplexSignal::Zero(32)), y.norm() / std::sqrt(20.0), 1e-12);
  EXPECT_THROW(estimate_noise(SubsampledFourier(sample_pattern(8, 1, 1)), ComplexSignal::Zero(1), ComplexSignal::Zero(8)),
               DimensionError);
}

TEST(Radius, Values) {
  // (1000 / 192) sqrt(ln 20)
  EXPECT_NEAR(confidence_radius(1000.0, 36864, 0.05), 9.01467907605357, 1e-10);
  EXPECT_LT(confidence_radius(5.0, 10, 1.0 - 1e-12), 1e-5);
  EXPECT_GT(confidence_radius(1.0, 10, 0.01), confidence_radius(1.0, 10, 0.05));
  EXPECT_NEAR(confidence_radius(2.0, 100, 0.1) / confidence_radius(2.0, 400, 0.1), 2.0, 1e-14);
  EXPECT_THROW(confidence_radius(1.0, 10, 0.0), DomainError);
  EXPECT_THROW(confidence_radius(1.0, 10, 1.0), DomainError);
}

TEST(Regions, ClosedDisks) {
  DebiasedEstimate est;
  est.beta_u = ComplexSignal::Zero(3);
  est.beta_u[1] = Complex(1.0, 1.0);
  est.beta_hat = est.beta_u;
  ConfidenceRegions r = confidence_regions(est, 4.0, 16, 0.05);
  EXPECT_DOUBLE_EQ(r.radius, std::sqrt(std::log(20.0)));
  EXPECT_TRUE(contains(r, 1, Complex(1.0 + r.radius, 1.0)));
  EXPECT_FALSE(contains(r, 1, Complex(1.0 + r.radius * (1 + 1e-12), 1.0)));
  r.radius = 0.0;
  EXPECT_TRUE(contains(r, 0, 0.0));
  EXPECT_FALSE(contains(r, 0, Complex(1e-300, 0.0)));
  EXPECT_THROW(contains(r, 3, 0.0), DimensionError);
  set_roundoff_slack(r);
  EXPECT_DOUBLE_EQ(r.slack, kRoundoffSlack * std::sqrt(2.0));
  EXPECT_TRUE(contains(r, 1, Complex(1.0 + 1e-13, 1.0)));

  std::ostringstream csv;
  write_regions_csv(csv, r);
  EXPECT_EQ(csv.str().substr(0, csv.str().find('\n')), "coordinate,re_center,im_center,radius");
}

TEST(NoiseTermCoverage, MatchesOneMinusAlpha) {
  // beta0 = 0 and beta_hat = 0: beta_u = F^*eps/n, and each |W_i|/sqrt(n) is Rayleigh.
  const std::size_t p = 64, n = 40, draws = 10000;
  const SubsampledFourier op(sample_pattern(p, n, 5));
  const double sigma = 3.0, alpha = 0.1;
  const double radius = confidence_radius(sigma, n, alpha);
  std::vector<std::size_t> hits(p, 0);
  for (std::size_t d = 0; d < draws; ++d) {
    const ComplexSignal w = op.adjoint(generate_noise(n, sigma, derive_seed(6, d))) / double(n);
    for (std::size_t i = 0; i < p; ++i) hits[i] += std::abs(w[static_cast<Eigen::Index>(i)]) <= radius;
  }
  for (std::size_t i = 0; i < p; ++i) EXPECT_NEAR(double(hits[i]) / draws, 1.0 - alpha, 0.01) << i;
}

namespace {

ComplexSignal spikes(std::size_t p, std::size_t s0, std::uint64_t seed) {
  PhantomSpec spec;
  spec.rows = 1;
  spec.cols = p;
  spec.s0 = s0;
  spec.seed = seed;
  return make_phantom(spec).beta0;
}

}  // namespace

TEST(CrossValidation, SingleCandidate) {
  const SubsampledFourier op(sample_pattern(64, 30, 7));
  const ComplexSignal y = op.forward(spikes(64, 3, 1));
  CvOptions opts;
  opts.multiples = {25.0};
  const CvResult r = select_lambda_cv(op, y, 2.0, opts);
  EXPECT_DOUBLE_EQ(r.lambda, 25.0 * lambda0(2.0, 1.0, 30, 64));
  EXPECT_EQ(r.multiple, 25.0);
}

TEST(CrossValidation, NoiselessPrefersSmallestMultiple) {
  const std::size_t p = 256, n = 128;
  const SubsampledFourier op(sample_pattern(p, n, 8));
  const ComplexSignal y = op.forward(spikes(p, 5, 2));
  CvOptions opts;
  opts.seed = 3;
  const CvResult r = select_lambda_cv(op, y, 1.0, opts);
  EXPECT_EQ(r.multiple, opts.multiples.front());
  for (std::size_t i = 1; i < r.table.size(); ++i) EXPECT_GE(r.table[i].mean_error, r.table[i - 1].mean_error * (1 - 1e-9));
}

TEST(CrossValidation, DeterministicAndThreadIndependent) {
  const SubsampledFourier op(sample_pattern(128, 60, 9));
  const ComplexSignal y = op.forward(spikes(128, 4, 3)) + generate_noise(60, 20.0, 4);
  CvOptions opts;
  opts.seed = 11;
  const CvResult a = select_lambda_cv(op, y, 20.0, opts);
  opts.threads = 4;
  const CvResult b = select_lambda_cv(op, y, 20.0, opts);
  ASSERT_EQ(a.table.size(), b.table.size());
  EXPECT_EQ(a.lambda, b.lambda);
  for (std::size_t i = 0; i < a.table.size(); ++i) EXPECT_EQ(a.table[i].fold_errors, b.table[i].fold_errors);
}

TEST(CrossValidation, RejectsBadOptions) {
  const SubsampledFourier op(sample_pattern(16, 4, 1));
  CvOptions opts;
  opts.folds = 5;
  EXPECT_THROW(select_lambda_cv(op, ComplexSignal::Zero(4), 1.0, opts), DimensionError);
  opts.multiples.clear();
  EXPECT_THROW(select_lambda_cv(op, ComplexSignal::Zero(4), 1.0, opts), DomainError);
}
