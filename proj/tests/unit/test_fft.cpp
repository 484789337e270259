#include <gtest/gtest.h>

#include <span>

#include "csuq/fft.hpp"
#include "helpers.hpp"

using namespace csuq;
using csuq::testing::naive_dft;
using csuq::testing::random_signal;
using csuq::testing::rel_err;

namespace {

void check_length(std::size_t n) {
  Rng rng(n);
  const ComplexSignal x = random_signal(n, rng);
  const FftPlan plan(n);
  ComplexSignal f = x, b = x;
  plan.forward(std::span(f.data(), n));
  plan.backward(std::span(b.data(), n));
  EXPECT_LT(rel_err(f, naive_dft(x, -1)), 1e-12) << "forward n=" << n;
  EXPECT_LT(rel_err(b, naive_dft(x, +1)), 1e-12) << "backward n=" << n;
}

}  // namespace

TEST(Fft, MatchesNaiveDftForSmallLengths) {
  for (std::size_t n = 1; n <= 130; ++n) check_length(n);
}

TEST(Fft, MixedRadixLengths) {
  for (std::size_t n : {240u, 360u, 720u, 1000u, 2048u, 2187u, 1536u}) check_length(n);
}

TEST(Fft, BluesteinPrimes) {
  for (std::size_t n : {67u, 101u, 127u, 257u, 1009u, 2 * 67u, 3 * 131u}) {
    EXPECT_TRUE(FftPlan(n).uses_bluestein()) << n;
    check_length(n);
  }
  EXPECT_FALSE(FftPlan(61).uses_bluestein());
}

TEST(Fft, RoundTripScalesByLength) {
  Rng rng(5);
  for (std::size_t n : {7u, 92u, 509u, 4096u}) {
    const ComplexSignal x = random_signal(n, rng);
    ComplexSignal y = x;
    const FftPlan plan(n);
    plan.forward(std::span(y.data(), n));
    plan.backward(std::span(y.data(), n));
    EXPECT_LT(rel_err(y / static_cast<double>(n), x), 1e-12) << n;
  }
}

TEST(Fft, ImpulseGivesOnes) {
  const FftPlan plan(92160);
  ComplexSignal x = ComplexSignal::Zero(92160);
  x[0] = 1.0;
  plan.forward(std::span(x.data(), 92160));
  EXPECT_LT((x - ComplexSignal::Ones(92160)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Fft, RejectsWrongLength) {
  const FftPlan plan(8);
  ComplexSignal x = ComplexSignal::Zero(7);
  EXPECT_ANY_THROW(plan.forward(std::span(x.data(), 7)));
  EXPECT_ANY_THROW(plan.backward(std::span(x.data(), 7)));
}
