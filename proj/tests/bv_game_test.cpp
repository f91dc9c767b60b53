#include "parrondo/bv_game.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>

using namespace parrondo;

namespace {

constexpr double kTol = 1e-12;

// <alpha| H O H |0> = 2^-n sum_x (-1)^(x.alpha) phase(x), summed directly.
double direct_success(int n, std::uint64_t alpha, const std::set<std::uint64_t>& unflipped) {
  double amp = 0.0;
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
    const double phase = (dot(x, alpha) && !unflipped.count(x)) ? -1.0 : 1.0;
    amp += (dot(x, alpha) ? -1.0 : 1.0) * phase;
  }
  amp /= std::ldexp(1.0, n);
  return amp * amp;
}

// Mean success over all 2^(2^(n-1)) equally likely independent-mode realizations.
double exhaustive_independent_mean(int n, std::uint64_t alpha) {
  std::vector<std::uint64_t> candidates;
  for (std::uint64_t y = 0; y < (std::uint64_t{1} << n); ++y)
    if (dot(y, alpha)) candidates.push_back(y);
  const std::uint64_t subsets = std::uint64_t{1} << candidates.size();
  double total = 0.0;
  for (std::uint64_t mask = 0; mask < subsets; ++mask) {
    std::set<std::uint64_t> s;
    for (std::size_t i = 0; i < candidates.size(); ++i)
      if (mask >> i & 1) s.insert(candidates[i]);
    total += direct_success(n, alpha, s);
  }
  return total / static_cast<double>(subsets);
}

std::vector<BasisIndex> as_indices(std::initializer_list<std::uint64_t> xs) {
  std::vector<BasisIndex> out;
  for (auto x : xs) out.push_back({x});
  return out;
}

}  // namespace

TEST(FlipCandidates, half_the_basis) {
  for (int n = 1; n <= 8; ++n) {
    for (std::uint64_t alpha = 1; alpha < (std::uint64_t{1} << n); alpha += 3)
      EXPECT_EQ(flip_candidates(n, {alpha}).size(), std::size_t{1} << (n - 1));
  }
  EXPECT_THROW(flip_candidates(3, {0}), InvalidArgument);
  EXPECT_THROW(flip_candidates(3, {8}), InvalidArgument);
}

TEST(NoiseRealization, invariants) {
  EXPECT_THROW(NoiseRealization(3, {1}, as_indices({2})), InvalidArgument);  // 2 . 1 = 0
  EXPECT_THROW(NoiseRealization(3, {1}, as_indices({1, 1})), InvalidArgument);
  EXPECT_THROW(NoiseRealization(3, {0}, {}), InvalidArgument);
  const NoiseRealization ok(3, {1}, as_indices({3, 1}));
  EXPECT_EQ(ok.unflipped(), as_indices({1, 3}));
}

TEST(NoisyOracle, limits) {
  const auto u = uniform_state(4);
  const BasisIndex alpha{11};
  const auto noiseless = noisy_oracle(u, NoiseRealization(4, alpha, {}));
  const auto exact = phase_oracle(u, alpha);
  for (std::size_t i = 0; i < 16; ++i) EXPECT_EQ(noiseless[i], exact[i]);
  const auto never = noisy_oracle(u, NoiseRealization(4, alpha, flip_candidates(4, alpha)));
  for (std::size_t i = 0; i < 16; ++i) EXPECT_EQ(never[i], u[i]);
}

TEST(NoisyOracle, sign_bookkeeping) {
  const auto out = noisy_oracle(uniform_state(3), NoiseRealization(3, {1}, as_indices({1, 3})));
  const double a = 1.0 / std::sqrt(8.0);
  for (std::uint64_t x : {0, 2, 4, 6, 1, 3}) EXPECT_NEAR(out[x], a, kTol) << x;
  for (std::uint64_t x : {5, 7}) EXPECT_NEAR(out[x], -a, kTol) << x;
  EXPECT_NEAR(out.norm_squared(), 1.0, kTol);
}

TEST(NoisyOracle, size_mismatch) {
  EXPECT_THROW(noisy_oracle(uniform_state(4), NoiseRealization(3, {1}, {})), InvalidArgument);
}

TEST(BvRun, fixed_half_is_one_quarter) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto result = bv_run(4, {5}, NoiseMode::fixed_half, seed);
    EXPECT_NEAR(result.success_probability, 0.25, kTol);
    EXPECT_EQ(result.realization.unflipped().size(), 4u);
  }
}

TEST(BvRun, noiseless_is_certain) {
  for (int n = 2; n <= 10; ++n)
    EXPECT_NEAR(bv_run(n, {(std::uint64_t{1} << n) - 1}, NoiseMode::noiseless, 1).success_probability, 1.0, kTol);
}

TEST(BvRun, deterministic_and_validated) {
  const auto a = bv_run(6, {19}, NoiseMode::independent, 42);
  const auto b = bv_run(6, {19}, NoiseMode::independent, 42);
  EXPECT_EQ(a.realization.unflipped(), b.realization.unflipped());
  EXPECT_EQ(a.success_probability, b.success_probability);
  EXPECT_THROW(bv_run(4, {0}, NoiseMode::fixed_half, 1), InvalidArgument);
  EXPECT_THROW(bv_run(1, {1}, NoiseMode::fixed_half, 1), InvalidArgument);
}

TEST(BvRun, simulation_matches_closed_form_and_direct_sum) {
  for (int n = 2; n <= 8; ++n) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const std::uint64_t alpha = 1 + (seed * 7919) % ((std::uint64_t{1} << n) - 1);
      const auto result = bv_run(n, {alpha}, NoiseMode::independent, seed);
      const auto count = result.realization.unflipped().size();
      std::set<std::uint64_t> s;
      for (auto y : result.realization.unflipped()) s.insert(y.value);
      EXPECT_NEAR(result.success_probability, bv_exact_success(n, count), kTol);
      EXPECT_NEAR(result.success_probability, direct_success(n, alpha, s), kTol);
    }
  }
}

TEST(BvRun, independent_exhaustive_mean) {
  EXPECT_NEAR(exhaustive_independent_mean(3, 1), 0.3125, kTol);
  EXPECT_NEAR(exhaustive_independent_mean(4, 9), 0.25 + 1.0 / 32.0, kTol);
}

TEST(BvRun, independent_monte_carlo_mean) {
  for (int n : {3, 6, 10}) {
    const int trials = 4000;
    double sum = 0.0, sum_sq = 0.0;
    for (int t = 0; t < trials; ++t) {
      const double p = bv_run(n, {3}, NoiseMode::independent, derive_seed(77, t)).success_probability;
      sum += p;
      sum_sq += p * p;
    }
    const double mean = sum / trials;
    const double se = std::sqrt((sum_sq / trials - mean * mean) / trials);
    EXPECT_NEAR(mean, 0.25 + std::ldexp(1.0, -(n + 1)), 4 * se) << n;
  }
}

TEST(BvExactSuccess, examples) {
  for (int n = 2; n <= 12; ++n) {
    const std::uint64_t half = std::uint64_t{1} << (n - 1);
    EXPECT_DOUBLE_EQ(bv_exact_success(n, half / 2), 0.25);
    EXPECT_DOUBLE_EQ(bv_exact_success(n, 0), 1.0);
    EXPECT_DOUBLE_EQ(bv_exact_success(n, half), 0.0);
    EXPECT_THROW(bv_exact_success(n, half + 1), InvalidArgument);
  }
  EXPECT_EQ(bv_exact_success_rational(3, 1), Rational(9, 16));
}

TEST(SingleReflectionBaseline, examples) {
  EXPECT_NEAR(single_reflection_baseline(3, {1}, {1}), 0.0625, kTol);
  EXPECT_NEAR(single_reflection_baseline(2, {1}, {1}), 0.25, kTol);
  for (auto y : flip_candidates(3, {6}))
    EXPECT_NEAR(single_reflection_baseline(3, {6}, y), 0.0625, kTol) << y.value;
  EXPECT_THROW(single_reflection_baseline(3, {1}, {2}), InvalidArgument);
  EXPECT_THROW(single_reflection_baseline(3, {0}, {1}), InvalidArgument);
  EXPECT_EQ(single_reflection_baseline_rational(3), Rational(1, 16));
}

TEST(SingleReflectionBaseline, combined_noise_beats_single_reflection) {
  for (int n = 3; n <= 10; ++n) {
    const double baseline = single_reflection_baseline(n, {1}, {1});
    EXPECT_NEAR(baseline, 4.0 / std::pow(4.0, n), kTol);
    EXPECT_GT(bv_run(n, {1}, NoiseMode::fixed_half, 3).success_probability, baseline);
  }
}
