// Acceptance suite: one line per criterion, exit status 0 only if all pass.

#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "parrondo/parrondo.hpp"

using namespace parrondo;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void check(bool condition, const std::string& what) {
    if (!condition) {
      pass = false;
      detail << "[violated] " << what << "; ";
    }
  }
};

StateVector random_unit_state(int n, std::mt19937_64& gen) {
  std::normal_distribution<double> normal;
  std::vector<double> amps(std::size_t{1} << n);
  double norm = 0.0;
  for (auto& a : amps) {
    a = normal(gen);
    norm += a * a;
  }
  for (auto& a : amps) a /= std::sqrt(norm);
  return StateVector::from_amplitudes(std::move(amps));
}

double max_diff(const StateVector& a, const StateVector& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.dimension(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

std::string run_command(const std::string& args, int& exit_code) {
  const std::string cmd = std::string(PARRONDO_CLI_PATH) + " " + args + " 2>/dev/null";
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) {
    exit_code = -1;
    return out;
  }
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  const int status = pclose(pipe);
  exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return out;
}

// Expected first hitting time of level L from 0 for the +-1 walk that holds
// at 0 with probability 1/2: first-step equations solved by elimination.
Rational hitting_time_oracle(std::uint64_t L) {
  const std::size_t n = L;
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n + 1, 0));
  for (std::size_t i = 0; i < n; ++i) {
    a[i][i] = 1;
    a[i][n] = 1;
    if (i == 0) {
      a[0][0] -= Rational(1, 2);
    } else {
      a[i][i - 1] -= Rational(1, 2);
    }
    if (i + 1 < n) a[i][i + 1] -= Rational(1, 2);
  }
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a[r][c] == 0) continue;
      const Rational f = a[r][c] / a[c][c];
      for (std::size_t k = c; k <= n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return a[0][n] / a[0][0];
}

Outcome criterion_1() {
  Outcome o;
  const auto a = single_game_rate(RotationGame(3)).rate;
  const auto b = single_game_rate(RotationGame(7)).rate;
  o.check(a == Rational(-1, 3), "rate(3) = " + to_string(a));
  o.check(b == Rational(-1, 7), "rate(7) = " + to_string(b));
  o.detail << "rate(3) = " << to_string(a) << ", rate(7) = " << to_string(b);
  return o;
}

Outcome criterion_2() {
  Outcome o;
  const auto P = transition_matrix(CombinedRingGame::from_moduli({3, 7}));
  const auto report = rate_under(stationary_distribution(P));
  o.check(report.win_probability == Rational(11, 21), "win = " + to_string(report.win_probability));
  o.check(report.rate == Rational(1, 21), "rate = " + to_string(report.rate));
  o.check(P.size() == 21, "matrix size");
  for (const auto& s : P.column_sums()) o.check(s == 1, "column sum " + to_string(s));
  for (const auto& s : P.row_sums()) o.check(s == 1, "row sum " + to_string(s));
  o.detail << "win " << to_string(report.win_probability) << ", rate " << to_string(report.rate)
           << ", 21 column sums exactly 1";
  return o;
}

Outcome criterion_3() {
  Outcome o;
  const std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs{
      {3, 7},   {3, 11},  {3, 19},  {3, 23},  {3, 31},  {7, 11},  {7, 19},  {7, 23},
      {7, 31},  {11, 19}, {11, 23}, {11, 31}, {19, 23}, {19, 31}, {23, 31}};
  const auto start = std::chrono::steady_clock::now();
  for (const auto& [m, n] : pairs) {
    const auto rm = single_game_rate(RotationGame(m)).rate;
    const auto rn = single_game_rate(RotationGame(n)).rate;
    const auto rc = combined_rate(CombinedRingGame::from_moduli({m, n})).rate;
    const std::string tag = "(" + std::to_string(m) + "," + std::to_string(n) + ")";
    o.check(rm < 0 && rn < 0, tag + " single rates not negative");
    o.check(rc == Rational(1, static_cast<long long>(m) * n), tag + " combined " + to_string(rc));
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.check(seconds < 10.0, "runtime " + std::to_string(seconds) + " s");
  o.detail << pairs.size() << " pairs, combined rate 1/mn each, " << std::fixed
           << std::setprecision(2) << seconds << " s";
  return o;
}

Outcome criterion_4() {
  Outcome o;
  const auto game = CombinedRingGame::from_moduli({3, 7});
  const double p = 11.0 / 21.0;
  const std::uint64_t steps = 1'000'000;
  const double se = std::sqrt(p * (1 - p) / steps);
  double worst = 0.0;
  for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
    const double z = std::abs(simulate_ring(game, steps, seed).win_frequency - p) / se;
    worst = std::max(worst, z);
    o.check(z < 4.0, "seed " + std::to_string(seed) + " |z| = " + std::to_string(z));
  }
  o.detail << "5 seeds x 1e6 steps, max |z| = " << std::setprecision(3) << worst;
  return o;
}

Outcome criterion_5() {
  Outcome o;
  for (int n = 2; n <= 10; ++n) {
    const std::uint64_t top = (std::uint64_t{1} << n) - 1;
    for (std::uint64_t alpha : {std::uint64_t{1}, top, std::uint64_t{1} << (n - 1)}) {
      for (std::uint64_t seed : {1, 2}) {
        const auto result = bv_run(n, {alpha}, NoiseMode::fixed_half, seed);
        const double closed = bv_exact_success(n, result.realization.unflipped().size());
        o.check(std::abs(result.success_probability - 0.25) <= 1e-12 &&
                    std::abs(result.success_probability - closed) <= 1e-12,
                "n=" + std::to_string(n) + " alpha=" + std::to_string(alpha));
        o.check(result.success_probability > 0.125, "not above 1/8");
      }
    }
  }
  for (int n : {3, 4}) {
    const auto candidates = flip_candidates(n, {1});
    const std::uint64_t subsets = std::uint64_t{1} << candidates.size();
    double total = 0.0;
    for (std::uint64_t mask = 0; mask < subsets; ++mask) {
      std::vector<BasisIndex> unflipped;
      for (std::size_t i = 0; i < candidates.size(); ++i)
        if (mask >> i & 1) unflipped.push_back(candidates[i]);
      total += bv_success(NoiseRealization(n, {1}, std::move(unflipped)));
    }
    const double mean = total / static_cast<double>(subsets);
    const double expected = 0.25 + std::ldexp(1.0, -(n + 1));
    o.check(std::abs(mean - expected) <= 1e-12, "independent mean n=" + std::to_string(n));
    o.detail << "n=" << n << " independent mean " << mean << "; ";
  }
  o.detail << "fixed-half = 0.25 for n=2..10 x 3 alphas";
  return o;
}

Outcome criterion_6() {
  Outcome o;
  for (int n = 2; n <= 10; ++n) {
    const BasisIndex alpha{(std::uint64_t{1} << n) - 1};
    const double expected = 4.0 / std::pow(4.0, n);
    for (auto y : flip_candidates(n, alpha)) {
      const double v = single_reflection_baseline(n, alpha, y);
      o.check(std::abs(v - expected) <= 1e-12,
              "n=" + std::to_string(n) + " y=" + std::to_string(y.value) + " baseline " + std::to_string(v));
    }
    o.check(expected < 0.25, "n=" + std::to_string(n) + ": baseline 4/4^n = " +
                                 std::to_string(expected) + " is not strictly below 1/4");
  }
  o.detail << "baseline = 4/4^n for every valid y, n=2..10";
  return o;
}

Outcome criterion_7() {
  Outcome o;
  std::mt19937_64 gen(7007);
  double worst = 0.0;
  for (int n = 2; n <= 10; ++n) {
    for (int t = 0; t < 20; ++t) {
      const auto v = random_unit_state(n, gen);
      const BasisIndex alpha{gen() % v.dimension()};
      worst = std::max(worst, max_diff(flip_sign_at(flip_sign_at(v, alpha), alpha), v));
      worst = std::max(worst, max_diff(diffusion(diffusion(v)), v));
    }
    worst = std::max(worst, max_diff(diffusion(uniform_state(n)), uniform_state(n)));
  }
  o.check(worst <= 1e-12, "identity deviation " + std::to_string(worst));

  double worst_word = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const int n = 2 + t % 3;
    const BasisIndex alpha{gen() % (std::uint64_t{1} << n)};
    const std::size_t length = gen() % 201;
    auto direct = uniform_state(n);
    ReducedWord word;
    for (std::size_t i = 0; i < length; ++i) {
      const Letter l = (gen() & 1) ? Letter::A : Letter::B;
      direct = apply_letter(std::move(direct), l, alpha);
      word = reduce_push(word, l);
    }
    worst_word = std::max(worst_word, max_diff(realize_word(word, n, alpha), direct));
  }
  o.check(worst_word <= 1e-12, "word reduction deviation " + std::to_string(worst_word));
  o.detail << "identities max dev " << worst << ", 1000 sequences max dev " << worst_word;
  return o;
}

Outcome criterion_8() {
  Outcome o;
  for (int n = 2; n <= 24; ++n) {
    const double p = success_after_k(n, best_k(n));
    o.check(p > 0.5, "best k at n=" + std::to_string(n) + ": " + std::to_string(p));
  }
  for (int n = 4; n <= 24; ++n) {
    const double p = success_after_k(n, paper_k(n));
    o.check(p > 0.5, "literal k at n=" + std::to_string(n) + ": " + std::to_string(p));
  }
  // sin^2(5 pi / 6) = 1/4 and sin^2(7 asin(1/sqrt 8)) = 169/512.
  const double p2 = success_after_k(2, paper_k(2));
  const double p3 = success_after_k(3, paper_k(3));
  o.check(paper_k(2) == 2 && std::abs(p2 - 0.25) <= 1e-6, "n=2 literal k success " + std::to_string(p2));
  o.check(paper_k(3) == 3 && std::abs(p3 - 169.0 / 512.0) <= 1e-6, "n=3 literal k success " + std::to_string(p3));
  o.detail << "best k wins n=2..24, literal k wins n=4..24; n=2 -> " << p2 << ", n=3 -> " << p3;
  return o;
}

Outcome criterion_9() {
  Outcome o;
  const std::uint64_t k = paper_k(4);
  o.check(k == 4, "paper_k(4) = " + std::to_string(k));
  const StoppingStrategy strategy(k);
  double sum = 0.0;
  const std::uint64_t plays = 10000;
  for (std::uint64_t s = 0; s < plays; ++s) {
    try {
      sum += static_cast<double>(play(4, {6}, strategy, derive_seed(4242, s)).stopping_index);
    } catch (const CapExceeded&) {
      o.check(false, "play " + std::to_string(s) + " hit the cap");
    }
  }
  const double mean = sum / static_cast<double>(plays);
  const double exact = static_cast<double>(hitting_time_oracle(2 * k));
  o.check(std::abs(mean - exact) <= 0.15 * exact, "mean " + std::to_string(mean));
  o.detail << "10^4 plays terminated, mean m(k) " << mean << " vs exact " << exact;
  return o;
}

Outcome criterion_10() {
  Outcome o;
  int code = -1;
  run_command("reproduce", code);
  o.check(code == 0, "reproduce exit code " + std::to_string(code));
  for (const std::string args :
       {"ring --moduli 3,7 --steps 100000 --seed 5", "ring --moduli 7,11 --format json",
        "bv -n 8 --alpha 77 --mode independent --trials 20 --seed 8 --shots 50",
        "bv -n 3 --mode independent --exhaustive --format csv",
        "grover -n 6 --strategy best --trials 500 --seed 21 --format json",
        "grover -n 4 --trials 50 --sweep --format csv --seed 2", "reproduce --format json"}) {
    int c1 = -1, c2 = -1;
    const auto a = run_command(args, c1);
    const auto b = run_command(args, c2);
    o.check(c1 == c2 && a == b && !a.empty(), "output differs for: " + args);
  }
  o.detail << "reproduce exit " << code << ", 7 commands byte-identical on rerun";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"1  classical single-game rates exact", criterion_1},
      {"2  combined 3x7 game exact, doubly stochastic", criterion_2},
      {"3  generalization sweep rate 1/mn", criterion_3},
      {"4  Monte Carlo within 4 standard errors", criterion_4},
      {"5  noisy BV success 1/4 > 1/8, independent mean", criterion_5},
      {"6  BV single-reflection baseline separation", criterion_6},
      {"7  Grover identities and word reduction", criterion_7},
      {"8  combined quantum game wins", criterion_8},
      {"9  almost-sure stopping and waiting time", criterion_9},
      {"10 reproducibility", criterion_10},
  };
  const auto start = std::chrono::steady_clock::now();
  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << name << " -- " << o.detail.str() << std::endl;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cout << "\n" << (criteria.size() - failures) << "/" << criteria.size() << " criteria passed in "
            << std::fixed << std::setprecision(1) << seconds << " s" << std::endl;
  return failures == 0 ? 0 : 1;
}
