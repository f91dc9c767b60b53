#pragma once

// Grover stopping game. A random sequence of A = reflection about |alpha>
// and B = 2|psi><psi| - I is applied to the uniform state |psi>; the player
// watches the sequence and chooses when to stop and measure.
//
// Since A^2 = B^2 = I and B|psi> = |psi>, any sequence reduces to an
// alternating word ending in A, so the reduced word is determined by its
// length alone: (BA)^j for length 2j and A(BA)^j for length 2j + 1.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "parrondo/error.hpp"
#include "parrondo/rng.hpp"
#include "parrondo/statevec.hpp"

namespace parrondo {

enum class Letter : std::uint8_t { A, B };

inline char to_char(Letter l) noexcept { return l == Letter::A ? 'A' : 'B'; }

/// Hard limit on letters consumed by one play.
inline constexpr std::uint64_t kLetterCap = 10'000'000;

class ReducedWord {
 public:
  constexpr ReducedWord() = default;
  constexpr explicit ReducedWord(std::uint64_t length) : length_(length) {}

  constexpr std::uint64_t length() const noexcept { return length_; }
  constexpr bool empty() const noexcept { return length_ == 0; }
  constexpr Letter leftmost() const noexcept { return length_ % 2 ? Letter::A : Letter::B; }
  /// Number of complete BA pairs.
  constexpr std::uint64_t grover_iterations() const noexcept { return length_ / 2; }

  friend constexpr bool operator==(ReducedWord, ReducedWord) = default;

 private:
  std::uint64_t length_ = 0;
};

/// Prepends `letter` to the word (operators act left of what came before).
constexpr ReducedWord reduce_push(ReducedWord word, Letter letter) noexcept {
  const auto l = word.length();
  if (l == 0) return letter == Letter::A ? ReducedWord(1) : word;
  return ReducedWord(letter == word.leftmost() ? l - 1 : l + 1);
}

inline StateVector apply_letter(StateVector state, Letter letter, BasisIndex alpha) {
  if (letter == Letter::A) return flip_sign_at(std::move(state), alpha);
  return diffusion(std::move(state));
}

/// The reduced word applied to the uniform state on n qubits.
inline StateVector realize_word(ReducedWord word, int qubits, BasisIndex alpha) {
  detail::require(qubits >= 2, "Grover game needs n >= 2");
  auto state = uniform_state(qubits);
  state.check_index(alpha);
  for (std::uint64_t j = 0; j < word.grover_iterations(); ++j) {
    state.apply_flip_sign_at(alpha);
    state.apply_diffusion();
  }
  if (word.length() % 2) state.apply_flip_sign_at(alpha);
  return state;
}

/// sin^2((2k + 1) asin(2^(-n/2))), the success after k Grover iterations.
inline double success_after_k(int qubits, std::uint64_t k) {
  detail::require(qubits >= 2, "Grover game needs n >= 2");
  const long double theta = std::asin(std::pow(2.0L, -qubits / 2.0L));
  const long double s = std::sin((2.0L * static_cast<long double>(k) + 1.0L) * theta);
  return static_cast<double>(s * s);
}

/// ceil(pi * sqrt(2^n) / 4). Values within 1e-9 of an integer snap to it.
inline std::uint64_t paper_k(int qubits) {
  detail::require(qubits >= 2, "Grover game needs n >= 2");
  const long double x = std::numbers::pi_v<long double> * std::pow(2.0L, qubits / 2.0L) / 4.0L;
  const long double r = std::nearbyint(x);
  if (std::fabs(x - r) < 1e-9L) return static_cast<std::uint64_t>(r);
  return static_cast<std::uint64_t>(std::ceil(x));
}

/// The k maximizing success_after_k over [0, paper_k(n) + 2]; ties go to smaller k.
inline std::uint64_t best_k(int qubits) {
  const std::uint64_t last = paper_k(qubits) + 2;
  std::uint64_t best = 0;
  double best_p = success_after_k(qubits, 0);
  for (std::uint64_t k = 1; k <= last; ++k) {
    const double p = success_after_k(qubits, k);
    if (p > best_p) {
      best_p = p;
      best = k;
    }
  }
  return best;
}

/// Stop at the first letter after which the reduced word is (BA)^target_k.
class StoppingStrategy {
 public:
  explicit StoppingStrategy(std::uint64_t target_k) : target_k_(target_k) {
    detail::require(target_k >= 1, "stopping target k must be >= 1");
  }
  std::uint64_t target_k() const noexcept { return target_k_; }
  std::uint64_t target_length() const noexcept { return 2 * target_k_; }

 private:
  std::uint64_t target_k_;
};

struct PlayRecord {
  std::uint64_t stopping_index = 0;  // m(k), raw letters consumed
  double success_probability = 0.0;
  std::uint64_t sequence_seed = 0;
};

/// Letters drawn i.i.d. uniform from a seeded generator.
class LetterStream {
 public:
  explicit LetterStream(std::uint64_t seed) : rng_(seed) {}
  Letter operator()() { return rng_.coin() ? Letter::B : Letter::A; }

 private:
  Rng rng_;
};

/// m(k) for the letters produced by `next_letter`; throws CapExceeded past `cap`.
template <typename LetterSource>
std::uint64_t stopping_index(const StoppingStrategy& strategy, LetterSource&& next_letter,
                             std::uint64_t cap = kLetterCap) {
  ReducedWord word;
  const auto target = strategy.target_length();
  for (std::uint64_t consumed = 1; consumed <= cap; ++consumed) {
    word = reduce_push(word, next_letter());
    if (word.length() == target) return consumed;
  }
  throw CapExceeded("reduced word did not reach length " + std::to_string(target) + " within " +
                    std::to_string(cap) + " letters");
}

template <typename LetterSource>
PlayRecord play_sequence(int qubits, BasisIndex alpha, const StoppingStrategy& strategy,
                         LetterSource&& next_letter, std::uint64_t cap = kLetterCap) {
  detail::require(qubits >= 2, "Grover game needs n >= 2");
  PlayRecord record;
  record.stopping_index = stopping_index(strategy, next_letter, cap);
  const auto state = realize_word(ReducedWord(strategy.target_length()), qubits, alpha);
  record.success_probability = probability_of(state, alpha);
  return record;
}

inline PlayRecord play(int qubits, BasisIndex alpha, const StoppingStrategy& strategy,
                       std::uint64_t seed) {
  LetterStream letters(seed);
  auto record = play_sequence(qubits, alpha, strategy, letters);
  record.sequence_seed = seed;
  return record;
}

struct WaitingTimeStats {
  std::uint64_t trials = 0;
  std::uint64_t completed = 0;
  std::uint64_t cap_failures = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased; 0 when fewer than two completed
  std::uint64_t max = 0;
};

/// Trial t uses the letter seed derive_seed(seed, t).
inline WaitingTimeStats waiting_time_stats(std::uint64_t target_k, std::uint64_t trials,
                                           std::uint64_t seed, std::uint64_t cap = kLetterCap) {
  detail::require(trials >= 1, "waiting-time statistics need at least one trial");
  const StoppingStrategy strategy(target_k);
  WaitingTimeStats stats;
  stats.trials = trials;
  double mean = 0.0, m2 = 0.0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    LetterStream letters(derive_seed(seed, t));
    std::uint64_t m = 0;
    try {
      m = stopping_index(strategy, letters, cap);
    } catch (const CapExceeded&) {
      ++stats.cap_failures;
      continue;
    }
    ++stats.completed;
    const double x = static_cast<double>(m);
    const double delta = x - mean;
    mean += delta / static_cast<double>(stats.completed);
    m2 += delta * (x - mean);
    stats.max = std::max(stats.max, m);
  }
  stats.mean = mean;
  stats.variance = stats.completed > 1 ? m2 / static_cast<double>(stats.completed - 1) : 0.0;
  return stats;
}

}  // namespace parrondo
