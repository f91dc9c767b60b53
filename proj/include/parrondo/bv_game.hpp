#pragma once

// Bernstein-Vazirani guessing game with an unreliable phase oracle.
//
// The oracle should map |y> -> -|y> for every y with y . alpha = 1. A noise
// realization records the subset of those y it failed to flip; states with
// y . alpha = 0 pick up no phase either way, so they never appear in it.

#include <algorithm>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "parrondo/error.hpp"
#include "parrondo/ring_games.hpp"
#include "parrondo/rng.hpp"
#include "parrondo/statevec.hpp"

namespace parrondo {

enum class NoiseMode { noiseless, fixed_half, independent };

inline std::string_view to_string(NoiseMode mode) {
  switch (mode) {
    case NoiseMode::noiseless: return "noiseless";
    case NoiseMode::fixed_half: return "fixed-half";
    case NoiseMode::independent: return "independent";
  }
  return "?";
}

inline void require_bv_target(int qubits, BasisIndex alpha) {
  detail::require(qubits >= 1 && qubits <= kMaxQubits, "qubit count out of range");
  detail::require(alpha.value != 0, "alpha must be nonzero");
  detail::require(alpha.value < (std::uint64_t{1} << qubits),
                  "alpha " + std::to_string(alpha.value) + " out of range for " +
                      std::to_string(qubits) + " qubits");
}

/// All y in [0, 2^n) with y . alpha = 1, ascending. There are 2^(n-1).
inline std::vector<BasisIndex> flip_candidates(int qubits, BasisIndex alpha) {
  require_bv_target(qubits, alpha);
  std::vector<BasisIndex> out;
  out.reserve(std::size_t{1} << (qubits - 1));
  for (std::uint64_t y = 0; y < (std::uint64_t{1} << qubits); ++y)
    if (dot(y, alpha.value)) out.push_back({y});
  return out;
}

class NoiseRealization {
 public:
  NoiseRealization(int qubits, BasisIndex alpha, std::vector<BasisIndex> unflipped)
      : qubits_(qubits), alpha_(alpha), unflipped_(std::move(unflipped)) {
    require_bv_target(qubits, alpha);
    std::sort(unflipped_.begin(), unflipped_.end());
    detail::require(std::adjacent_find(unflipped_.begin(), unflipped_.end()) == unflipped_.end(),
                    "unflipped set has duplicates");
    for (auto y : unflipped_) {
      detail::require(y.value < (std::uint64_t{1} << qubits), "unflipped index out of range");
      detail::require(dot(y, alpha) == 1, "unflipped index " + std::to_string(y.value) +
                                              " has y . alpha = 0");
    }
  }

  int qubits() const noexcept { return qubits_; }
  BasisIndex alpha() const noexcept { return alpha_; }
  const std::vector<BasisIndex>& unflipped() const noexcept { return unflipped_; }

  bool is_unflipped(BasisIndex y) const {
    return std::binary_search(unflipped_.begin(), unflipped_.end(), y);
  }

 private:
  int qubits_;
  BasisIndex alpha_;
  std::vector<BasisIndex> unflipped_;
};

struct BvResult {
  double success_probability = 0.0;
  NoiseRealization realization;
};

/// Draws which candidates the oracle misses under `mode`.
inline NoiseRealization sample_realization(int qubits, BasisIndex alpha, NoiseMode mode, Rng& rng) {
  auto candidates = flip_candidates(qubits, alpha);
  std::vector<BasisIndex> unflipped;
  switch (mode) {
    case NoiseMode::noiseless:
      break;
    case NoiseMode::fixed_half: {
      // Partial Fisher-Yates: the first half of the shuffle is a uniform subset.
      const std::size_t keep = candidates.size() / 2;
      for (std::size_t i = 0; i < keep; ++i) {
        const auto j = i + static_cast<std::size_t>(rng.below(candidates.size() - i));
        std::swap(candidates[i], candidates[j]);
      }
      unflipped.assign(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(keep));
      break;
    }
    case NoiseMode::independent:
      for (auto y : candidates)
        if (rng.coin()) unflipped.push_back(y);
      break;
  }
  return NoiseRealization(qubits, alpha, std::move(unflipped));
}

inline StateVector noisy_oracle(StateVector state, const NoiseRealization& realization) {
  detail::require(state.qubits() == realization.qubits(),
                  "noise realization is for " + std::to_string(realization.qubits()) +
                      " qubits, state has " + std::to_string(state.qubits()));
  const auto alpha = realization.alpha();
  for (std::uint64_t y = 0; y < state.dimension(); ++y) {
    if (dot(y, alpha.value) && !realization.is_unflipped({y})) state.apply_flip_sign_at({y});
  }
  return state;
}

/// |<alpha| H Onoisy H |0...0>|^2 by state-vector simulation.
inline double bv_success(const NoiseRealization& realization) {
  const int n = realization.qubits();
  auto state = hadamard_all(basis_state(n, {0}));
  state = hadamard_all(noisy_oracle(std::move(state), realization));
  return probability_of(state, realization.alpha());
}

inline BvResult bv_run(int qubits, BasisIndex alpha, NoiseMode mode, std::uint64_t seed) {
  detail::require(qubits >= 2, "Bernstein-Vazirani game needs n >= 2");
  Rng rng(seed);
  auto realization = sample_realization(qubits, alpha, mode, rng);
  const double p = bv_success(realization);
  return BvResult{p, std::move(realization)};
}

/// (1 - s / 2^(n-1))^2 as an exact rational, s the unflipped count.
inline Rational bv_exact_success_rational(int qubits, std::uint64_t unflipped_count) {
  detail::require(qubits >= 1 && qubits <= kMaxQubits, "qubit count out of range");
  const std::uint64_t half = std::uint64_t{1} << (qubits - 1);
  detail::require(unflipped_count <= half, "unflipped count " + std::to_string(unflipped_count) +
                                               " exceeds 2^(n-1) = " + std::to_string(half));
  const Rational amp(static_cast<long long>(half - unflipped_count), static_cast<long long>(half));
  return amp * amp;
}

inline double bv_exact_success(int qubits, std::uint64_t unflipped_count) {
  return static_cast<double>(bv_exact_success_rational(qubits, unflipped_count));
}

/// Success when only the single state y is reflected: 4 / 4^n.
inline double single_reflection_baseline(int qubits, BasisIndex alpha, BasisIndex y) {
  require_bv_target(qubits, alpha);
  detail::require(y.value < (std::uint64_t{1} << qubits), "y out of range");
  detail::require(dot(y, alpha) == 1, "baseline reflection needs y . alpha = 1");
  auto state = hadamard_all(basis_state(qubits, {0}));
  state = hadamard_all(flip_sign_at(std::move(state), y));
  return probability_of(state, alpha);
}

inline Rational single_reflection_baseline_rational(int qubits) {
  detail::require(qubits >= 1 && qubits <= kMaxQubits, "qubit count out of range");
  return Rational(BigInt(1), BigInt(1) << (2 * (qubits - 1)));
}

}  // namespace parrondo
