#pragma once

// Real-amplitude state vectors over n qubits. Every operator the games use
// (Hadamard layer, phase oracles, reflections, diffusion) is real orthogonal,
// so amplitudes are stored as doubles.

#include <bit>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "parrondo/error.hpp"

namespace parrondo {

inline constexpr int kMaxQubits = 24;

/// A computational-basis label x in [0, 2^n).
struct BasisIndex {
  std::uint64_t value = 0;

  friend bool operator==(BasisIndex, BasisIndex) = default;
  friend auto operator<=>(BasisIndex, BasisIndex) = default;
};

/// Bitwise inner product x . y mod 2.
constexpr int dot(std::uint64_t x, std::uint64_t y) noexcept { return std::popcount(x & y) & 1; }
constexpr int dot(BasisIndex x, BasisIndex y) noexcept { return dot(x.value, y.value); }

class StateVector {
 public:
  static StateVector uniform(int qubits) {
    check_qubits(qubits);
    const std::size_t dim = std::size_t{1} << qubits;
    return StateVector(qubits, std::vector<double>(dim, 1.0 / std::sqrt(static_cast<double>(dim))));
  }

  static StateVector basis(int qubits, BasisIndex x) {
    check_qubits(qubits);
    std::vector<double> amps(std::size_t{1} << qubits, 0.0);
    detail::require(x.value < amps.size(), "basis index " + std::to_string(x.value) +
                                               " out of range for " + std::to_string(qubits) +
                                               " qubits");
    amps[x.value] = 1.0;
    return StateVector(qubits, std::move(amps));
  }

  /// Length must be a power of two and the norm 1 within 1e-12.
  static StateVector from_amplitudes(std::vector<double> amps) {
    detail::require(amps.size() >= 2 && std::has_single_bit(amps.size()),
                    "amplitude count must be a power of two >= 2");
    const int qubits = std::countr_zero(amps.size());
    check_qubits(qubits);
    StateVector s(qubits, std::move(amps));
    detail::require(std::abs(s.norm_squared() - 1.0) <= 1e-12, "state vector is not normalized");
    return s;
  }

  int qubits() const noexcept { return qubits_; }
  std::size_t dimension() const noexcept { return amps_.size(); }
  std::span<const double> amplitudes() const noexcept { return amps_; }
  double operator[](std::size_t x) const { return amps_.at(x); }

  double norm_squared() const noexcept {
    double s = 0.0;
    for (double a : amps_) s += a * a;
    return s;
  }

  void check_index(BasisIndex x) const {
    detail::require(x.value < amps_.size(), "basis index " + std::to_string(x.value) +
                                                " out of range for " + std::to_string(qubits_) +
                                                " qubits");
  }

  // In-place kernels; the free functions below wrap them with value semantics.

  void apply_hadamard_all() noexcept {
    const double s = 1.0 / std::sqrt(2.0);
    const std::size_t dim = amps_.size();
    for (std::size_t half = 1; half < dim; half <<= 1) {
      for (std::size_t block = 0; block < dim; block += 2 * half) {
        for (std::size_t i = block; i < block + half; ++i) {
          const double a = amps_[i];
          const double b = amps_[i + half];
          amps_[i] = (a + b) * s;
          amps_[i + half] = (a - b) * s;
        }
      }
    }
  }

  void apply_phase_oracle(BasisIndex alpha) {
    check_index(alpha);
    for (std::size_t x = 0; x < amps_.size(); ++x)
      if (dot(x, alpha.value)) amps_[x] = -amps_[x];
  }

  void apply_flip_sign_at(BasisIndex y) {
    check_index(y);
    amps_[y.value] = -amps_[y.value];
  }

  /// v -> 2|psi><psi|v - v with |psi> uniform, i.e. a_x -> 2*mean - a_x.
  void apply_diffusion() noexcept {
    double sum = 0.0;
    for (double a : amps_) sum += a;
    const double twice_mean = 2.0 * sum / static_cast<double>(amps_.size());
    for (double& a : amps_) a = twice_mean - a;
  }

 private:
  StateVector(int qubits, std::vector<double> amps) : qubits_(qubits), amps_(std::move(amps)) {}

  static void check_qubits(int qubits) {
    detail::require(qubits >= 1 && qubits <= kMaxQubits,
                    "qubit count must be in [1, " + std::to_string(kMaxQubits) + "], got " +
                        std::to_string(qubits));
  }

  int qubits_;
  std::vector<double> amps_;
};

inline StateVector uniform_state(int qubits) { return StateVector::uniform(qubits); }

inline StateVector basis_state(int qubits, BasisIndex x) { return StateVector::basis(qubits, x); }

inline StateVector hadamard_all(StateVector state) {
  state.apply_hadamard_all();
  return state;
}

/// |x> -> (-1)^(x . alpha) |x>.
inline StateVector phase_oracle(StateVector state, BasisIndex alpha) {
  state.apply_phase_oracle(alpha);
  return state;
}

inline StateVector flip_sign_at(StateVector state, BasisIndex y) {
  state.apply_flip_sign_at(y);
  return state;
}

inline StateVector diffusion(StateVector state) {
  state.apply_diffusion();
  return state;
}

inline double probability_of(const StateVector& state, BasisIndex x) {
  state.check_index(x);
  const double a = state[x.value];
  return a * a;
}

}  // namespace parrondo
