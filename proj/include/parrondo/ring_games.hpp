#pragma once

// Rotating-wheel games on Z_M: a vector on a wheel is rotated by a uniformly
// chosen multiple of 2*pi/m each round, and the player wins a round when the
// vector lands in the upper half of the circle.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "parrondo/error.hpp"
#include "parrondo/rng.hpp"

namespace parrondo {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline std::string to_string(const Rational& r) {
  std::ostringstream out;
  out << numerator(r);
  if (denominator(r) != 1) out << '/' << denominator(r);
  return out.str();
}

/// A single wheel game with `modulus` equally likely rotations 2*pi*a/m.
class RotationGame {
 public:
  explicit RotationGame(std::uint32_t modulus) : modulus_(modulus) {
    detail::require(modulus >= 3, "rotation game modulus must be >= 3, got " +
                                      std::to_string(modulus));
    detail::require(modulus % 2 == 1,
                    "rotation game modulus must be odd, got " + std::to_string(modulus));
  }

  std::uint32_t modulus() const noexcept { return modulus_; }

  friend bool operator==(const RotationGame&, const RotationGame&) = default;

 private:
  std::uint32_t modulus_;
};

/// Uniform random mixture of rotation games with pairwise coprime moduli.
///
/// Positions live in Z_M with M the product of the moduli; a rotation by
/// 2*pi*a/m_i is the step (M/m_i)*a.
class CombinedRingGame {
 public:
  static constexpr std::uint64_t kMaxModulusProduct = std::uint64_t{1} << 31;

  explicit CombinedRingGame(std::vector<RotationGame> games) : games_(std::move(games)) {
    detail::require(!games_.empty(), "combined ring game needs at least one game");
    modulus_product_ = 1;
    for (std::size_t i = 0; i < games_.size(); ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        const auto a = games_[i].modulus();
        const auto b = games_[j].modulus();
        detail::require(std::gcd(a, b) == 1, "moduli must be pairwise coprime: gcd(" +
                                                 std::to_string(b) + ", " + std::to_string(a) +
                                                 ") = " + std::to_string(std::gcd(a, b)));
      }
      modulus_product_ *= games_[i].modulus();
      detail::require(modulus_product_ <= kMaxModulusProduct,
                      "product of moduli exceeds " + std::to_string(kMaxModulusProduct));
    }
  }

  static CombinedRingGame from_moduli(const std::vector<std::uint32_t>& moduli) {
    std::vector<RotationGame> games;
    games.reserve(moduli.size());
    for (auto m : moduli) games.emplace_back(m);
    return CombinedRingGame(std::move(games));
  }

  const std::vector<RotationGame>& games() const noexcept { return games_; }
  std::size_t game_count() const noexcept { return games_.size(); }
  std::uint64_t modulus_product() const noexcept { return modulus_product_; }

  /// Position increment for one unit rotation of game `i`.
  std::uint64_t unit_step(std::size_t i) const { return modulus_product_ / games_.at(i).modulus(); }

 private:
  std::vector<RotationGame> games_;
  std::uint64_t modulus_product_ = 1;
};

/// Wheel angle 2*pi*index/modulus.
class RingPosition {
 public:
  RingPosition(std::uint64_t index, std::uint64_t modulus) : index_(index), modulus_(modulus) {
    detail::require(modulus >= 1 && index < modulus, "ring position out of range");
  }

  std::uint64_t index() const noexcept { return index_; }
  std::uint64_t modulus() const noexcept { return modulus_; }

  RingPosition advanced(std::uint64_t step) const {
    return RingPosition((index_ + step % modulus_) % modulus_, modulus_);
  }

  /// cos(2*pi*j/M) > 0, decided with integers: 4j < M or 4j > 3M.
  bool is_winning() const noexcept {
    return 4 * index_ < modulus_ || 4 * index_ > 3 * modulus_;
  }

 private:
  std::uint64_t index_;
  std::uint64_t modulus_;
};

inline void require_odd_modulus(std::uint64_t m) {
  detail::require(m >= 3 && m % 2 == 1,
                  "wheel size must be odd and >= 3, got " + std::to_string(m));
}

/// Indices j in Z_M whose angle lies in the upper half of the circle.
inline std::vector<std::uint64_t> winning_positions(std::uint64_t modulus) {
  require_odd_modulus(modulus);
  std::vector<std::uint64_t> result;
  for (std::uint64_t j = 0; j < modulus; ++j) {
    if (RingPosition(j, modulus).is_winning()) result.push_back(j);
  }
  return result;
}

/// Sparse row-stochastic matrix with exact rational entries.
class TransitionMatrix {
 public:
  struct Entry {
    std::uint64_t column;
    Rational probability;
  };

  /// Rows must hold strictly positive entries with sorted, unique columns.
  TransitionMatrix(std::uint64_t size, std::vector<std::vector<Entry>> rows)
      : size_(size), rows_(std::move(rows)) {
    detail::require(rows_.size() == size_, "transition matrix row count mismatch");
    for (std::uint64_t i = 0; i < size_; ++i) {
      Rational sum = 0;
      for (std::size_t k = 0; k < rows_[i].size(); ++k) {
        const auto& e = rows_[i][k];
        detail::require(e.column < size_, "transition matrix column out of range");
        detail::require(e.probability > 0, "transition matrix entries must be positive");
        detail::require(k == 0 || rows_[i][k - 1].column < e.column,
                        "transition matrix row columns must be sorted and unique");
        sum += e.probability;
      }
      detail::require(sum == 1, "transition matrix row " + std::to_string(i) +
                                    " sums to " + to_string(sum) + ", not 1");
    }
  }

  std::uint64_t size() const noexcept { return size_; }
  const std::vector<Entry>& row(std::uint64_t i) const { return rows_.at(i); }

  Rational at(std::uint64_t i, std::uint64_t j) const {
    const auto& r = rows_.at(i);
    auto it = std::lower_bound(r.begin(), r.end(), j,
                               [](const Entry& e, std::uint64_t c) { return e.column < c; });
    return (it != r.end() && it->column == j) ? it->probability : Rational(0);
  }

  std::vector<Rational> row_sums() const {
    std::vector<Rational> sums(size_);
    for (std::uint64_t i = 0; i < size_; ++i)
      for (const auto& e : rows_[i]) sums[i] += e.probability;
    return sums;
  }

  std::vector<Rational> column_sums() const {
    std::vector<Rational> sums(size_);
    for (const auto& r : rows_)
      for (const auto& e : r) sums[e.column] += e.probability;
    return sums;
  }

  bool is_doubly_stochastic() const {
    const auto sums = column_sums();
    return std::all_of(sums.begin(), sums.end(), [](const Rational& s) { return s == 1; });
  }

 private:
  std::uint64_t size_;
  std::vector<std::vector<Entry>> rows_;
};

/// Exact probability distribution over Z_M.
class Distribution {
 public:
  explicit Distribution(std::vector<Rational> weights) : weights_(std::move(weights)) {
    detail::require(!weights_.empty(), "distribution must be non-empty");
    Rational sum = 0;
    for (const auto& w : weights_) {
      detail::require(w >= 0, "distribution weights must be non-negative");
      sum += w;
    }
    detail::require(sum == 1, "distribution weights sum to " + to_string(sum) + ", not 1");
  }

  std::size_t size() const noexcept { return weights_.size(); }
  const Rational& operator[](std::size_t j) const { return weights_.at(j); }
  const std::vector<Rational>& weights() const noexcept { return weights_; }

  bool is_uniform() const {
    const Rational expected(1, static_cast<long long>(weights_.size()));
    return std::all_of(weights_.begin(), weights_.end(),
                       [&](const Rational& w) { return w == expected; });
  }

 private:
  std::vector<Rational> weights_;
};

/// Payoff +1 per winning round and -1 per losing round.
struct RateReport {
  Rational win_probability;
  Rational rate;  // 2 * win_probability - 1
  std::uint64_t winning_count = 0;
  std::uint64_t positions = 0;
};

struct EmpiricalRate {
  std::uint64_t steps = 0;
  std::uint64_t wins = 0;
  double win_frequency = 0.0;
  double rate = 0.0;
};

inline TransitionMatrix transition_matrix(const CombinedRingGame& combined) {
  const std::uint64_t M = combined.modulus_product();
  const auto G = static_cast<long long>(combined.game_count());
  std::vector<std::vector<TransitionMatrix::Entry>> rows(M);
  for (std::uint64_t j = 0; j < M; ++j) {
    std::vector<std::pair<std::uint64_t, Rational>> cells;
    for (std::size_t i = 0; i < combined.game_count(); ++i) {
      const auto m = combined.games()[i].modulus();
      const Rational p(1, G * static_cast<long long>(m));
      const std::uint64_t step = combined.unit_step(i);
      for (std::uint64_t a = 0; a < m; ++a) cells.emplace_back((j + step * a) % M, p);
    }
    std::sort(cells.begin(), cells.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    auto& row = rows[j];
    for (auto& [col, p] : cells) {
      if (!row.empty() && row.back().column == col) {
        row.back().probability += p;
      } else {
        row.push_back({col, std::move(p)});
      }
    }
  }
  return TransitionMatrix(M, std::move(rows));
}

namespace detail {

/// True when the chain has exactly one closed communicating class, which is
/// equivalent to the stationary distribution being unique.
inline bool has_unique_closed_class(const TransitionMatrix& matrix) {
  const std::uint64_t n = matrix.size();
  std::vector<std::vector<std::uint64_t>> reverse(n);
  for (std::uint64_t i = 0; i < n; ++i)
    for (const auto& e : matrix.row(i)) reverse[e.column].push_back(i);

  // Iterative DFS over the reversed graph; the vertex finishing last lies in
  // a source component of the reverse graph, i.e. a closed class of the chain.
  std::vector<bool> seen(n, false);
  std::uint64_t last_finished = 0;
  for (std::uint64_t root = 0; root < n; ++root) {
    if (seen[root]) continue;
    std::vector<std::pair<std::uint64_t, std::size_t>> stack{{root, 0}};
    seen[root] = true;
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      if (next < reverse[v].size()) {
        const auto w = reverse[v][next++];
        if (!seen[w]) {
          seen[w] = true;
          stack.emplace_back(w, 0);
        }
      } else {
        last_finished = v;
        stack.pop_back();
      }
    }
  }

  // Unique iff that state is reachable from every state.
  std::vector<bool> reaches(n, false);
  std::vector<std::uint64_t> frontier{last_finished};
  reaches[last_finished] = true;
  std::uint64_t count = 1;
  while (!frontier.empty()) {
    const auto v = frontier.back();
    frontier.pop_back();
    for (const auto w : reverse[v]) {
      if (!reaches[w]) {
        reaches[w] = true;
        ++count;
        frontier.push_back(w);
      }
    }
  }
  return count == n;
}

class PrimeField {
 public:
  explicit PrimeField(std::uint64_t p) : p_(p) {}

  std::uint64_t modulus() const noexcept { return p_; }

  std::uint64_t add(std::uint64_t a, std::uint64_t b) const noexcept {
    const std::uint64_t s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const noexcept {
    return a >= b ? a - b : a + p_ - b;
  }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const noexcept {
    const auto x = static_cast<unsigned __int128>(a) * b;
    if (p_ == kMersenne61) {
      std::uint64_t r = static_cast<std::uint64_t>(x & kMersenne61) +
                        static_cast<std::uint64_t>(x >> 61);
      return r >= p_ ? r - p_ : r;
    }
    return static_cast<std::uint64_t>(x % p_);
  }
  std::uint64_t pow(std::uint64_t a, std::uint64_t e) const noexcept {
    std::uint64_t r = 1;
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }
  std::uint64_t inv(std::uint64_t a) const noexcept { return pow(a, p_ - 2); }

  std::uint64_t from_rational(const Rational& r) const {
    auto reduce = [&](BigInt v) {
      v %= p_;
      if (v < 0) v += p_;
      return static_cast<std::uint64_t>(v);
    };
    return mul(reduce(numerator(r)), inv(reduce(denominator(r))));
  }

  /// Smallest-height rational congruent to `a`, with |num|, den <= sqrt(p/2).
  bool reconstruct(std::uint64_t a, Rational& out) const {
    using I = __int128;
    const auto bound = static_cast<I>(std::sqrt(static_cast<long double>(p_) / 2));
    I r0 = p_, r1 = a, t0 = 0, t1 = 1;
    while (r1 > bound) {
      const I q = r0 / r1;
      std::tie(r0, r1) = std::pair<I, I>{r1, r0 - q * r1};
      std::tie(t0, t1) = std::pair<I, I>{t1, t0 - q * t1};
    }
    if (t1 == 0 || t1 > bound || -t1 > bound) return false;
    if (t1 < 0) {
      t1 = -t1;
      r1 = -r1;
    }
    out = Rational(static_cast<long long>(r1), static_cast<long long>(t1));
    return std::gcd(static_cast<long long>(r1 < 0 ? -r1 : r1), static_cast<long long>(t1)) == 1;
  }

  static constexpr std::uint64_t kMersenne61 = (std::uint64_t{1} << 61) - 1;

 private:
  std::uint64_t p_;
};

/// Solves pi (P - I) = 0, sum(pi) = 1 over GF(p). Empty result if singular.
inline std::vector<std::uint64_t> solve_stationary_mod(const TransitionMatrix& matrix,
                                                       const PrimeField& f) {
  const std::size_t n = matrix.size();
  // Row i of the system is column i of P^T - I; the last row is replaced by
  // the normalization sum(pi) = 1.
  std::vector<std::uint64_t> a(n * n, 0);
  std::vector<std::uint64_t> rhs(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& e : matrix.row(i)) a[e.column * n + i] = f.from_rational(e.probability);
  }
  for (std::size_t i = 0; i < n; ++i) a[i * n + i] = f.sub(a[i * n + i], 1);
  std::fill(a.begin() + static_cast<std::ptrdiff_t>((n - 1) * n), a.end(), 1);
  rhs[n - 1] = 1;

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot * n + col] == 0) ++pivot;
    if (pivot == n) return {};
    if (pivot != col) {
      std::swap_ranges(a.begin() + static_cast<std::ptrdiff_t>(pivot * n),
                       a.begin() + static_cast<std::ptrdiff_t>(pivot * n + n),
                       a.begin() + static_cast<std::ptrdiff_t>(col * n));
      std::swap(rhs[pivot], rhs[col]);
    }
    const std::uint64_t inv = f.inv(a[col * n + col]);
    for (std::size_t c = col; c < n; ++c) a[col * n + c] = f.mul(a[col * n + c], inv);
    rhs[col] = f.mul(rhs[col], inv);
    for (std::size_t r = col + 1; r < n; ++r) {
      const std::uint64_t factor = a[r * n + col];
      if (factor == 0) continue;
      for (std::size_t c = col; c < n; ++c)
        a[r * n + c] = f.sub(a[r * n + c], f.mul(factor, a[col * n + c]));
      rhs[r] = f.sub(rhs[r], f.mul(factor, rhs[col]));
    }
  }
  std::vector<std::uint64_t> x(n);
  for (std::size_t i = n; i-- > 0;) {
    std::uint64_t v = rhs[i];
    for (std::size_t c = i + 1; c < n; ++c) v = f.sub(v, f.mul(a[i * n + c], x[c]));
    x[i] = v;
  }
  return x;
}

/// Floating-point stationary estimate from the lazy chain (P + I) / 2.
inline std::vector<double> stationary_estimate(const TransitionMatrix& matrix) {
  const std::size_t n = matrix.size();
  std::vector<std::vector<std::pair<std::uint64_t, double>>> rows(n);
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& e : matrix.row(i))
      rows[i].emplace_back(e.column, static_cast<double>(e.probability));
  std::vector<double> pi(n, 1.0 / static_cast<double>(n)), next(n);
  for (int iter = 0; iter < 100000; ++iter) {
    for (std::size_t j = 0; j < n; ++j) next[j] = 0.5 * pi[j];
    for (std::size_t i = 0; i < n; ++i)
      for (const auto& [j, p] : rows[i]) next[j] += 0.5 * pi[i] * p;
    double change = 0.0;
    for (std::size_t j = 0; j < n; ++j) change += std::abs(next[j] - pi[j]);
    pi.swap(next);
    if (change < 1e-17) break;
  }
  return pi;
}

/// Best rational approximation with denominator <= max_den (continued fractions).
inline Rational approximate(double x, long long max_den) {
  long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double v = x;
  for (int i = 0; i < 64; ++i) {
    const double fl = std::floor(v);
    if (fl > 9e15) break;
    const auto a = static_cast<long long>(fl);
    const long long q2 = a * q1 + q0;
    if (q2 > max_den) break;
    const long long p2 = a * p1 + p0;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    const double frac = v - fl;
    if (frac < 1e-15) break;
    v = 1.0 / frac;
  }
  return q1 == 0 ? Rational(0) : Rational(p1, q1);
}

/// Exact check of pi >= 0, sum(pi) = 1 and pi P = pi.
inline bool is_stationary(const TransitionMatrix& matrix, const std::vector<Rational>& pi) {
  if (pi.size() != matrix.size()) return false;
  Rational total = 0;
  for (const auto& w : pi) {
    if (w < 0) return false;
    total += w;
  }
  if (total != 1) return false;
  std::vector<Rational> image(pi.size());
  for (std::size_t i = 0; i < pi.size(); ++i) {
    if (pi[i] == 0) continue;
    for (const auto& e : matrix.row(i)) image[e.column] += pi[i] * e.probability;
  }
  return image == pi;
}

}  // namespace detail

/// Largest chain solved by dense elimination; bigger chains use a certified
/// floating-point candidate (see stationary_distribution).
inline constexpr std::uint64_t kDenseSolveLimit = 1024;

/// Unique stationary distribution of a row-stochastic chain, in exact rationals.
///
/// Uniqueness is decided combinatorially (exactly one closed class). The
/// candidate comes from Gaussian elimination over GF(p) with rational
/// reconstruction, or for chains above kDenseSolveLimit from power iteration
/// rounded to small-denominator rationals. Either way the returned weights
/// are verified exactly against pi P = pi before being returned.
inline Distribution stationary_distribution(const TransitionMatrix& matrix) {
  if (!detail::has_unique_closed_class(matrix)) {
    throw SolverError("chain has more than one closed class; stationary distribution is not unique");
  }
  const std::size_t n = matrix.size();
  if (n == 1) return Distribution({Rational(1)});

  std::vector<Rational> candidate(n);
  if (n <= kDenseSolveLimit) {
    for (std::uint64_t p : {detail::PrimeField::kMersenne61, std::uint64_t{4611686018427387847ULL},
                            std::uint64_t{4611686018427387817ULL}}) {
      const detail::PrimeField field(p);
      const auto x = detail::solve_stationary_mod(matrix, field);
      if (x.empty()) continue;
      bool ok = true;
      for (std::size_t j = 0; j < n && ok; ++j) ok = field.reconstruct(x[j], candidate[j]);
      if (ok && detail::is_stationary(matrix, candidate)) return Distribution(std::move(candidate));
    }
  } else {
    const auto estimate = detail::stationary_estimate(matrix);
    const long long max_den = 1'000'000;
    for (std::size_t j = 0; j < n; ++j) candidate[j] = detail::approximate(estimate[j], max_den);
    if (detail::is_stationary(matrix, candidate)) return Distribution(std::move(candidate));
  }
  throw SolverError("stationary distribution could not be certified exactly for a " +
                    std::to_string(n) + "-state chain");
}

inline RateReport rate_under(const Distribution& dist) {
  const std::uint64_t M = dist.size();
  RateReport report;
  report.positions = M;
  for (std::uint64_t j = 0; j < M; ++j) {
    if (RingPosition(j, M).is_winning()) {
      report.win_probability += dist[j];
      ++report.winning_count;
    }
  }
  report.rate = 2 * report.win_probability - 1;
  return report;
}

inline RateReport combined_rate(const CombinedRingGame& combined) {
  return rate_under(stationary_distribution(transition_matrix(combined)));
}

/// Rate of one game played alone; its chain is the uniform walk on Z_m.
inline RateReport single_game_rate(const RotationGame& game) {
  return combined_rate(CombinedRingGame({game}));
}

/// One round: game `game_index` rotates by `rotation` units from `from`.
inline RingPosition ring_step(const CombinedRingGame& combined, const RingPosition& from,
                              std::size_t game_index, std::uint64_t rotation) {
  detail::require(game_index < combined.game_count(), "game index out of range");
  detail::require(rotation < combined.games()[game_index].modulus(), "rotation out of range");
  return from.advanced(combined.unit_step(game_index) * rotation);
}

/// Monte Carlo play of the combined game from position 0.
inline EmpiricalRate simulate_ring(const CombinedRingGame& combined, std::uint64_t steps,
                                   std::uint64_t seed) {
  detail::require(steps >= 1, "simulation needs at least one step");
  Rng rng(seed);
  RingPosition pos(0, combined.modulus_product());
  EmpiricalRate out;
  out.steps = steps;
  for (std::uint64_t t = 0; t < steps; ++t) {
    const auto g = static_cast<std::size_t>(rng.below(combined.game_count()));
    const auto a = rng.below(combined.games()[g].modulus());
    pos = ring_step(combined, pos, g, a);
    if (pos.is_winning()) ++out.wins;
  }
  out.win_frequency = static_cast<double>(out.wins) / static_cast<double>(steps);
  out.rate = 2.0 * out.win_frequency - 1.0;
  return out;
}

}  // namespace parrondo
