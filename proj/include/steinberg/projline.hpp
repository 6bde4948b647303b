#pragma once

// P^1(Z/N): canonical representatives, enumeration, and the right action of
// GL_2(Z), modelling the coset space Gamma_0(N) \ GL_2(Z).

#include <array>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace steinberg {

struct P1Point {
  std::int64_t c = 0, d = 0;
  std::size_t index = 0;
};

using Mat22 = std::array<std::array<std::int64_t, 2>, 2>;

inline std::int64_t det(const Mat22& g) { return g[0][0] * g[1][1] - g[0][1] * g[1][0]; }

inline Mat22 mat_mul(const Mat22& a, const Mat22& b) {
  return {{{a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]},
           {a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]}}};
}

class P1List {
public:
  explicit P1List(std::int64_t N) : N_(N) {
    if (N < 1) throw std::invalid_argument("P1List: N must be >= 1");
    if (N == 1) {
      points_.push_back({0, 0, 0});
      lookup_[0] = 0;
      return;
    }
    // every class has a unique lexicographically least representative whose
    // first coordinate is gcd(c, N); enumerate those
    std::vector<std::pair<std::int64_t, std::int64_t>> reps;
    for (std::int64_t g = 1; g <= N; ++g) {
      if (N % g != 0) continue;
      std::int64_t c = g % N;
      for (std::int64_t d = 0; d < N; ++d) {
        if (std::gcd(std::gcd(c, d), N) != 1) continue;
        auto [cc, dd] = canonical(c, d);
        if (cc == c && dd == d) reps.emplace_back(c, d);
      }
    }
    std::sort(reps.begin(), reps.end());
    points_.reserve(reps.size());
    for (std::size_t i = 0; i < reps.size(); ++i) {
      points_.push_back({reps[i].first, reps[i].second, i});
      lookup_[reps[i].first * N + reps[i].second] = i;
    }
  }

  std::int64_t level() const { return N_; }
  std::size_t size() const { return points_.size(); }
  const P1Point& operator[](std::size_t i) const { return points_[i]; }
  const std::vector<P1Point>& points() const { return points_; }

  // Canonical representative of (c:d); requires gcd(c, d, N) = 1.
  P1Point normalize(std::int64_t c, std::int64_t d) const {
    if (N_ == 1) return points_[0];
    c = mod(c), d = mod(d);
    if (std::gcd(std::gcd(c, d), N_) != 1)
      throw std::invalid_argument("p1_normalize: gcd(c, d, N) != 1");
    auto [cc, dd] = canonical(c, d);
    return points_[lookup_.at(cc * N_ + dd)];
  }

  P1Point act(const P1Point& p, const Mat22& g) const {
    std::int64_t d = det(g);
    if (d != 1 && d != -1) throw std::invalid_argument("p1_act: matrix must have det +-1");
    return normalize(p.c * g[0][0] + p.d * g[1][0], p.c * g[0][1] + p.d * g[1][1]);
  }

private:
  std::int64_t mod(std::int64_t v) const { return ((v % N_) + N_) % N_; }

  // egcd-based scaling of (c, d) to the lexicographically least pair.
  std::pair<std::int64_t, std::int64_t> canonical(std::int64_t c, std::int64_t d) const {
    const std::int64_t N = N_;
    std::int64_t g = std::gcd(c, N);  // gcd(0, N) = N; canonical c is g mod N
    std::int64_t step = N / g;
    // unit u with u*c = g (mod N): invert c/g modulo N/g, then lift to a unit
    std::int64_t u = 1;
    if (c != 0) {
      std::int64_t c1 = (c / g) % step;
      u = inv_mod(c1, step);
      while (std::gcd(u, N) != 1) u += step;
    }
    std::int64_t d1 = mod(u * d);
    // remaining scalings fixing c: units congruent to 1 mod N/g
    std::int64_t best = d1;
    for (std::int64_t t = 1; t < g; ++t) {
      std::int64_t u2 = 1 + t * step;
      if (std::gcd(u2, N) != 1) continue;
      best = std::min(best, mod(u2 * d1));
    }
    return {g % N, best};
  }

  static std::int64_t inv_mod(std::int64_t a, std::int64_t m) {
    if (m == 1) return 0;
    std::int64_t t = 0, nt = 1, r = m, nr = ((a % m) + m) % m;
    while (nr != 0) {
      std::int64_t q = r / nr;
      std::swap(t -= q * nt, nt);
      std::swap(r -= q * nr, nr);
    }
    return t < 0 ? t + m : t;
  }

  std::int64_t N_;
  std::vector<P1Point> points_;
  std::unordered_map<std::int64_t, std::size_t> lookup_;
};

// |P^1(Z/N)| = N * prod_{p | N} (1 + 1/p)
inline std::int64_t p1_size_formula(std::int64_t N) {
  std::int64_t size = N, M = N;
  for (std::int64_t p = 2; p * p <= M; ++p) {
    if (M % p != 0) continue;
    size += size / p;
    while (M % p == 0) M /= p;
  }
  if (M > 1) size += size / M;
  return N == 1 ? 1 : size;
}

}  // namespace steinberg
