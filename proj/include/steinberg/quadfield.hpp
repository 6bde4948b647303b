#pragma once

// Arithmetic in real quadratic fields E = Q(sqrt(Delta)): ring of integers
// in the {1, omega} basis, fundamental unit via continued fractions, norms,
// traces, powers, and reduction modulo N.

#include "steinberg/exactalg.hpp"

#include <cmath>
#include <cstdint>
#include <tuple>
#include <utility>

namespace steinberg {

struct QuadraticField {
  std::int64_t delta = 0;   // squarefree, >= 2
  bool omega_is_half = false;  // omega = (1+sqrt(delta))/2 when delta = 1 mod 4

  // omega satisfies x^2 - omega_trace*x + omega_norm = 0
  std::int64_t omega_trace() const { return omega_is_half ? 1 : 0; }
  std::int64_t omega_norm() const {
    return omega_is_half ? (1 - delta) / 4 : -delta;
  }

  bool operator==(const QuadraticField& o) const { return delta == o.delta; }
};

inline bool is_squarefree(std::int64_t n) {
  if (n < 1) return false;
  for (std::int64_t p = 2; p * p <= n; ++p)
    if (n % (p * p) == 0) return false;
  return true;
}

inline QuadraticField make_field(std::int64_t delta) {
  if (delta < 2) throw std::invalid_argument("make_field: delta must be >= 2");
  std::int64_t s = static_cast<std::int64_t>(std::sqrt(static_cast<double>(delta)));
  while (s * s > delta) --s;
  while ((s + 1) * (s + 1) <= delta) ++s;
  if (s * s == delta) throw std::invalid_argument("make_field: delta is a perfect square");
  if (!is_squarefree(delta)) throw std::invalid_argument("make_field: delta is not squarefree");
  return QuadraticField{delta, delta % 4 == 1};
}

// a + b*omega with exact integer coordinates.
struct QuadElement {
  Int a, b;
  QuadraticField field;

  QuadElement conj() const {
    // conj(omega) = tr(omega) - omega
    return {a + b * field.omega_trace(), -b, field};
  }
  Int trace() const { return 2 * a + b * field.omega_trace(); }
  Int norm() const {
    return a * a + a * b * field.omega_trace() + b * b * field.omega_norm();
  }

  QuadElement operator*(const QuadElement& o) const {
    // (a + b w)(c + d w) with w^2 = tr(w) w - N(w)
    return {a * o.a - b * o.b * field.omega_norm(),
            a * o.b + b * o.a + b * o.b * field.omega_trace(), field};
  }
  QuadElement operator+(const QuadElement& o) const { return {a + o.a, b + o.b, field}; }
  QuadElement operator-() const { return {-a, -b, field}; }
  bool operator==(const QuadElement& o) const { return a == o.a && b == o.b; }

  QuadElement pow(std::uint64_t k) const {
    QuadElement r{1, 0, field}, base = *this;
    while (k) {
      if (k & 1) r = r * base;
      base = base * base;
      k >>= 1;
    }
    return r;
  }

  // e + f*sqrt(delta) with a common denominator of 1 or 2, for reporting.
  // Returns (e_num, f_num, den).
  std::tuple<Int, Int, Int> sqrt_coords() const {
    if (field.omega_is_half) return {2 * a + b, b, 2};
    return {a, b, 1};
  }
};

struct QuadUnit {
  QuadElement value;
  int norm = 1;  // +1 or -1
};

// Fundamental unit via the continued fraction of omega.  Candidates are
// p_k - q_k * conj(omega) over the convergents p_k/q_k; the first convergent
// with |N| = 1 gives the smallest unit > 1 of O_E.
inline QuadUnit fundamental_unit(const QuadraticField& F) {
  const std::int64_t D = F.delta;
  Int sq = sqrt(Int(D));  // floor
  // omega = (P0 + sqrt(D)) / Q0
  Int P = F.omega_is_half ? 1 : 0;
  Int Q = F.omega_is_half ? 2 : 1;
  // convergent seeds: p_{-1}/q_{-1} = 1/0, p_{-2}/q_{-2} = 0/1
  Int pm1 = 1, pm2 = 0, qm1 = 0, qm2 = 1;
  const Int tw = F.omega_trace(), nw = F.omega_norm();
  for (int iter = 0; iter < 100000; ++iter) {
    Int a;
    mpz_fdiv_q(a.get_mpz_t(), Int(P + sq).get_mpz_t(), Q.get_mpz_t());
    Int p = a * pm1 + pm2, q = a * qm1 + qm2;
    // N(p - q*omega) = p^2 - p q tr(w) + q^2 N(w)
    Int nu = p * p - p * q * tw + q * q * nw;
    if (nu == 1 || nu == -1) {
      // unit = p - q*conj(omega) = (p - q tr(w)) + q*omega
      QuadElement u{p - q * tw, q, F};
      return QuadUnit{u, nu == 1 ? 1 : -1};
    }
    pm2 = pm1, pm1 = p, qm2 = qm1, qm1 = q;
    P = a * Q - P;
    Q = (D - P * P) / Q;
  }
  throw std::runtime_error("fundamental_unit: continued fraction did not terminate");
}

// (t, n) with t = eps^k + conj(eps)^k and n = N(eps)^k, exactly.
inline std::pair<Int, int> unit_power_trace_norm(const QuadUnit& eps, std::uint64_t k) {
  QuadElement p = eps.value.pow(k);
  int n = (k % 2 == 0) ? 1 : eps.norm;
  return {p.trace(), n};
}

// Coordinates of x in O_E / N*O_E with respect to {1, omega}.
inline std::pair<std::int64_t, std::int64_t> reduce_unit_mod(const QuadElement& x,
                                                             std::int64_t N) {
  if (N < 1) throw std::invalid_argument("reduce_unit_mod: N must be >= 1");
  Int a = x.a % N, b = x.b % N;
  if (a < 0) a += N;
  if (b < 0) b += N;
  return {a.get_si(), b.get_si()};
}

// Residue arithmetic in (Z/N)[x]/(minimal polynomial of omega).
struct QuadResidue {
  std::int64_t a = 0, b = 0;
  bool operator==(const QuadResidue& o) const { return a == o.a && b == o.b; }
};

class QuadResidueRing {
public:
  QuadResidueRing(const QuadraticField& F, std::int64_t N)
      : N_(N), tw_(mod(F.omega_trace())), nw_(mod(F.omega_norm())) {}

  QuadResidue reduce(const QuadElement& x) const {
    auto [a, b] = reduce_unit_mod(x, N_);
    return {a, b};
  }
  QuadResidue one() const { return {mod(1), 0}; }

  QuadResidue mul(const QuadResidue& x, const QuadResidue& y) const {
    std::int64_t bd = mulm(x.b, y.b);
    return {mod(mulm(x.a, y.a) - mulm(bd, nw_)),
            mod(mulm(x.a, y.b) + mulm(x.b, y.a) + mulm(bd, tw_))};
  }
  std::int64_t trace(const QuadResidue& x) const { return mod(2 * x.a + x.b * tw_); }

private:
  std::int64_t mod(std::int64_t v) const { return ((v % N_) + N_) % N_; }
  std::int64_t mulm(std::int64_t x, std::int64_t y) const { return mod(x * y); }
  std::int64_t N_, tw_, nw_;
};

}  // namespace steinberg
