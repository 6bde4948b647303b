#pragma once

// Enumeration of unital matrices in Gamma: for each power eps^k of the
// fundamental unit, the matrices gamma = [[A, B], [cN, t-A]] with
// characteristic polynomial x^2 - t x + n, built from roots A of that
// polynomial modulo cN.

#include "steinberg/modsym.hpp"
#include "steinberg/quadfield.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace steinberg {

// a + n a^{-1} = t (mod M), i.e. a is a root of x^2 - t x + n modulo M.
inline bool root_test(std::int64_t a, const Int& t, int n, std::int64_t M) {
  if (M < 1) throw std::invalid_argument("root_test: modulus must be >= 1");
  std::int64_t am = ((a % M) + M) % M;
  if (std::gcd(am, M) != 1) throw std::invalid_argument("root_test: a is not invertible mod M");
  if (M == 1) return true;
  std::int64_t inv = 1, t0 = 0, nt = 1, r = M, nr = am;
  while (nr != 0) {
    std::int64_t q = r / nr;
    std::swap(t0 -= q * nt, nt);
    std::swap(r -= q * nr, nr);
  }
  inv = t0 < 0 ? t0 + M : t0;
  std::int64_t tm = static_cast<std::int64_t>(mpz_fdiv_ui(t.get_mpz_t(), M));
  return ((am + n * inv - tm) % M + M) % M == 0;
}

struct UnitalCandidate {
  IMat22 gamma;     // [[A, B], [c*N, t - A]]
  std::int64_t k = 0;   // unit-power exponent
  Int t;            // trace = eps^k + conj(eps)^k
  int n = 1;        // determinant = N(eps)^k
  std::int64_t c = 1;   // lower-left entry is c*N
  std::int64_t A = 0;   // upper-left entry, in [0, c*N)
  std::int64_t delta = 0;
};

// Lift every root A of x^2 - t x + n modulo cN to the unital matrix
// [[A, (A(t-A) - n)/(cN)], [cN, t - A]], in ascending order of A.
inline std::vector<UnitalCandidate> unital_candidates_for(const Int& t, int n, std::int64_t N,
                                                          std::int64_t c) {
  const std::int64_t M = c * N;
  const std::int64_t tm = static_cast<std::int64_t>(mpz_fdiv_ui(t.get_mpz_t(), M));
  const std::int64_t nm = ((n % M) + M) % M;
  std::vector<UnitalCandidate> out;
  for (std::int64_t A = 0; A < M; ++A) {
    if ((A * (((tm - A) % M + M) % M)) % M != nm) continue;
    UnitalCandidate cand;
    cand.t = t, cand.n = n, cand.c = c, cand.A = A;
    Int B = (Int(A) * (t - A) - n) / M;
    cand.gamma = IMat22{{{Int(A), B}, {Int(M), t - A}}};
    if (cand.gamma[0][1] == 0 && cand.gamma[1][0] == 0) continue;  // +-I
    out.push_back(std::move(cand));
  }
  return out;
}

// Deterministic stream: outer loop on the unit power k, inner loops on the
// multiplier c and the residue A in ascending order.
class UnitalEnumerator {
public:
  UnitalEnumerator(const QuadraticField& F, std::int64_t N, GammaFlavor flavor,
                   std::int64_t k_max, std::int64_t c_max)
      : F_(F), N_(N), flavor_(flavor), k_max_(k_max), c_max_(c_max),
        eps_(fundamental_unit(F)), power_(eps_.value) {
    if (k_max < 1 || c_max < 1)
      throw std::invalid_argument("UnitalEnumerator: k_max and c_max must be >= 1");
  }

  std::optional<UnitalCandidate> next() {
    for (;;) {
      if (pos_ < pending_.size()) return pending_[pos_++];
      if (!advance()) return std::nullopt;
    }
  }

private:
  // fill pending_ with the candidates of the next (k, c) block
  bool advance() {
    pending_.clear();
    pos_ = 0;
    for (;;) {
      if (k_ > k_max_) return false;
      ++c_;
      if (c_ > c_max_) {
        c_ = 0;
        ++k_;
        if (k_ > k_max_) return false;
        power_ = power_ * eps_.value;  // eps^k
        continue;
      }
      Int t = power_.trace();
      int n = (k_ % 2 == 0) ? 1 : eps_.norm;
      if (flavor_ == GammaFlavor::Gamma0 && n != 1) continue;
      pending_ = unital_candidates_for(t, n, N_, c_);
      for (auto& cand : pending_) cand.k = k_, cand.delta = F_.delta;
      if (!pending_.empty()) return true;
    }
  }

  QuadraticField F_;
  std::int64_t N_;
  GammaFlavor flavor_;
  std::int64_t k_max_, c_max_;
  QuadUnit eps_;
  QuadElement power_;  // eps^k for the current k
  std::int64_t k_ = 1, c_ = 0;
  std::vector<UnitalCandidate> pending_;
  std::size_t pos_ = 0;
};

// beta integral implies psi(gamma_beta) = 0 for Gamma_0(N)^pm; the criterion
// is A = D (mod cN), i.e. 2A = t (mod cN).
inline bool integral_beta_criterion(const UnitalCandidate& cand) {
  const unsigned long M = cand.gamma[1][0].get_ui();  // c*N
  Int diff = cand.gamma[0][0] - cand.gamma[1][1];
  return mpz_fdiv_ui(diff.get_mpz_t(), M) == 0;
}

// (p + f*sqrt(delta)) / r with r > 0.
struct Surd {
  Int p, f;
  std::int64_t delta = 0;
  Int r;

  std::string str() const {
    return "(" + p.get_str() + "+" + f.get_str() + "*sqrt(" + std::to_string(delta) + "))/" +
           r.get_str();
  }
};

namespace detail {

// decompose m > 0 as f^2 * d with d squarefree (trial division; test-sized)
inline std::pair<Int, Int> square_part(Int m) {
  Int f = 1;
  for (Int p = 2; p * p <= m; ++p) {
    while (m % (p * p) == 0) {
      m /= p * p;
      f *= p;
    }
  }
  return {f, m};
}

}  // namespace detail

// The fixed point beta with gamma(beta : 1) = (beta : 1), as a quadratic surd.
// Signals scalar input and rational or complex fixed points.
inline Surd fixed_point_beta(const IMat22& gamma) {
  const Int &A = gamma[0][0], &B = gamma[0][1], &C = gamma[1][0], &D = gamma[1][1];
  if (B == 0 && C == 0) throw std::invalid_argument("fixed_point_beta: scalar matrix");
  if (C == 0) throw std::invalid_argument("fixed_point_beta: rational fixed point (infinity)");
  Int disc = (A + D) * (A + D) - 4 * idet(gamma);
  if (disc < 0) throw std::invalid_argument("fixed_point_beta: complex fixed points");
  Int s = sqrt(disc);
  if (s * s == disc) throw std::invalid_argument("fixed_point_beta: rational fixed points");
  auto [f, d] = detail::square_part(disc);
  Surd beta{A - D, f, d.get_si(), 2 * C};
  if (beta.r < 0) beta.p = -beta.p, beta.f = -beta.f, beta.r = -beta.r;
  return beta;
}

inline Surd fixed_point_beta(const UnitalCandidate& cand) {
  // disc = t^2 - 4n = (y (omega - omega'))^2 with eps^k = x + y*omega, so the
  // square part is known without factoring
  QuadraticField F = make_field(cand.delta);
  QuadElement pw = fundamental_unit(F).value.pow(static_cast<std::uint64_t>(cand.k));
  Int y = abs(pw.b) * (F.omega_is_half ? 1 : 2);
  Int disc = cand.t * cand.t - 4 * cand.n;
  if (disc != y * y * cand.delta)
    throw consistency_error("fixed_point_beta: discriminant mismatch");
  if (disc <= 0 || cand.gamma[1][0] == 0)
    throw std::invalid_argument("fixed_point_beta: degenerate candidate");
  Surd beta{cand.gamma[0][0] - cand.gamma[1][1], y, cand.delta, 2 * cand.gamma[1][0]};
  return beta;
}

// Exact check that gamma fixes beta: C beta^2 + (D - A) beta - B = 0.
inline bool fixes_beta(const IMat22& gamma, const Surd& beta) {
  const Int &A = gamma[0][0], &B = gamma[0][1], &C = gamma[1][0], &D = gamma[1][1];
  // beta = (p + f sqrt(d))/r; multiply the quadratic by r^2
  Int rat = C * (beta.p * beta.p + beta.f * beta.f * beta.delta) +
            (D - A) * beta.p * beta.r - B * beta.r * beta.r;
  Int irr = 2 * C * beta.p * beta.f + (D - A) * beta.f * beta.r;
  return rat == 0 && irr == 0;
}

}  // namespace steinberg
