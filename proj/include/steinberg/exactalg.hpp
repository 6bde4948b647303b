#pragma once

// Exact linear algebra over Z: Hermite and Smith normal forms, finitely
// generated abelian groups presented by relation matrices, and quotients.

#include <gmpxx.h>

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace steinberg {

using Int = mpz_class;

// Internal contract violation (non-cuspidal class, unexpected 2-torsion,
// non-integer shrinkage).  The CLI maps this to exit code 3.
class consistency_error : public std::runtime_error {
public:
  explicit consistency_error(const std::string& what) : std::runtime_error(what) {}
};

class IntMatrix {
public:
  IntMatrix() : rows_(0), cols_(0) {}
  IntMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), e_(rows * cols) {}

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Int& operator()(std::size_t i, std::size_t j) { return e_[i * cols_ + j]; }
  const Int& operator()(std::size_t i, std::size_t j) const { return e_[i * cols_ + j]; }

  bool operator==(const IntMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && e_ == o.e_;
  }
  bool operator!=(const IntMatrix& o) const { return !(*this == o); }

  bool is_zero() const {
    for (const auto& x : e_)
      if (x != 0) return false;
    return true;
  }

  IntMatrix transpose() const {
    IntMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  IntMatrix operator*(const IntMatrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("IntMatrix: size mismatch in product");
    IntMatrix p(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        const Int& a = (*this)(i, k);
        if (a == 0) continue;
        for (std::size_t j = 0; j < o.cols_; ++j) p(i, j) += a * o(k, j);
      }
    return p;
  }

  // Rows of `top` followed by rows of `bottom`.
  static IntMatrix vstack(const IntMatrix& top, const IntMatrix& bottom) {
    if (top.rows() == 0) return bottom;
    if (bottom.rows() == 0) return top;
    if (top.cols() != bottom.cols()) throw std::invalid_argument("vstack: column mismatch");
    IntMatrix s(top.rows() + bottom.rows(), top.cols());
    for (std::size_t i = 0; i < top.rows(); ++i)
      for (std::size_t j = 0; j < top.cols(); ++j) s(i, j) = top(i, j);
    for (std::size_t i = 0; i < bottom.rows(); ++i)
      for (std::size_t j = 0; j < bottom.cols(); ++j) s(top.rows() + i, j) = bottom(i, j);
    return s;
  }

  std::string str() const {
    std::string s = "[";
    for (std::size_t i = 0; i < rows_; ++i) {
      s += (i ? "; " : "");
      for (std::size_t j = 0; j < cols_; ++j) {
        if (j) s += ",";
        s += (*this)(i, j).get_str();
      }
    }
    return s + "]";
  }

private:
  std::size_t rows_, cols_;
  std::vector<Int> e_;
};

struct SmithDecomposition {
  IntMatrix U;  // left transform, unimodular
  IntMatrix S;  // diagonal, s_i | s_{i+1}, entries >= 0
  IntMatrix V;  // right transform, unimodular
};

// Isomorphism type of a finitely generated abelian group.
struct FgAbGroup {
  std::size_t free_rank = 0;
  std::vector<Int> invariant_factors;  // each > 1, each dividing the next

  bool operator==(const FgAbGroup& o) const {
    return free_rank == o.free_rank && invariant_factors == o.invariant_factors;
  }
  bool operator!=(const FgAbGroup& o) const { return !(*this == o); }

  bool is_trivial() const { return free_rank == 0 && invariant_factors.empty(); }
  bool is_finite() const { return free_rank == 0; }

  Int order() const {
    if (!is_finite()) throw std::invalid_argument("FgAbGroup::order: group is infinite");
    Int n = 1;
    for (const auto& f : invariant_factors) n *= f;
    return n;
  }

  // "C1" for trivial, "Z^r x C2 x C12" otherwise.
  std::string str() const {
    if (is_trivial()) return "C1";
    std::string s;
    if (free_rank > 0) s = "Z^" + std::to_string(free_rank);
    for (const auto& f : invariant_factors) {
      if (!s.empty()) s += " x ";
      s += "C" + f.get_str();
    }
    return s;
  }
};

namespace detail {

// q = round(a/b) to nearest, so that |a - q*b| <= |b|/2.
inline Int div_nearest(const Int& a, const Int& b) {
  Int q, r;
  mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  if (2 * r > abs(b)) q += 1;
  return q;
}

inline void swap_rows(IntMatrix& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(a, j), m(b, j));
}

inline void negate_row(IntMatrix& m, std::size_t i) {
  for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = -m(i, j);
}

// row_a -= q * row_b
inline void addmul_row(IntMatrix& m, std::size_t a, std::size_t b, const Int& q) {
  if (q == 0) return;
  for (std::size_t j = 0; j < m.cols(); ++j) m(a, j) -= q * m(b, j);
}

inline void swap_cols(IntMatrix& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t i = 0; i < m.rows(); ++i) std::swap(m(i, a), m(i, b));
}

inline void negate_col(IntMatrix& m, std::size_t j) {
  for (std::size_t i = 0; i < m.rows(); ++i) m(i, j) = -m(i, j);
}

// col_a -= q * col_b
inline void addmul_col(IntMatrix& m, std::size_t a, std::size_t b, const Int& q) {
  if (q == 0) return;
  for (std::size_t i = 0; i < m.rows(); ++i) m(i, a) -= q * m(i, b);
}

}  // namespace detail

// Row Hermite normal form: U*A = H with U unimodular, H in row-echelon form
// with positive pivots and entries above each pivot reduced into [0, pivot).
inline std::pair<IntMatrix, IntMatrix> hnf(const IntMatrix& A) {
  using namespace detail;
  IntMatrix H = A;
  IntMatrix U = IntMatrix::identity(A.rows());
  std::size_t r = 0;
  for (std::size_t c = 0; c < H.cols() && r < H.rows(); ++c) {
    // gcd the column below row r down to a single pivot, min-abs entry first
    for (;;) {
      std::size_t piv = H.rows();
      for (std::size_t i = r; i < H.rows(); ++i) {
        if (H(i, c) == 0) continue;
        if (piv == H.rows() || abs(H(i, c)) < abs(H(piv, c))) piv = i;
      }
      if (piv == H.rows()) break;  // all zero
      swap_rows(H, r, piv), swap_rows(U, r, piv);
      bool cleared = true;
      for (std::size_t i = r + 1; i < H.rows(); ++i) {
        if (H(i, c) == 0) continue;
        Int q = div_nearest(H(i, c), H(r, c));
        addmul_row(H, i, r, q), addmul_row(U, i, r, q);
        if (H(i, c) != 0) cleared = false;
      }
      if (cleared) break;
    }
    if (H(r, c) == 0) continue;
    if (H(r, c) < 0) negate_row(H, r), negate_row(U, r);
    for (std::size_t i = 0; i < r; ++i) {
      Int q;
      mpz_fdiv_q(q.get_mpz_t(), H(i, c).get_mpz_t(), H(r, c).get_mpz_t());
      addmul_row(H, i, r, q), addmul_row(U, i, r, q);
    }
    ++r;
  }
  return {H, U};
}

// Inverse of a unimodular matrix (the HNF of U is the identity).
inline IntMatrix unimodular_inverse(const IntMatrix& U) {
  auto [H, W] = hnf(U);
  if (H != IntMatrix::identity(U.rows()))
    throw std::invalid_argument("unimodular_inverse: matrix is not unimodular");
  return W;
}

// Basis of { x : A*x = 0 } as rows of the returned matrix, in row HNF.
// The kernel lattice is saturated, so this is a basis of ker(A) over Z.
inline IntMatrix kernel_basis(const IntMatrix& A) {
  auto [H, U] = hnf(A.transpose());
  std::size_t rank = 0;
  for (std::size_t i = 0; i < H.rows(); ++i) {
    bool zero = true;
    for (std::size_t j = 0; j < H.cols(); ++j)
      if (H(i, j) != 0) { zero = false; break; }
    if (!zero) ++rank;
  }
  // zero rows of H are at the bottom; the matching rows of U span the kernel
  IntMatrix K(A.cols() - rank, A.cols());
  for (std::size_t i = rank; i < U.rows(); ++i)
    for (std::size_t j = 0; j < U.cols(); ++j) K(i - rank, j) = U(i, j);
  return hnf(K).first;
}

// Smith normal form, min-abs pivot at every step to control entry growth.
inline SmithDecomposition snf(const IntMatrix& A) {
  using namespace detail;
  SmithDecomposition d;
  d.S = A;
  d.U = IntMatrix::identity(A.rows());
  d.V = IntMatrix::identity(A.cols());
  IntMatrix& S = d.S;
  const std::size_t n = std::min(A.rows(), A.cols());
  for (std::size_t s = 0; s < n; ++s) {
    for (;;) {
      // min-abs nonzero pivot in the trailing submatrix
      std::size_t pi = S.rows(), pj = 0;
      for (std::size_t i = s; i < S.rows(); ++i)
        for (std::size_t j = s; j < S.cols(); ++j) {
          if (S(i, j) == 0) continue;
          if (pi == S.rows() || abs(S(i, j)) < abs(S(pi, pj))) pi = i, pj = j;
        }
      if (pi == S.rows()) { s = n; break; }  // trailing block is zero
      swap_rows(S, s, pi), swap_rows(d.U, s, pi);
      swap_cols(S, s, pj), swap_cols(d.V, s, pj);
      bool again = false;
      for (std::size_t i = s + 1; i < S.rows(); ++i) {
        if (S(i, s) == 0) continue;
        Int q = div_nearest(S(i, s), S(s, s));
        addmul_row(S, i, s, q), addmul_row(d.U, i, s, q);
        if (S(i, s) != 0) again = true;
      }
      for (std::size_t j = s + 1; j < S.cols(); ++j) {
        if (S(s, j) == 0) continue;
        Int q = div_nearest(S(s, j), S(s, s));
        addmul_col(S, j, s, q), addmul_col(d.V, j, s, q);
        if (S(s, j) != 0) again = true;
      }
      if (again) continue;
      // divisibility sweep: pivot must divide every remaining entry
      bool fixed = true;
      for (std::size_t i = s + 1; i < S.rows() && fixed; ++i)
        for (std::size_t j = s + 1; j < S.cols() && fixed; ++j)
          if (S(i, j) % S(s, s) != 0) {
            Int minus1 = -1;
            addmul_row(S, s, i, minus1), addmul_row(d.U, s, i, minus1);  // row_s += row_i
            fixed = false;
          }
      if (fixed) break;
    }
    if (s >= n) break;
  }
  for (std::size_t s = 0; s < n; ++s)
    if (S(s, s) < 0) negate_row(S, s), negate_row(d.U, s);
  return d;
}

// Isomorphism type of Z^ambient_rank / (row span of relations).
inline FgAbGroup quotient_structure(std::size_t ambient_rank, const IntMatrix& relations) {
  if (relations.rows() != 0 && relations.cols() != ambient_rank)
    throw std::invalid_argument("quotient_structure: relations have wrong width");
  FgAbGroup g;
  if (relations.rows() == 0) {
    g.free_rank = ambient_rank;
    return g;
  }
  SmithDecomposition d = snf(relations);
  std::size_t rank = 0;
  const std::size_t n = std::min(d.S.rows(), d.S.cols());
  for (std::size_t i = 0; i < n; ++i)
    if (d.S(i, i) != 0) {
      ++rank;
      if (d.S(i, i) > 1) g.invariant_factors.push_back(d.S(i, i));
    }
  g.free_rank = ambient_rank - rank;
  return g;
}

// Quotient of (Z^n / relations) by the additional span of the given vectors.
inline FgAbGroup cokernel_of_span(std::size_t ambient_rank, const IntMatrix& relations,
                                  const std::vector<std::vector<Int>>& span) {
  IntMatrix extra(span.size(), ambient_rank);
  for (std::size_t i = 0; i < span.size(); ++i) {
    if (span[i].size() != ambient_rank)
      throw std::invalid_argument("cokernel_of_span: vector has wrong length");
    for (std::size_t j = 0; j < ambient_rank; ++j) extra(i, j) = span[i][j];
  }
  return quotient_structure(ambient_rank, IntMatrix::vstack(relations, extra));
}

// Determinant by fraction-free Gaussian elimination (Bareiss).
inline Int determinant(const IntMatrix& A) {
  if (A.rows() != A.cols()) throw std::invalid_argument("determinant: not square");
  const std::size_t n = A.rows();
  if (n == 0) return 1;
  IntMatrix m = A;
  Int prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && m(p, k) == 0) ++p;
      if (p == n) return 0;
      detail::swap_rows(m, k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        Int t = m(i, j) * m(k, k) - m(i, k) * m(k, j);
        mpz_divexact(m(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

// Incrementally maintained row HNF of a growing set of generators in Z^n.
// Used to detect when a span stops growing and to present its cokernel.
class HnfSpan {
public:
  explicit HnfSpan(std::size_t n) : n_(n) {}

  // Returns true if the row enlarged the span (a new pivot, or an existing
  // pivot shrinking to the gcd).
  bool insert(std::vector<Int> row) {
    if (row.size() != n_) throw std::invalid_argument("HnfSpan::insert: wrong length");
    bool grew = false;
    std::size_t c = 0;
    while (true) {
      while (c < n_ && row[c] == 0) ++c;
      if (c == n_) return grew;
      auto it = pivot_row_.find(c);
      if (it == pivot_row_.end()) {
        if (row[c] < 0)
          for (auto& x : row) x = -x;
        rows_.push_back(std::move(row));
        pivot_row_[c] = rows_.size() - 1;
        reduce_above(c);
        return true;
      }
      std::vector<Int>& piv = rows_[it->second];
      if (row[c] % piv[c] == 0) {
        Int q = row[c] / piv[c];
        for (std::size_t j = c; j < n_; ++j) row[j] -= q * piv[j];
      } else {
        // replace the pivot by the gcd combination; the span grows
        Int g, x, y;
        mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), piv[c].get_mpz_t(),
                   row[c].get_mpz_t());
        Int pc = piv[c] / g, rc = row[c] / g;
        for (std::size_t j = c; j < n_; ++j) {
          Int np = x * piv[j] + y * row[j];
          Int nr = pc * row[j] - rc * piv[j];
          piv[j] = np;
          row[j] = nr;
        }
        reduce_above(c);
        grew = true;
      }
    }
  }

  // True iff the span is all of Z^n.
  bool is_full() const {
    if (pivot_row_.size() != n_) return false;
    for (const auto& [c, r] : pivot_row_)
      if (rows_[r][c] != 1) return false;
    return true;
  }

  IntMatrix matrix() const {
    IntMatrix m(rows_.size(), n_);
    for (std::size_t i = 0; i < rows_.size(); ++i)
      for (std::size_t j = 0; j < n_; ++j) m(i, j) = rows_[i][j];
    return m;
  }

  std::size_t dim() const { return n_; }

private:
  void reduce_above(std::size_t c) {
    std::vector<Int>& piv = rows_[pivot_row_[c]];
    for (auto& r : rows_) {
      if (&r == &piv || r[c] == 0) continue;
      Int q;
      mpz_fdiv_q(q.get_mpz_t(), r[c].get_mpz_t(), piv[c].get_mpz_t());
      if (q == 0) continue;
      for (std::size_t j = 0; j < n_; ++j) r[j] -= q * piv[j];
    }
  }

  std::size_t n_;
  std::vector<std::vector<Int>> rows_;
  std::map<std::size_t, std::size_t> pivot_row_;
};

}  // namespace steinberg
