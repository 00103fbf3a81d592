#pragma once

#include <cstdlib>
#include <optional>

#include "fkt/matrix.hpp"

namespace fkt {

/// Smith normal form D = U * M * V with U, V unimodular and
/// D diagonal satisfying d1 | d2 | ... (nonnegative diagonal).
struct SmithForm {
  Mat U, D, V;
  Mat Uinv, Vinv;

  std::size_t diag_len() const { return std::min(D.rows(), D.cols()); }
  Int diag(std::size_t i) const {
    return i < diag_len() ? D(i, i) : Int(0);
  }
  /// Number of nonzero invariant factors (= rank over Q).
  std::size_t rank() const {
    std::size_t r = 0;
    while (r < diag_len() && D(r, r) != 0) ++r;
    return r;
  }
};

namespace detail {

inline void row_swap(Mat& A, std::size_t i, std::size_t j) {
  for (std::size_t c = 0; c < A.cols(); ++c) std::swap(A(i, c), A(j, c));
}
inline void col_swap(Mat& A, std::size_t i, std::size_t j) {
  for (std::size_t r = 0; r < A.rows(); ++r) std::swap(A(r, i), A(r, j));
}
// row i += k * row j
inline void row_add(Mat& A, std::size_t i, std::size_t j, const Int& k) {
  for (std::size_t c = 0; c < A.cols(); ++c) A(i, c) += k * A(j, c);
}
// col i += k * col j
inline void col_add(Mat& A, std::size_t i, std::size_t j, const Int& k) {
  for (std::size_t r = 0; r < A.rows(); ++r) A(r, i) += k * A(r, j);
}
inline void row_neg(Mat& A, std::size_t i) {
  for (std::size_t c = 0; c < A.cols(); ++c) A(i, c) = -A(i, c);
}
inline void col_neg(Mat& A, std::size_t i) {
  for (std::size_t r = 0; r < A.rows(); ++r) A(r, i) = -A(r, i);
}

}  // namespace detail

inline SmithForm smith_normal_form(const Mat& M) {
  using namespace detail;
  const std::size_t m = M.rows(), n = M.cols();
  SmithForm s{Mat::identity(m), M, Mat::identity(n),
              Mat::identity(m), Mat::identity(n)};
  Mat& D = s.D;

  auto do_row_swap = [&](std::size_t i, std::size_t j) {
    row_swap(D, i, j);
    row_swap(s.U, i, j);
    col_swap(s.Uinv, i, j);
  };
  auto do_col_swap = [&](std::size_t i, std::size_t j) {
    col_swap(D, i, j);
    col_swap(s.V, i, j);
    row_swap(s.Vinv, i, j);
  };
  auto do_row_add = [&](std::size_t i, std::size_t j, const Int& k) {
    row_add(D, i, j, k);
    row_add(s.U, i, j, k);
    col_add(s.Uinv, j, i, -k);
  };
  auto do_col_add = [&](std::size_t i, std::size_t j, const Int& k) {
    col_add(D, i, j, k);
    col_add(s.V, i, j, k);
    row_add(s.Vinv, j, i, -k);
  };
  auto do_row_neg = [&](std::size_t i) {
    row_neg(D, i);
    row_neg(s.U, i);
    col_neg(s.Uinv, i);
  };

  const std::size_t t_end = std::min(m, n);
  for (std::size_t t = 0; t < t_end; ++t) {
    // Pivot: entry of minimal nonzero absolute value in the trailing block.
    for (;;) {
      std::size_t pr = t, pc = t;
      bool found = false;
      Int best;
      for (std::size_t i = t; i < m; ++i)
        for (std::size_t j = t; j < n; ++j) {
          if (D(i, j) == 0) continue;
          Int a = abs(D(i, j));
          if (!found || a < best) {
            found = true;
            best = a;
            pr = i;
            pc = j;
          }
        }
      if (!found) goto done;  // trailing block is zero
      if (pr != t) do_row_swap(t, pr);
      if (pc != t) do_col_swap(t, pc);
      if (D(t, t) < 0) do_row_neg(t);

      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (D(i, t) == 0) continue;
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), D(i, t).get_mpz_t(), D(t, t).get_mpz_t());
        do_row_add(i, t, -q);
        if (D(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (D(t, j) == 0) continue;
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), D(t, j).get_mpz_t(), D(t, t).get_mpz_t());
        do_col_add(j, t, -q);
        if (D(t, j) != 0) clean = false;
      }
      if (!clean) continue;  // remainders became new, smaller pivot candidates

      // Divisibility: pivot must divide every entry of the trailing block.
      bool divides_all = true;
      for (std::size_t i = t + 1; i < m && divides_all; ++i)
        for (std::size_t j = t + 1; j < n && divides_all; ++j)
          if (D(i, j) % D(t, t) != 0) {
            do_row_add(t, i, 1);
            divides_all = false;
          }
      if (divides_all) break;
    }
  }
done:;
  return s;
}

/// Invariant factors of M (diagonal of its SNF, nonzero entries only,
/// entries equal to 1 included).
inline std::vector<Int> invariant_factors(const Mat& M) {
  SmithForm s = smith_normal_form(M);
  std::vector<Int> r;
  for (std::size_t i = 0; i < s.diag_len(); ++i)
    if (s.D(i, i) != 0) r.push_back(s.D(i, i));
  return r;
}

/// Integer solution x of M x = b, if one exists.
inline std::optional<std::vector<Int>> solve_integer(const Mat& M,
                                                     const std::vector<Int>& b) {
  if (b.size() != M.rows()) throw ShapeError("solve_integer shape mismatch");
  SmithForm s = smith_normal_form(M);
  std::vector<Int> c = s.U.apply(b);
  std::vector<Int> y(M.cols());
  for (std::size_t i = 0; i < M.rows(); ++i) {
    Int d = s.diag(i);
    if (d == 0) {
      if (c[i] != 0) return std::nullopt;
    } else {
      if (i >= M.cols()) return std::nullopt;  // unreachable: d==0 past diag
      if (c[i] % d != 0) return std::nullopt;
      y[i] = c[i] / d;
    }
  }
  return s.V.apply(y);
}

/// Basis of the integer kernel {x : M x = 0}, as matrix columns.
inline Mat kernel_basis(const Mat& M) {
  SmithForm s = smith_normal_form(M);
  std::size_t r = s.rank();
  Mat K(M.cols(), M.cols() - r);
  for (std::size_t j = r; j < M.cols(); ++j)
    K.set_col(j - r, s.V.col(j));
  return K;
}

}  // namespace fkt
