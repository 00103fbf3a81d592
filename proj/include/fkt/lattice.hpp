#pragma once

#include "fkt/snf.hpp"

namespace fkt {

enum class CoeffRing { Z, Q };

/// v in the Z-column-span of M (or Q-span when ring == Q).
inline bool in_span(CoeffRing ring, const Mat& M, const std::vector<Int>& v) {
  if (ring == CoeffRing::Z) return solve_integer(M, v).has_value();
  bool zero = true;
  for (const auto& x : v) zero = zero && x == 0;
  if (zero) return true;
  Mat ext = M.hconcat(Mat(v.size(), 1, v));
  return smith_normal_form(ext).rank() == smith_normal_form(M).rank();
}

/// Generators of {x : M x in column-span of B}. Over Q the generators
/// span the rational preimage (denominators cleared).
inline Mat preimage_lattice(const Mat& M, const Mat& B) {
  Mat stacked = M.hconcat(B * Int(-1));
  Mat K = kernel_basis(stacked);
  return K.rows_slice(0, M.cols());
}

/// Column-span containment: span(A) subset of span(B), both taken
/// modulo nothing (caller appends ambient relations if needed).
inline bool span_contained(CoeffRing ring, const Mat& A, const Mat& B) {
  for (std::size_t j = 0; j < A.cols(); ++j)
    if (!in_span(ring, B, A.col(j))) return false;
  return true;
}

inline bool spans_equal(CoeffRing ring, const Mat& A, const Mat& B) {
  return span_contained(ring, A, B) && span_contained(ring, B, A);
}

}  // namespace fkt
