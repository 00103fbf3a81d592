#pragma once

#include <algorithm>
#include <vector>

#include "fkt/errors.hpp"
#include "fkt/matrix.hpp"

namespace fkt {

/// Explicit initial segment of a dense sequence in (0,1); values are
/// pairwise distinct and never 0 or 1.
struct DenseSequence {
  std::vector<Rat> values;

  DenseSequence() = default;
  explicit DenseSequence(std::vector<Rat> v) : values(std::move(v)) { check(); }

  void check() const {
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (values[i] <= 0 || values[i] >= 1)
        throw InputError("dense sequence value outside (0,1)");
      for (std::size_t j = 0; j < i; ++j)
        if (values[i] == values[j]) throw InputError("dense sequence value repeated");
    }
  }

  /// Dyadic midpoints 1/2, 1/4, 3/4, 1/8, 3/8, 5/8, 7/8, ...
  static DenseSequence dyadic(std::size_t count) {
    std::vector<Rat> v;
    for (unsigned long den = 2; v.size() < count; den *= 2)
      for (unsigned long num = 1; num < den && v.size() < count; num += 2)
        v.emplace_back(num, den);
    return DenseSequence(std::move(v));
  }

  bool operator==(const DenseSequence& o) const { return values == o.values; }
};

enum class IntervalType { CC, CO, OC, OO };

/// Consecutive segment [lo, hi] of the chain u0, c1, u1, ..., cn, un
/// (even indices are u-points, odd indices are c-points); equivalently
/// a non-empty connected locally closed subset of the level.
struct Run {
  std::size_t lo = 0, hi = 0;

  bool operator==(const Run& o) const = default;
  auto operator<=>(const Run& o) const = default;

  std::size_t length() const { return hi - lo + 1; }
  bool contains(std::size_t point) const { return lo <= point && point <= hi; }
};

inline bool point_is_cut(std::size_t i) { return i % 2 == 1; }

inline bool run_left_closed(const Run& r) {
  return point_is_cut(r.lo) || r.lo == 0;
}
inline bool run_right_closed(const Run& r, std::size_t n) {
  return point_is_cut(r.hi) || r.hi == 2 * n;
}
inline IntervalType run_type(const Run& r, std::size_t n) {
  bool l = run_left_closed(r), rr = run_right_closed(r, n);
  if (l && rr) return IntervalType::CC;
  if (l) return IntervalType::CO;
  if (rr) return IntervalType::OC;
  return IntervalType::OO;
}

/// Finite T0-approximation of [0,1] determined by the first n sequence
/// values: the accordion space with chain u0, c1, u1, ..., cn, un.
struct Level {
  std::size_t n = 0;
  std::vector<Rat> cuts;  // sorted e1 < ... < en

  std::size_t chain_size() const { return 2 * n + 1; }
  Run full_run() const { return {0, 2 * n}; }

  bool operator==(const Level& o) const = default;
};

inline Level build_level(const DenseSequence& seq, std::size_t n) {
  if (n > seq.values.size())
    throw InputError("level index exceeds dense sequence length");
  Level lv;
  lv.n = n;
  lv.cuts.assign(seq.values.begin(), seq.values.begin() + n);
  std::sort(lv.cuts.begin(), lv.cuts.end());
  return lv;
}

inline std::vector<Run> runs(const Level& lv) {
  std::vector<Run> r;
  std::size_t m = lv.chain_size();
  r.reserve(m * (m + 1) / 2);
  for (std::size_t lo = 0; lo < m; ++lo)
    for (std::size_t hi = lo; hi < m; ++hi) r.push_back({lo, hi});
  return r;
}

/// Index of a run in the enumeration produced by runs().
inline std::size_t run_index(const Level& lv, const Run& r) {
  std::size_t m = lv.chain_size();
  return r.lo * m - r.lo * (r.lo - 1) / 2 + (r.hi - r.lo);
}

/// U is relatively open in the run Y with connected complement Q;
/// LEFT means U is a prefix of Y, RIGHT a suffix.
enum class Side { LEFT, RIGHT };

struct AdmissiblePair {
  Run Y, U, Q;
  Side side = Side::LEFT;

  bool operator==(const AdmissiblePair& o) const = default;
};

/// All admissible pairs of Y: proper non-empty open prefixes/suffixes.
/// The inner boundary of U must be a u-point.
inline std::vector<AdmissiblePair> admissible_pairs(const Run& Y) {
  std::vector<AdmissiblePair> out;
  for (std::size_t m = Y.lo; m < Y.hi; ++m)
    if (!point_is_cut(m))  // prefix U ends in a u-point
      out.push_back({Y, {Y.lo, m}, {m + 1, Y.hi}, Side::LEFT});
  for (std::size_t m = Y.lo + 1; m <= Y.hi; ++m)
    if (!point_is_cut(m))  // suffix U starts in a u-point
      out.push_back({Y, {m, Y.hi}, {Y.lo, m - 1}, Side::RIGHT});
  return out;
}

/// Open iff every c-point of the run has both of its u-neighbours in
/// the run.
inline bool is_open_run(const Run& Y) {
  for (std::size_t i = Y.lo; i <= Y.hi; ++i)
    if (point_is_cut(i) && (i == Y.lo || i == Y.hi)) return false;
  return true;
}

/// Monotone surjection of chains induced by refining a level; the new
/// cut and its two flanking half-intervals collapse onto the u-point
/// they subdivide.
struct Refinement {
  std::size_t from_n = 0, to_n = 0;
  std::vector<std::size_t> point_map;  // chain(from) -> chain(to)
};

inline Refinement refinement(const DenseSequence& seq, const Level& fine,
                             const Level& coarse) {
  if (fine.n != coarse.n + 1)
    throw InputError("refinement levels must be consecutive");
  if (build_level(seq, fine.n) != fine || build_level(seq, coarse.n) != coarse)
    throw InputError("levels not built from the given dense sequence");
  const Rat& v = seq.values[coarse.n];  // the cut added at the finer level
  std::size_t below = 0;
  while (below < coarse.cuts.size() && coarse.cuts[below] < v) ++below;
  std::size_t split = 2 * below;  // index of the subdivided u-point
  Refinement ref{fine.n, coarse.n, {}};
  ref.point_map.resize(fine.chain_size());
  for (std::size_t i = 0; i < fine.chain_size(); ++i) {
    if (i < split)
      ref.point_map[i] = i;
    else if (i <= split + 2)
      ref.point_map[i] = split;
    else
      ref.point_map[i] = i - 2;
  }
  return ref;
}

/// Composite of chain maps (f after g is refinement fine->mid->coarse).
inline Refinement compose(const Refinement& coarse_step, const Refinement& fine_step) {
  if (fine_step.to_n != coarse_step.from_n)
    throw InputError("refinements not composable");
  Refinement r{fine_step.from_n, coarse_step.to_n, {}};
  r.point_map.resize(fine_step.point_map.size());
  for (std::size_t i = 0; i < r.point_map.size(); ++i)
    r.point_map[i] = coarse_step.point_map[fine_step.point_map[i]];
  return r;
}

inline Run preimage_run(const Refinement& ref, const Run& Y) {
  std::size_t lo = ref.point_map.size(), hi = 0;
  for (std::size_t i = 0; i < ref.point_map.size(); ++i)
    if (Y.contains(ref.point_map[i])) {
      lo = std::min(lo, i);
      hi = std::max(hi, i);
    }
  return {lo, hi};
}

/// Intersection of two runs of the same level, if non-empty.
inline bool run_intersect(const Run& a, const Run& b, Run& out) {
  std::size_t lo = std::max(a.lo, b.lo), hi = std::min(a.hi, b.hi);
  if (lo > hi) return false;
  out = {lo, hi};
  return true;
}

}  // namespace fkt
