#pragma once

#include <algorithm>

#include "fkt/errors.hpp"
#include "fkt/lattice.hpp"

namespace fkt {

/// Finitely generated abelian group in canonical form: Z^rank + sum of
/// Z/d_i with d1 | d2 | ... and every d_i >= 2. Over Q the same data
/// reads as a vector space of dimension `rank` (torsion always empty).
/// Generators are ordered torsion-first, then free.
struct Group {
  CoeffRing ring = CoeffRing::Z;
  std::size_t rank = 0;
  std::vector<Int> torsion;

  Group() = default;
  Group(CoeffRing ring, std::size_t rank, std::vector<Int> torsion = {})
      : ring(ring), rank(rank), torsion(std::move(torsion)) {
    check();
  }

  void check() const {
    if (ring == CoeffRing::Q && !torsion.empty())
      throw InputError("rational group carries torsion");
    for (std::size_t i = 0; i < torsion.size(); ++i) {
      if (torsion[i] < 2) throw InputError("torsion entry < 2");
      if (i && torsion[i] % torsion[i - 1] != 0)
        throw InputError("torsion entries violate divisibility chain");
    }
  }

  std::size_t gens() const { return torsion.size() + rank; }
  /// Order of the i-th canonical generator; 0 means infinite.
  Int order_of(std::size_t i) const {
    return i < torsion.size() ? torsion[i] : Int(0);
  }

  /// Relation lattice in generator coordinates: diag(torsion) columns.
  Mat relation_matrix() const {
    Mat r(gens(), torsion.size());
    for (std::size_t i = 0; i < torsion.size(); ++i) r(i, i) = torsion[i];
    return r;
  }

  bool is_trivial() const { return rank == 0 && torsion.empty(); }
  bool is_free() const {
    return is_trivial() || (ring == CoeffRing::Z && torsion.empty());
  }
  // A nonzero finitely generated Z-group is never divisible.
  bool is_divisible() const { return ring == CoeffRing::Q || is_trivial(); }

  bool finite() const { return rank == 0; }
  /// Order of a finite group; meaningless for infinite ones.
  Int order() const {
    Int o = 1;
    for (const auto& d : torsion) o *= d;
    return o;
  }

  bool operator==(const Group& o) const = default;
};

inline bool iso_class_equal(const Group& a, const Group& b) { return a == b; }

struct Canonicalized {
  Group group;
  Mat to_can;    // gens(group) x ambient-gens
  Mat from_can;  // ambient-gens x gens(group)
};

/// Canonical form of the cokernel of `rel` (gens x r), with the change
/// of coordinates witnessing the isomorphism.
inline Canonicalized canonicalize_presentation(CoeffRing ring, std::size_t gens,
                                               const Mat& rel) {
  if (!rel.empty() && rel.rows() != gens)
    throw ShapeError("presentation relation matrix row mismatch");
  SmithForm s = smith_normal_form(rel.empty() ? Mat(gens, 0) : rel);
  std::vector<std::size_t> tor_idx, free_idx;
  std::vector<Int> torsion;
  for (std::size_t i = 0; i < gens; ++i) {
    Int d = s.diag(i);
    if (d == 0) {
      free_idx.push_back(i);
    } else if (d >= 2 && ring == CoeffRing::Z) {
      tor_idx.push_back(i);
      torsion.push_back(d);
    }  // d == 1, or nonzero over Q: generator dies
  }
  std::vector<std::size_t> kept = tor_idx;
  kept.insert(kept.end(), free_idx.begin(), free_idx.end());

  Canonicalized c;
  c.group = Group(ring, free_idx.size(), torsion);
  c.to_can = Mat(kept.size(), gens);
  c.from_can = Mat(gens, kept.size());
  for (std::size_t k = 0; k < kept.size(); ++k) {
    for (std::size_t j = 0; j < gens; ++j) {
      c.to_can(k, j) = s.U(kept[k], j);
      c.from_can(j, k) = s.Uinv(j, kept[k]);
    }
  }
  return c;
}

/// Canonical form of a direct sum of cyclic pieces, each given by its
/// order (0 = infinite cyclic).
inline Group canonical_of_cyclics(CoeffRing ring, const std::vector<Int>& orders) {
  return canonicalize_presentation(ring, orders.size(), Mat::diagonal(orders)).group;
}

struct GradedGroup {
  Group deg0, deg1;

  GradedGroup() = default;
  GradedGroup(Group d0, Group d1) : deg0(std::move(d0)), deg1(std::move(d1)) {
    if (deg0.ring != deg1.ring)
      throw InputError("graded group components over different rings");
  }

  CoeffRing ring() const { return deg0.ring; }
  const Group& deg(int i) const { return i % 2 == 0 ? deg0 : deg1; }

  bool is_trivial() const { return deg0.is_trivial() && deg1.is_trivial(); }
  bool is_free() const { return deg0.is_free() && deg1.is_free(); }
  bool is_divisible() const { return deg0.is_divisible() && deg1.is_divisible(); }
  bool torsion_free() const { return deg0.torsion.empty() && deg1.torsion.empty(); }

  bool operator==(const GradedGroup& o) const = default;
};

inline GradedGroup suspend(const GradedGroup& g) { return {g.deg1, g.deg0}; }

inline Group rationalize(const Group& g) {
  return Group(CoeffRing::Q, g.rank);
}

inline GradedGroup rationalize(const GradedGroup& g) {
  return {rationalize(g.deg0), rationalize(g.deg1)};
}

inline GradedGroup zero_graded(CoeffRing ring) {
  return {Group(ring, 0), Group(ring, 0)};
}

inline bool iso_class_equal(const GradedGroup& a, const GradedGroup& b) {
  return a == b;
}

}  // namespace fkt
