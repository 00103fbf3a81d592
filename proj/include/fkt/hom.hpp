#pragma once

#include "fkt/group.hpp"

namespace fkt {

/// Homomorphism between groups in canonical form. `mat` has one column
/// per source generator, one row per target generator; it is read
/// modulo the target relations. Over Q the integer entries represent a
/// rational-linear map (any hom between our objects can be scaled to an
/// integer matrix without changing the subgroup it generates).
struct GroupHom {
  Group src, tgt;
  Mat mat;

  GroupHom() = default;
  GroupHom(Group s, Group t, Mat m)
      : src(std::move(s)), tgt(std::move(t)), mat(std::move(m)) {
    if (mat.rows() != tgt.gens() || mat.cols() != src.gens())
      throw ShapeError("hom matrix shape does not match canonical generators");
    if (src.ring != tgt.ring) throw InputError("hom between different rings");
  }

  static GroupHom zero(const Group& s, const Group& t) {
    return GroupHom(s, t, Mat(t.gens(), s.gens()));
  }
  static GroupHom identity(const Group& g) {
    return GroupHom(g, g, Mat::identity(g.gens()));
  }

  /// order(x_j) * f(x_j) must vanish in the target for every source
  /// generator x_j.
  bool well_defined() const {
    for (std::size_t j = 0; j < src.gens(); ++j) {
      Int o = src.order_of(j);
      if (o == 0) continue;
      if (src.ring == CoeffRing::Q) continue;
      for (std::size_t i = 0; i < tgt.gens(); ++i) {
        Int ot = tgt.order_of(i);
        Int v = o * mat(i, j);
        if (ot == 0 ? v != 0 : v % ot != 0) return false;
      }
    }
    return true;
  }

  void require_well_defined() const {
    if (!well_defined())
      throw WellDefinednessError("hom matrix not well-defined on presentation");
  }

  /// Entry-wise reduction modulo the target relation orders.
  GroupHom reduced() const {
    Mat m = mat;
    for (std::size_t i = 0; i < tgt.gens(); ++i) {
      Int o = tgt.order_of(i);
      if (o == 0) continue;
      for (std::size_t j = 0; j < src.gens(); ++j) {
        mpz_fdiv_r(m(i, j).get_mpz_t(), m(i, j).get_mpz_t(), o.get_mpz_t());
      }
    }
    return GroupHom(src, tgt, std::move(m));
  }

  GroupHom operator+(const GroupHom& o) const {
    return GroupHom(src, tgt, mat + o.mat);
  }
  GroupHom operator-(const GroupHom& o) const {
    return GroupHom(src, tgt, mat - o.mat);
  }
  GroupHom operator*(const Int& s) const { return GroupHom(src, tgt, mat * s); }
};

inline bool hom_equal(const GroupHom& a, const GroupHom& b) {
  if (a.src != b.src || a.tgt != b.tgt) return false;
  Mat d = a.mat - b.mat;
  for (std::size_t i = 0; i < a.tgt.gens(); ++i) {
    Int o = a.tgt.order_of(i);
    for (std::size_t j = 0; j < a.src.gens(); ++j)
      if (o == 0 ? d(i, j) != 0 : d(i, j) % o != 0) return false;
  }
  return true;
}

inline GroupHom compose(const GroupHom& g, const GroupHom& f) {
  if (f.tgt != g.src) throw ShapeError("compose: target/source mismatch");
  return GroupHom(f.src, g.tgt, g.mat * f.mat);
}

/// A subquotient (span(gens) + relations)/relations of an ambient
/// canonical group, itself in canonical form.
struct Subquotient {
  Group ambient;
  Mat gens_in_ambient;  // ambient.gens() x m
  Group group;
  Mat to_can;    // group.gens() x m
  Mat from_can;  // m x group.gens()

  /// Inclusion of the canonical subquotient into the ambient group.
  GroupHom inclusion() const {
    return GroupHom(group, ambient, gens_in_ambient * from_can).reduced();
  }

  /// Coordinates of an ambient element (which must lie in the span).
  std::vector<Int> coords(const std::vector<Int>& ambient_vec) const {
    Mat ext = gens_in_ambient.hconcat(ambient.relation_matrix());
    auto sol = solve_integer(ext, ambient_vec);
    if (!sol) throw InputError("element not in subquotient span");
    std::vector<Int> c(sol->begin(), sol->begin() + gens_in_ambient.cols());
    return to_can.apply(c);
  }
};

inline Subquotient present_subquotient(const Group& ambient, const Mat& gens) {
  if (gens.rows() != ambient.gens() && !gens.empty())
    throw ShapeError("subquotient generator rows mismatch");
  Mat g = gens.empty() ? Mat(ambient.gens(), gens.cols()) : gens;
  Mat rel = preimage_lattice(g, ambient.relation_matrix());
  Canonicalized c = canonicalize_presentation(ambient.ring, g.cols(), rel);
  return Subquotient{ambient, g, c.group, c.to_can, c.from_can};
}

/// Generators (in source coordinates) of the kernel lattice
/// {x : f(x) in target relations}.
inline Mat kernel_lattice(const GroupHom& f) {
  return preimage_lattice(f.mat, f.tgt.relation_matrix());
}

struct SubgroupResult {
  Group group;
  GroupHom witness;  // inclusion into the ambient group
};

inline SubgroupResult kernel(const GroupHom& f) {
  f.require_well_defined();
  Subquotient s = present_subquotient(f.src, kernel_lattice(f));
  return {s.group, s.inclusion()};
}

inline SubgroupResult image(const GroupHom& f) {
  f.require_well_defined();
  Subquotient s = present_subquotient(f.tgt, f.mat);
  return {s.group, s.inclusion()};
}

struct QuotientResult {
  Group group;
  GroupHom witness;  // projection from the ambient group
};

inline QuotientResult cokernel(const GroupHom& f) {
  f.require_well_defined();
  Mat rel = f.mat.hconcat(f.tgt.relation_matrix());
  Canonicalized c = canonicalize_presentation(f.tgt.ring, f.tgt.gens(), rel);
  return {c.group, GroupHom(f.tgt, c.group, c.to_can).reduced()};
}

/// image(f) == kernel(g) as subgroups of the shared middle group.
inline bool is_exact_at(const GroupHom& f, const GroupHom& g) {
  if (f.tgt != g.src) throw ShapeError("is_exact_at: not composable");
  f.require_well_defined();
  g.require_well_defined();
  Mat L = f.tgt.relation_matrix();
  Mat im = f.mat.hconcat(L);
  Mat ker = kernel_lattice(g).hconcat(L);
  return spans_equal(f.tgt.ring, im, ker);
}

/// Surjective + same canonical form implies bijective for finitely
/// generated groups, so this test is complete.
inline bool is_isomorphism(const GroupHom& f) {
  if (!f.well_defined()) return false;
  if (!iso_class_equal(f.src, f.tgt)) return false;
  return cokernel(f).group.is_trivial();
}

// ---------------------------------------------------------------------------
// Hom and Ext of canonical groups, with explicit generating homs.

/// One cyclic direct summand of Hom(src, tgt): the hom sending
/// src generator `src_gen` to `scale` times tgt generator `tgt_gen`.
/// `order` is the order of this summand (0 = infinite).
struct HomFactor {
  std::size_t src_gen, tgt_gen;
  Int order;
  Int scale;
};

struct UngradedHomSpace {
  Group src, tgt;
  std::vector<HomFactor> factors;

  std::vector<Int> orders() const {
    std::vector<Int> o;
    o.reserve(factors.size());
    for (const auto& f : factors) o.push_back(f.order);
    return o;
  }

  Group canonical() const { return canonical_of_cyclics(src.ring, orders()); }

  GroupHom from_coords(const std::vector<Int>& x) const {
    if (x.size() != factors.size()) throw ShapeError("hom coords size mismatch");
    Mat m(tgt.gens(), src.gens());
    for (std::size_t k = 0; k < factors.size(); ++k)
      m(factors[k].tgt_gen, factors[k].src_gen) += factors[k].scale * x[k];
    return GroupHom(src, tgt, std::move(m)).reduced();
  }

  /// Inverse of from_coords on well-defined homs.
  std::vector<Int> coords(const GroupHom& h) const {
    h.require_well_defined();
    std::vector<Int> x(factors.size());
    for (std::size_t k = 0; k < factors.size(); ++k) {
      const auto& f = factors[k];
      Int v = h.mat(f.tgt_gen, f.src_gen);
      Int ot = tgt.order_of(f.tgt_gen);
      if (ot > 0) mpz_fdiv_r(v.get_mpz_t(), v.get_mpz_t(), ot.get_mpz_t());
      if (v % f.scale != 0)
        throw WellDefinednessError("hom entry not a multiple of factor scale");
      x[k] = v / f.scale;
    }
    return x;
  }
};

inline UngradedHomSpace hom_space_of(const Group& a, const Group& b) {
  if (a.ring != b.ring) throw InputError("hom between different rings");
  UngradedHomSpace hs{a, b, {}};
  for (std::size_t i = 0; i < a.gens(); ++i) {
    Int d = a.order_of(i);
    for (std::size_t j = 0; j < b.gens(); ++j) {
      Int e = b.order_of(j);
      if (d == 0) {
        hs.factors.push_back({i, j, e, 1});  // Z -> Z or Z -> Z/e
      } else if (e != 0) {
        Int g = gcd(d, e);
        hs.factors.push_back({i, j, g, e / g});  // Z/d -> Z/e
      }  // Z/d -> Z contributes nothing
    }
  }
  return hs;
}

inline Group hom_group(const Group& a, const Group& b) {
  return hom_space_of(a, b).canonical();
}

inline Group ext_group(const Group& a, const Group& b) {
  if (a.ring != b.ring) throw InputError("ext between different rings");
  std::vector<Int> orders;
  if (a.ring == CoeffRing::Z) {
    for (std::size_t i = 0; i < a.gens(); ++i) {
      Int d = a.order_of(i);
      if (d == 0) continue;  // free source: Ext vanishes
      for (std::size_t j = 0; j < b.gens(); ++j) {
        Int e = b.order_of(j);
        orders.push_back(e == 0 ? d : gcd(d, e));
      }
    }
  }
  return canonical_of_cyclics(a.ring, orders);
}

// ---------------------------------------------------------------------------
// Graded homs.

/// Z/2-graded hom of parity p: component `even` maps deg0 -> deg(p),
/// component `odd` maps deg1 -> deg(1+p).
struct GradedHom {
  int parity = 0;
  GroupHom even, odd;

  GradedHom() = default;
  GradedHom(int parity, GroupHom e, GroupHom o)
      : parity(parity & 1), even(std::move(e)), odd(std::move(o)) {}

  static GradedHom zero(const GradedGroup& s, const GradedGroup& t, int parity) {
    return GradedHom(parity,
                     GroupHom::zero(s.deg0, t.deg(parity)),
                     GroupHom::zero(s.deg1, t.deg(parity + 1)));
  }
  static GradedHom identity(const GradedGroup& g) {
    return GradedHom(0, GroupHom::identity(g.deg0), GroupHom::identity(g.deg1));
  }

  bool well_defined() const { return even.well_defined() && odd.well_defined(); }
  GradedHom reduced() const { return {parity, even.reduced(), odd.reduced()}; }

  GradedHom operator+(const GradedHom& o) const {
    return {parity, even + o.even, odd + o.odd};
  }
  GradedHom operator*(const Int& s) const { return {parity, even * s, odd * s}; }
};

inline bool hom_equal(const GradedHom& a, const GradedHom& b) {
  return a.parity == b.parity && hom_equal(a.even, b.even) &&
         hom_equal(a.odd, b.odd);
}

inline GradedHom compose(const GradedHom& g, const GradedHom& f) {
  const GroupHom& g_from_even = f.parity == 0 ? g.even : g.odd;
  const GroupHom& g_from_odd = f.parity == 0 ? g.odd : g.even;
  return GradedHom((f.parity + g.parity) & 1, compose(g_from_even, f.even),
                   compose(g_from_odd, f.odd));
}

inline bool is_isomorphism(const GradedHom& f) {
  return is_isomorphism(f.even) && is_isomorphism(f.odd);
}

/// Hom(G, H) of one parity as a pair of ungraded hom spaces (from deg0
/// and deg1 of the source).
struct GradedHomSpace {
  int parity = 0;
  UngradedHomSpace part0, part1;

  std::vector<Int> orders() const {
    auto o = part0.orders();
    auto o1 = part1.orders();
    o.insert(o.end(), o1.begin(), o1.end());
    return o;
  }
  std::size_t dim() const { return part0.factors.size() + part1.factors.size(); }

  Group canonical() const {
    return canonical_of_cyclics(part0.src.ring, orders());
  }

  GradedHom from_coords(const std::vector<Int>& x) const {
    if (x.size() != dim()) throw ShapeError("graded hom coords size mismatch");
    std::vector<Int> x0(x.begin(), x.begin() + part0.factors.size());
    std::vector<Int> x1(x.begin() + part0.factors.size(), x.end());
    return GradedHom(parity, part0.from_coords(x0), part1.from_coords(x1));
  }

  std::vector<Int> coords(const GradedHom& h) const {
    auto c = part0.coords(h.even);
    auto c1 = part1.coords(h.odd);
    c.insert(c.end(), c1.begin(), c1.end());
    return c;
  }
};

inline GradedHomSpace graded_hom_space(const GradedGroup& a, const GradedGroup& b,
                                       int parity) {
  parity &= 1;
  return GradedHomSpace{parity, hom_space_of(a.deg0, b.deg(parity)),
                        hom_space_of(a.deg1, b.deg(parity + 1))};
}

/// Hom(G, H) as a graded group: parity-0 homs in degree 0, parity-1
/// homs in degree 1.
inline GradedGroup hom_group(const GradedGroup& a, const GradedGroup& b) {
  return {graded_hom_space(a, b, 0).canonical(),
          graded_hom_space(a, b, 1).canonical()};
}

inline GradedGroup ext_group(const GradedGroup& a, const GradedGroup& b) {
  auto sum = [](const Group& x, const Group& y) {
    std::vector<Int> orders;
    for (std::size_t i = 0; i < x.gens(); ++i) orders.push_back(x.order_of(i));
    for (std::size_t i = 0; i < y.gens(); ++i) orders.push_back(y.order_of(i));
    return canonical_of_cyclics(x.ring, orders);
  };
  return {sum(ext_group(a.deg0, b.deg0), ext_group(a.deg1, b.deg1)),
          sum(ext_group(a.deg0, b.deg1), ext_group(a.deg1, b.deg0))};
}

}  // namespace fkt
