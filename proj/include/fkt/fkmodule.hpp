#pragma once

#include <map>
#include <optional>
#include <string>

#include "fkt/hom.hpp"
#include "fkt/interval.hpp"

namespace fkt {

/// Generator maps attached to one admissible pair (U, Y, Q):
/// iota: M(U) -> M(Y) and rho: M(Y) -> M(Q), both parity 0;
/// delta: M(Q) -> M(U), parity 1.
struct PairMaps {
  GradedHom iota, rho, delta;
};

inline std::vector<AdmissiblePair> all_admissible_pairs(const Level& lv) {
  std::vector<AdmissiblePair> out;
  for (const Run& y : runs(lv)) {
    auto ps = admissible_pairs(y);
    out.insert(out.end(), ps.begin(), ps.end());
  }
  return out;
}

/// A module over the six-term-transformation category of one level: a
/// graded group per run plus generator maps per admissible pair.
struct FKModule {
  Level level;
  CoeffRing ring = CoeffRing::Z;
  std::vector<GradedGroup> groups;  // indexed by run_index
  std::vector<AdmissiblePair> pairs;
  std::vector<PairMaps> maps;  // parallel to pairs

  const GradedGroup& group(const Run& r) const {
    return groups.at(run_index(level, r));
  }
  GradedGroup& group(const Run& r) { return groups.at(run_index(level, r)); }

  std::size_t pair_index(const Run& Y, const Run& U) const {
    for (std::size_t i = 0; i < pairs.size(); ++i)
      if (pairs[i].Y == Y && pairs[i].U == U) return i;
    throw InputError("admissible pair not found");
  }

  static FKModule zero(const Level& lv, CoeffRing ring) {
    FKModule m;
    m.level = lv;
    m.ring = ring;
    m.groups.assign(runs(lv).size(), zero_graded(ring));
    m.pairs = all_admissible_pairs(lv);
    for (const auto& p : m.pairs)
      m.maps.push_back({GradedHom::zero(m.group(p.U), m.group(p.Y), 0),
                        GradedHom::zero(m.group(p.Y), m.group(p.Q), 0),
                        GradedHom::zero(m.group(p.Q), m.group(p.U), 1)});
    return m;
  }
};

inline bool modules_equal(const FKModule& a, const FKModule& b) {
  if (a.level != b.level || a.ring != b.ring || a.groups != b.groups) return false;
  if (a.pairs != b.pairs) return false;
  for (std::size_t i = 0; i < a.maps.size(); ++i) {
    if (!hom_equal(a.maps[i].iota, b.maps[i].iota)) return false;
    if (!hom_equal(a.maps[i].rho, b.maps[i].rho)) return false;
    if (!hom_equal(a.maps[i].delta, b.maps[i].delta)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Validation: shapes, well-definedness, and the coherence relations
// R1 (iota-transitivity), R2 (rho-transitivity), R3 (consecutive
// six-term composites vanish).

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

namespace detail {

inline std::string run_str(const Run& r) {
  return std::to_string(r.lo) + "-" + std::to_string(r.hi);
}

inline void check_shape(const FKModule& m, const GradedHom& h, const GradedGroup& s,
                        const GradedGroup& t, int parity, const std::string& what,
                        ValidationReport& rep) {
  if (h.parity != parity) {
    rep.violations.push_back(what + ": wrong parity");
    return;
  }
  bool shape_ok = h.even.src == s.deg0 && h.odd.src == s.deg1 &&
                  h.even.tgt == t.deg(parity) && h.odd.tgt == t.deg(parity + 1);
  if (!shape_ok) {
    rep.violations.push_back(what + ": source/target mismatch");
    return;
  }
  if (!h.well_defined()) rep.violations.push_back(what + ": not well-defined");
}

}  // namespace detail

inline ValidationReport validate(const FKModule& m) {
  using detail::run_str;
  ValidationReport rep;
  auto expected_pairs = all_admissible_pairs(m.level);
  if (m.pairs != expected_pairs || m.maps.size() != m.pairs.size()) {
    rep.violations.push_back("stored pair list does not enumerate all admissible pairs");
    return rep;
  }
  if (m.groups.size() != runs(m.level).size()) {
    rep.violations.push_back("group table size mismatch");
    return rep;
  }
  for (const auto& g : m.groups)
    if (g.ring() != m.ring) {
      rep.violations.push_back("group over wrong coefficient ring");
      return rep;
    }

  for (std::size_t i = 0; i < m.pairs.size(); ++i) {
    const auto& p = m.pairs[i];
    std::string tag = "pair (Y=" + run_str(p.Y) + ", U=" + run_str(p.U) + ")";
    detail::check_shape(m, m.maps[i].iota, m.group(p.U), m.group(p.Y), 0,
                        tag + " iota", rep);
    detail::check_shape(m, m.maps[i].rho, m.group(p.Y), m.group(p.Q), 0,
                        tag + " rho", rep);
    detail::check_shape(m, m.maps[i].delta, m.group(p.Q), m.group(p.U), 1,
                        tag + " delta", rep);
  }
  if (!rep.ok()) return rep;

  // R1/R2: nested same-side pairs U subset V subset Y.
  for (const Run& y : runs(m.level)) {
    for (const auto& p2 : admissible_pairs(y)) {
      const Run& v = p2.U;
      for (const auto& p1 : admissible_pairs(v)) {
        if (p1.side != p2.side) continue;
        const Run& u = p1.U;
        // u is admissible in y as well (same side)
        const auto& i_uv = m.maps[m.pair_index(v, u)].iota;
        const auto& i_vy = m.maps[m.pair_index(y, v)].iota;
        const auto& i_uy = m.maps[m.pair_index(y, u)].iota;
        if (!hom_equal(compose(i_vy, i_uv), i_uy))
          rep.violations.push_back("R1: iota transitivity fails for U=" + run_str(u) +
                                   " V=" + run_str(v) + " Y=" + run_str(y));
        // complements: Q_u = y \ u contains v \ u with complement Q_v
        Run qu = m.pairs[m.pair_index(y, u)].Q;
        Run qv = p2.Q;
        Run mid = p1.side == Side::LEFT ? Run{u.hi + 1, v.hi} : Run{v.lo, u.lo - 1};
        const auto& r_yqu = m.maps[m.pair_index(y, u)].rho;
        const auto& r_yqv = m.maps[m.pair_index(y, v)].rho;
        const auto& r_quqv = m.maps[m.pair_index(qu, mid)].rho;
        if (!hom_equal(compose(r_quqv, r_yqu), r_yqv))
          rep.violations.push_back("R2: rho transitivity fails for U=" + run_str(u) +
                                   " V=" + run_str(v) + " Y=" + run_str(y));
      }
    }
  }

  // R3: consecutive composites in each six-term circle vanish.
  for (std::size_t i = 0; i < m.pairs.size(); ++i) {
    const auto& p = m.pairs[i];
    const auto& pm = m.maps[i];
    std::string tag = "pair (Y=" + run_str(p.Y) + ", U=" + run_str(p.U) + ")";
    if (!hom_equal(compose(pm.rho, pm.iota),
                   GradedHom::zero(m.group(p.U), m.group(p.Q), 0)))
      rep.violations.push_back("R3: rho o iota != 0 at " + tag);
    if (!hom_equal(compose(pm.delta, pm.rho),
                   GradedHom::zero(m.group(p.Y), m.group(p.U), 1)))
      rep.violations.push_back("R3: delta o rho != 0 at " + tag);
    if (!hom_equal(compose(pm.iota, pm.delta),
                   GradedHom::zero(m.group(p.Q), m.group(p.Y), 1)))
      rep.violations.push_back("R3: iota o delta != 0 at " + tag);
  }
  return rep;
}

/// Every admissible pair's six-term sequence is exact at all six
/// positions.
inline bool is_exact(const FKModule& m) {
  ValidationReport rep = validate(m);
  if (!rep.ok()) throw ValidationError("is_exact: module invalid: " + rep.violations[0]);
  for (std::size_t i = 0; i < m.pairs.size(); ++i) {
    const auto& pm = m.maps[i];
    const GroupHom& i0 = pm.iota.even;
    const GroupHom& i1 = pm.iota.odd;
    const GroupHom& r0 = pm.rho.even;
    const GroupHom& r1 = pm.rho.odd;
    const GroupHom& de = pm.delta.even;  // Q0 -> U1
    const GroupHom& d_odd = pm.delta.odd;   // Q1 -> U0
    if (!is_exact_at(i0, r0)) return false;
    if (!is_exact_at(r0, de)) return false;
    if (!is_exact_at(de, i1)) return false;
    if (!is_exact_at(i1, r1)) return false;
    if (!is_exact_at(r1, d_odd)) return false;
    if (!is_exact_at(d_odd, i0)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Elementary modules: fiber G supported on a locally closed run Z.

/// Value tag of a run Y: the trimmed intersection W = Y n Z contributes
/// G when W is closed-closed, the suspension of G when open-open, and
/// nothing when W is mixed or empty.
enum class ElementaryTag { ZERO, PLAIN, SUSP };

inline ElementaryTag elementary_tag(const Level& lv, const Run& Z, const Run& Y) {
  Run w;
  if (!run_intersect(Y, Z, w)) return ElementaryTag::ZERO;
  switch (run_type(w, lv.n)) {
    case IntervalType::CC: return ElementaryTag::PLAIN;
    case IntervalType::OO: return ElementaryTag::SUSP;
    default: return ElementaryTag::ZERO;
  }
}

inline FKModule elementary_module(const Level& lv, const Run& Z, const GradedGroup& G) {
  FKModule m;
  m.level = lv;
  m.ring = G.ring();
  auto rs = runs(lv);
  std::vector<ElementaryTag> tags(rs.size());
  m.groups.resize(rs.size(), zero_graded(m.ring));
  for (std::size_t i = 0; i < rs.size(); ++i) {
    tags[i] = elementary_tag(lv, Z, rs[i]);
    if (tags[i] == ElementaryTag::PLAIN) m.groups[i] = G;
    else if (tags[i] == ElementaryTag::SUSP) m.groups[i] = suspend(G);
  }
  m.pairs = all_admissible_pairs(lv);

  // Identity wherever source and target are both nonzero. The trimming
  // analysis guarantees the graded components then coincide, so the
  // identity matrix is well-typed for the required parity.
  auto connect = [&](const Run& s, const Run& t, int parity) {
    const GradedGroup& S = m.group(s);
    const GradedGroup& T = m.group(t);
    if (S.is_trivial() || T.is_trivial()) return GradedHom::zero(S, T, parity);
    if (S.deg0 != T.deg(parity) || S.deg1 != T.deg(parity + 1))
      throw ValidationError("elementary module: inconsistent trimming");
    return GradedHom(parity, GroupHom(S.deg0, T.deg(parity), Mat::identity(S.deg0.gens())),
                     GroupHom(S.deg1, T.deg(parity + 1), Mat::identity(S.deg1.gens())));
  };
  for (const auto& p : m.pairs)
    m.maps.push_back({connect(p.U, p.Y, 0), connect(p.Y, p.Q, 0), connect(p.Q, p.U, 1)});
  return m;
}

// ---------------------------------------------------------------------------
// Direct sums.

/// Canonical form of a concatenation of canonical groups, with the
/// coordinate change into/out of the concatenated presentation.
struct SumPresentation {
  Group group;
  Mat to_can, from_can;  // between concat coordinates and canonical ones
};

inline SumPresentation sum_groups(CoeffRing ring, const std::vector<const Group*>& parts) {
  std::vector<Int> orders;
  for (const Group* g : parts)
    for (std::size_t i = 0; i < g->gens(); ++i) orders.push_back(g->order_of(i));
  Canonicalized c = canonicalize_presentation(ring, orders.size(), Mat::diagonal(orders));
  return {c.group, c.to_can, c.from_can};
}

inline FKModule direct_sum(const std::vector<const FKModule*>& parts, const Level& lv,
                           CoeffRing ring) {
  for (const FKModule* p : parts)
    if (p->level != lv || p->ring != ring)
      throw InputError("direct_sum: level or ring mismatch");
  FKModule m;
  m.level = lv;
  m.ring = ring;
  auto rs = runs(lv);

  // per-run, per-degree canonicalized sums
  std::vector<SumPresentation> sum0(rs.size()), sum1(rs.size());
  m.groups.resize(rs.size());
  for (std::size_t i = 0; i < rs.size(); ++i) {
    std::vector<const Group*> p0, p1;
    for (const FKModule* p : parts) {
      p0.push_back(&p->groups[i].deg0);
      p1.push_back(&p->groups[i].deg1);
    }
    sum0[i] = sum_groups(ring, p0);
    sum1[i] = sum_groups(ring, p1);
    m.groups[i] = GradedGroup{sum0[i].group, sum1[i].group};
  }

  auto sum_of = [&](std::size_t run, int deg) -> const SumPresentation& {
    return deg % 2 == 0 ? sum0[run] : sum1[run];
  };
  auto combine = [&](const Run& s, const Run& t, int parity, auto&& pick) {
    std::size_t si = run_index(lv, s), ti = run_index(lv, t);
    Mat block_even(0, 0), block_odd(0, 0);
    for (const FKModule* p : parts) {
      const GradedHom& h = pick(*p);
      block_even = block_diag(block_even, h.even.mat);
      block_odd = block_diag(block_odd, h.odd.mat);
    }
    const SumPresentation& se = sum_of(ti, parity);
    const SumPresentation& so = sum_of(ti, parity + 1);
    GroupHom even(m.groups[si].deg0, m.groups[ti].deg(parity),
                  se.to_can * block_even * sum_of(si, 0).from_can);
    GroupHom odd(m.groups[si].deg1, m.groups[ti].deg(parity + 1),
                 so.to_can * block_odd * sum_of(si, 1).from_can);
    return GradedHom(parity, even.reduced(), odd.reduced());
  };

  m.pairs = all_admissible_pairs(lv);
  for (std::size_t i = 0; i < m.pairs.size(); ++i) {
    const auto& p = m.pairs[i];
    m.maps.push_back(
        {combine(p.U, p.Y, 0, [&](const FKModule& x) -> const GradedHom& { return x.maps[i].iota; }),
         combine(p.Y, p.Q, 0, [&](const FKModule& x) -> const GradedHom& { return x.maps[i].rho; }),
         combine(p.Q, p.U, 1, [&](const FKModule& x) -> const GradedHom& { return x.maps[i].delta; })});
  }
  return m;
}

// ---------------------------------------------------------------------------
// Coarsening along a refinement.

inline FKModule coarsen(const FKModule& fine, const Refinement& ref,
                        const Level& coarse) {
  if (fine.level.n != ref.from_n || coarse.n != ref.to_n)
    throw InputError("coarsen: refinement does not match levels");
  FKModule m;
  m.level = coarse;
  m.ring = fine.ring;
  for (const Run& y : runs(coarse)) m.groups.push_back(fine.group(preimage_run(ref, y)));
  m.pairs = all_admissible_pairs(coarse);
  for (const auto& p : m.pairs) {
    Run yy = preimage_run(ref, p.Y), uu = preimage_run(ref, p.U);
    m.maps.push_back(fine.maps[fine.pair_index(yy, uu)]);
  }
  return m;
}

// ---------------------------------------------------------------------------
// Structure certificates (the vanishing routes of the certification
// engine, evaluated pointwise on one module).

enum class CertificateKind { POINTWISE_DIVISIBLE, POINTWISE_FREE, PARITY_VANISHING, NONE };

struct StructureCertificate {
  CertificateKind kind = CertificateKind::NONE;
  std::optional<int> parity_degree;  // set when degree-i parts all vanish
  bool exact = false;
  bool pointwise_free = false;
  bool pointwise_divisible = false;
  bool torsion_free = false;
  bool is_projective = false;
  bool is_injective = false;
};

inline StructureCertificate certify_structure(const FKModule& m) {
  ValidationReport rep = validate(m);
  if (!rep.ok())
    throw ValidationError("certify_structure: module invalid: " + rep.violations[0]);
  StructureCertificate c;
  c.exact = is_exact(m);
  c.pointwise_free = true;
  c.pointwise_divisible = true;
  c.torsion_free = true;
  bool zero0 = true, zero1 = true;
  for (const auto& g : m.groups) {
    c.pointwise_free = c.pointwise_free && g.is_free();
    c.pointwise_divisible = c.pointwise_divisible && g.is_divisible();
    c.torsion_free = c.torsion_free && g.torsion_free();
    zero0 = zero0 && g.deg0.is_trivial();
    zero1 = zero1 && g.deg1.is_trivial();
  }
  if (zero0) c.parity_degree = 0;
  else if (zero1) c.parity_degree = 1;
  c.is_projective = c.exact && c.pointwise_free;
  c.is_injective = c.exact && c.pointwise_divisible;

  // Torsion blocks the parity route; see the certification engine.
  if (c.exact && c.pointwise_divisible && m.ring == CoeffRing::Q)
    c.kind = CertificateKind::POINTWISE_DIVISIBLE;
  else if (c.exact && c.pointwise_free)
    c.kind = CertificateKind::POINTWISE_FREE;
  else if (c.parity_degree && c.torsion_free)
    c.kind = CertificateKind::PARITY_VANISHING;
  else
    c.kind = CertificateKind::NONE;
  return c;
}

inline FKModule rationalize_module(const FKModule& m) {
  FKModule r;
  r.level = m.level;
  r.ring = CoeffRing::Q;
  for (const auto& g : m.groups) r.groups.push_back(rationalize(g));
  r.pairs = m.pairs;

  // canonical generators of G x Q are the free generators of G
  auto rat_hom = [](const GroupHom& f) {
    Group s = rationalize(f.src), t = rationalize(f.tgt);
    Mat mm(t.gens(), s.gens());
    std::size_t toff = f.tgt.torsion.size(), soff = f.src.torsion.size();
    for (std::size_t i = 0; i < t.gens(); ++i)
      for (std::size_t j = 0; j < s.gens(); ++j) mm(i, j) = f.mat(toff + i, soff + j);
    return GroupHom(s, t, std::move(mm));
  };
  for (const auto& pm : m.maps)
    r.maps.push_back({GradedHom(0, rat_hom(pm.iota.even), rat_hom(pm.iota.odd)),
                      GradedHom(0, rat_hom(pm.rho.even), rat_hom(pm.rho.odd)),
                      GradedHom(1, rat_hom(pm.delta.even), rat_hom(pm.delta.odd))});
  return r;
}

}  // namespace fkt
