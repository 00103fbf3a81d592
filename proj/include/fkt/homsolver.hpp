#pragma once

#include <cstdint>
#include <optional>
#include <random>

#include "fkt/fkmodule.hpp"

namespace fkt {

/// Natural transformation between modules on the same level: one graded
/// hom per run, all of one parity, commuting with every generator map.
struct ModuleHom {
  int parity = 0;
  std::vector<GradedHom> comps;  // indexed by run_index
};

inline ModuleHom identity_hom(const FKModule& m) {
  ModuleHom h{0, {}};
  for (const auto& g : m.groups) h.comps.push_back(GradedHom::identity(g));
  return h;
}

inline ModuleHom zero_module_hom(const FKModule& a, const FKModule& b, int parity) {
  ModuleHom h{parity & 1, {}};
  for (std::size_t i = 0; i < a.groups.size(); ++i)
    h.comps.push_back(GradedHom::zero(a.groups[i], b.groups[i], parity));
  return h;
}

inline ModuleHom compose(const ModuleHom& g, const ModuleHom& f) {
  if (g.comps.size() != f.comps.size()) throw ShapeError("module hom size mismatch");
  ModuleHom h{(g.parity + f.parity) & 1, {}};
  for (std::size_t i = 0; i < f.comps.size(); ++i)
    h.comps.push_back(compose(g.comps[i], f.comps[i]));
  return h;
}

inline bool hom_equal(const ModuleHom& a, const ModuleHom& b) {
  if (a.parity != b.parity || a.comps.size() != b.comps.size()) return false;
  for (std::size_t i = 0; i < a.comps.size(); ++i)
    if (!hom_equal(a.comps[i], b.comps[i])) return false;
  return true;
}

/// Does h commute with every iota, rho and delta of A and B?
inline bool is_natural(const FKModule& A, const FKModule& B, const ModuleHom& h) {
  if (h.comps.size() != A.groups.size()) return false;
  for (const auto& c : h.comps)
    if (!c.well_defined()) return false;
  auto commutes = [&](std::size_t s, std::size_t t, const GradedHom& mA,
                      const GradedHom& mB) {
    return hom_equal(compose(h.comps[t], mA), compose(mB, h.comps[s]));
  };
  for (std::size_t i = 0; i < A.pairs.size(); ++i) {
    const auto& p = A.pairs[i];
    std::size_t u = run_index(A.level, p.U), y = run_index(A.level, p.Y),
                q = run_index(A.level, p.Q);
    if (!commutes(u, y, A.maps[i].iota, B.maps[i].iota)) return false;
    if (!commutes(y, q, A.maps[i].rho, B.maps[i].rho)) return false;
    if (!commutes(q, u, A.maps[i].delta, B.maps[i].delta)) return false;
  }
  return true;
}

enum class IsoScope { OPEN_RUNS, ALL_RUNS };

inline bool is_componentwise_iso(const FKModule& A, const ModuleHom& h,
                                 IsoScope scope = IsoScope::ALL_RUNS) {
  if (h.parity != 0) return false;
  auto rs = runs(A.level);
  for (std::size_t i = 0; i < rs.size(); ++i) {
    if (scope == IsoScope::OPEN_RUNS && !is_open_run(rs[i])) continue;
    if (!is_isomorphism(h.comps[i])) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// The space of natural transformations A -> B of one parity, as a
// canonical group with explicit generating transformations. Unknowns
// are the per-run hom coordinates; naturality of each generator map
// contributes linear constraints read modulo the target orders.

struct HomSpace {
  int parity = 0;
  CoeffRing ring = CoeffRing::Z;
  std::vector<GradedHomSpace> spaces;  // pointwise hom spaces, per run
  std::vector<std::size_t> offset;     // per run; offset.back() == total dim
  std::vector<Int> coord_orders;
  Mat KL;  // columns generate the coordinate lattice of natural homs
  Group group;
  Mat to_can, from_can;  // between KL columns and canonical generators

  std::size_t dim() const { return group.gens(); }

  ModuleHom from_coord_vec(const std::vector<Int>& x) const {
    ModuleHom h{parity, {}};
    for (std::size_t r = 0; r + 1 < offset.size(); ++r)
      h.comps.push_back(spaces[r].from_coords(
          std::vector<Int>(x.begin() + offset[r], x.begin() + offset[r + 1])));
    return h;
  }

  std::vector<Int> coord_vec(const ModuleHom& h) const {
    std::vector<Int> x;
    for (std::size_t r = 0; r + 1 < offset.size(); ++r) {
      auto c = spaces[r].coords(h.comps[r]);
      x.insert(x.end(), c.begin(), c.end());
    }
    return x;
  }

  ModuleHom from_coords(const std::vector<Int>& c) const {
    if (c.size() != group.gens()) throw ShapeError("hom space coords size mismatch");
    return from_coord_vec(KL.apply(from_can.apply(c)));
  }

  ModuleHom generator(std::size_t j) const {
    std::vector<Int> c(group.gens());
    c.at(j) = 1;
    return from_coords(c);
  }

  /// Canonical coordinates of a natural transformation.
  std::vector<Int> coords(const ModuleHom& h) const {
    std::vector<Int> x = coord_vec(h);
    Mat ext = KL.hconcat(Mat::diagonal(coord_orders));
    auto sol = solve_integer(ext, x);
    if (!sol) throw InputError("transformation not natural");
    return to_can.apply(std::vector<Int>(sol->begin(), sol->begin() + KL.cols()));
  }
};

inline HomSpace hom_space(const FKModule& A, const FKModule& B, int parity = 0) {
  if (A.level != B.level || A.ring != B.ring)
    throw InputError("hom_space: level or ring mismatch");
  HomSpace H;
  H.parity = parity & 1;
  H.ring = A.ring;
  std::size_t nr = A.groups.size();
  std::size_t tot = 0;
  for (std::size_t r = 0; r < nr; ++r) {
    H.spaces.push_back(graded_hom_space(A.groups[r], B.groups[r], H.parity));
    H.offset.push_back(tot);
    tot += H.spaces[r].dim();
    auto o = H.spaces[r].orders();
    H.coord_orders.insert(H.coord_orders.end(), o.begin(), o.end());
  }
  H.offset.push_back(tot);

  // One constraint block per generator map m: s -> t, rows indexed by
  // the entries of phi_t o m_A - m_B o phi_s, read modulo the orders of
  // the composite's target generators.
  struct Block {
    std::size_t s, t;
    const GradedHom *mA, *mB;
    std::size_t row0;
  };
  std::vector<Block> blocks;
  std::vector<Int> moduli;
  auto block_rows = [&](const GradedHom& comp) {
    // row-major entries of the even component, then the odd one
    for (std::size_t i = 0; i < comp.even.tgt.gens(); ++i)
      for (std::size_t j = 0; j < comp.even.src.gens(); ++j)
        moduli.push_back(comp.even.tgt.order_of(i));
    for (std::size_t i = 0; i < comp.odd.tgt.gens(); ++i)
      for (std::size_t j = 0; j < comp.odd.src.gens(); ++j)
        moduli.push_back(comp.odd.tgt.order_of(i));
  };
  for (std::size_t i = 0; i < A.pairs.size(); ++i) {
    const auto& p = A.pairs[i];
    std::size_t u = run_index(A.level, p.U), y = run_index(A.level, p.Y),
                q = run_index(A.level, p.Q);
    auto add = [&](std::size_t s, std::size_t t, const GradedHom& mA,
                   const GradedHom& mB) {
      blocks.push_back({s, t, &mA, &mB, moduli.size()});
      // shape witness: compose with a zero hom of the right parity
      block_rows(compose(GradedHom::zero(A.groups[t], B.groups[t], H.parity), mA));
    };
    add(u, y, A.maps[i].iota, B.maps[i].iota);
    add(y, q, A.maps[i].rho, B.maps[i].rho);
    add(q, u, A.maps[i].delta, B.maps[i].delta);
  }

  Mat R(moduli.size(), tot);
  auto emit = [&](std::size_t row0, std::size_t col, const GradedHom& comp, int sign) {
    std::size_t row = row0;
    for (std::size_t i = 0; i < comp.even.tgt.gens(); ++i)
      for (std::size_t j = 0; j < comp.even.src.gens(); ++j)
        R(row++, col) += sign * comp.even.mat(i, j);
    for (std::size_t i = 0; i < comp.odd.tgt.gens(); ++i)
      for (std::size_t j = 0; j < comp.odd.src.gens(); ++j)
        R(row++, col) += sign * comp.odd.mat(i, j);
  };
  for (std::size_t r = 0; r < nr; ++r) {
    for (std::size_t l = 0; l < H.spaces[r].dim(); ++l) {
      std::size_t k = H.offset[r] + l;
      std::vector<Int> e(H.spaces[r].dim());
      e[l] = 1;
      GradedHom phi = H.spaces[r].from_coords(e);
      for (const Block& b : blocks) {
        if (b.t == r) emit(b.row0, k, compose(phi, *b.mA), +1);
        if (b.s == r) emit(b.row0, k, compose(*b.mB, phi), -1);
      }
    }
  }

  H.KL = preimage_lattice(R, Mat::diagonal(moduli));
  Mat rel = preimage_lattice(H.KL, Mat::diagonal(H.coord_orders));
  Canonicalized c = canonicalize_presentation(H.ring, H.KL.cols(), rel);
  H.group = c.group;
  H.to_can = c.to_can;
  H.from_can = c.from_can;
  return H;
}

/// The space of natural transformations as a canonical group.
inline Group hom_module_group(const FKModule& A, const FKModule& B, int parity = 0) {
  return hom_space(A, B, parity).group;
}

// ---------------------------------------------------------------------------
// Isomorphism search.

enum class IsoStatus { FOUND, REFUTED, UNKNOWN };

struct IsoResult {
  IsoStatus status = IsoStatus::UNKNOWN;
  std::optional<ModuleHom> iso;   // set when FOUND; verified
  std::optional<Run> witness;     // run with mismatched groups, when pointwise
};

struct IsoSearchConfig {
  std::size_t trials = 200;        // random candidates
  long coeff_bound = 4;            // coefficient range for random combos
  std::uint64_t seed = 0;
  long search_radius = 2;          // box radius for free generators
  std::size_t max_enumeration = 20000;
};

inline IsoResult find_iso(const FKModule& A, const FKModule& B,
                          const IsoSearchConfig& cfg = {}) {
  if (A.level != B.level || A.ring != B.ring)
    throw InputError("find_iso: level or ring mismatch");
  auto rs = runs(A.level);
  for (std::size_t i = 0; i < rs.size(); ++i)
    if (A.groups[i] != B.groups[i])
      return {IsoStatus::REFUTED, std::nullopt, rs[i]};

  HomSpace H = hom_space(A, B, 0);
  auto accept = [&](const std::vector<Int>& c) -> std::optional<ModuleHom> {
    ModuleHom h = H.from_coords(c);
    if (is_componentwise_iso(A, h) && is_natural(A, B, h)) return h;
    return std::nullopt;
  };

  std::size_t g = H.group.gens();
  std::vector<Int> c(g);
  if (auto h = accept(c)) return {IsoStatus::FOUND, std::move(*h), std::nullopt};

  // Exhaustive box; complete (hence refuting) when the hom group is
  // finite and small enough.
  std::vector<long> lo(g), hi(g);
  bool complete = true;
  double total = 1;
  for (std::size_t j = 0; j < g; ++j) {
    Int o = H.group.order_of(j);
    if (o == 0) {
      lo[j] = -cfg.search_radius;
      hi[j] = cfg.search_radius;
      complete = false;
    } else if (o.fits_slong_p()) {
      lo[j] = 0;
      hi[j] = o.get_si() - 1;
    } else {
      lo[j] = hi[j] = 0;
      complete = false;
      total = static_cast<double>(cfg.max_enumeration) + 1;
    }
    total *= hi[j] - lo[j] + 1;
  }
  if (total <= static_cast<double>(cfg.max_enumeration)) {
    for (std::size_t j = 0; j < g; ++j) c[j] = lo[j];
    while (true) {
      if (auto h = accept(c)) return {IsoStatus::FOUND, std::move(*h), std::nullopt};
      std::size_t j = 0;
      while (j < g && c[j] == hi[j]) {
        c[j] = lo[j];
        ++j;
      }
      if (j == g) break;
      c[j] += 1;
    }
    if (complete) return {IsoStatus::REFUTED, std::nullopt, std::nullopt};
  } else {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_int_distribution<long> d(-cfg.coeff_bound, cfg.coeff_bound);
    for (std::size_t t = 0; t < cfg.trials; ++t) {
      for (std::size_t j = 0; j < g; ++j) c[j] = d(rng);
      if (auto h = accept(c)) return {IsoStatus::FOUND, std::move(*h), std::nullopt};
    }
  }
  return {IsoStatus::UNKNOWN, std::nullopt, std::nullopt};
}

}  // namespace fkt
