#pragma once

#include "fkt/tower.hpp"

namespace fkt {

/// Interval endpoint: the literal 0 or 1, or the k-th dense-sequence
/// value d_k (1-based).
struct Endpoint {
  bool literal = true;
  int lit = 0;          // 0 or 1 when literal
  std::size_t cut = 0;  // 1-based sequence index otherwise

  static Endpoint lit0() { return {true, 0, 0}; }
  static Endpoint lit1() { return {true, 1, 0}; }
  static Endpoint at_cut(std::size_t k) { return {false, 0, k}; }
};

struct FieldBlock {
  Endpoint left, right;
  bool left_closed = true, right_closed = true;
  GradedGroup fiber;
};

/// Declarative model of a field trivial on each block's interval, with
/// the block's fiber K-theory.
struct FieldSpec {
  CoeffRing ring = CoeffRing::Z;
  std::vector<FieldBlock> blocks;
};

namespace detail {

inline Rat endpoint_value(const DenseSequence& seq, const Endpoint& e) {
  if (e.literal) return Rat(e.lit);
  if (e.cut == 0 || e.cut > seq.values.size())
    throw InputError("endpoint cut index out of range");
  return seq.values[e.cut - 1];
}

}  // namespace detail

inline void check_field_spec(const FieldSpec& spec, const DenseSequence& seq) {
  for (std::size_t b = 0; b < spec.blocks.size(); ++b) {
    const FieldBlock& blk = spec.blocks[b];
    std::string tag = "block " + std::to_string(b);
    if (blk.fiber.ring() != spec.ring)
      throw InputError(tag + ": fiber over wrong coefficient ring");
    // An interval open at 0 or 1 is never a union of point preimages of
    // a level, so literal endpoints must be closed.
    if (blk.left.literal && (blk.left.lit != 0 || !blk.left_closed))
      throw InputError(tag + ": left endpoint must be the closed literal 0 or a cut");
    if (blk.right.literal && (blk.right.lit != 1 || !blk.right_closed))
      throw InputError(tag + ": right endpoint must be the closed literal 1 or a cut");
    Rat l = detail::endpoint_value(seq, blk.left);
    Rat r = detail::endpoint_value(seq, blk.right);
    if (l > r || (l == r && !(blk.left_closed && blk.right_closed)))
      throw InputError(tag + ": degenerate interval");
  }
}

/// Chain run of a block's interval at one level. Endpoints must be
/// realizable: literal, or among the level's cuts.
inline Run block_run(const DenseSequence& seq, const FieldBlock& blk,
                     std::size_t block_index, const Level& lv) {
  auto cut_chain_pos = [&](const Endpoint& e) -> std::size_t {
    if (e.cut > lv.n) throw LevelTooCoarse(block_index, e.cut);
    Rat v = detail::endpoint_value(seq, e);
    for (std::size_t j = 0; j < lv.cuts.size(); ++j)
      if (lv.cuts[j] == v) return 2 * j + 1;
    throw InputError("cut value missing from level");  // unreachable
  };
  std::size_t lo, hi;
  if (blk.left.literal) {
    lo = 0;
  } else {
    std::size_t p = cut_chain_pos(blk.left);
    lo = blk.left_closed ? p : p + 1;
  }
  if (blk.right.literal) {
    hi = 2 * lv.n;
  } else {
    std::size_t p = cut_chain_pos(blk.right);
    hi = blk.right_closed ? p : p - 1;
  }
  if (lo > hi) throw InputError("block " + std::to_string(block_index) +
                                ": empty run at level " + std::to_string(lv.n));
  return {lo, hi};
}

/// One level of the spec: the direct sum of the blocks' elementary
/// modules. Every block endpoint must be realizable at this level.
inline FKModule realize(const FieldSpec& spec, const DenseSequence& seq, std::size_t n) {
  check_field_spec(spec, seq);
  Level lv = build_level(seq, n);
  std::vector<FKModule> parts;
  parts.reserve(spec.blocks.size());
  for (std::size_t b = 0; b < spec.blocks.size(); ++b)
    parts.push_back(
        elementary_module(lv, block_run(seq, spec.blocks[b], b, lv), spec.blocks[b].fiber));
  std::vector<const FKModule*> ptrs;
  for (const auto& p : parts) ptrs.push_back(&p);
  return direct_sum(ptrs, lv, spec.ring);
}

/// Levels up to N: realized from the first level where every endpoint
/// exists, coarsened below it.
inline Tower realize_tower(const FieldSpec& spec, const DenseSequence& seq,
                           std::size_t N) {
  check_field_spec(spec, seq);
  if (N == 0) throw InputError("realize_tower: depth must be >= 1");
  std::size_t n0 = 1;
  for (std::size_t b = 0; b < spec.blocks.size(); ++b) {
    const FieldBlock& blk = spec.blocks[b];
    std::size_t req = std::max(blk.left.literal ? std::size_t{1} : blk.left.cut,
                               blk.right.literal ? std::size_t{1} : blk.right.cut);
    if (req > N) throw LevelTooCoarse(b, req);
    n0 = std::max(n0, req);
  }
  std::vector<FKModule> mods(N);
  for (std::size_t n = n0; n <= N; ++n) mods[n - 1] = realize(spec, seq, n);
  for (std::size_t n = n0; n > 1; --n) {
    Level coarse = build_level(seq, n - 1);
    mods[n - 2] = coarsen(mods[n - 1], refinement(seq, mods[n - 1].level, coarse), coarse);
  }
  return build_tower(seq, std::move(mods));
}

}  // namespace fkt
