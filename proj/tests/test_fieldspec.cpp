#include <catch2/catch_amalgamated.hpp>

#include "fkt/fieldspec.hpp"

using namespace fkt;

namespace {

const DenseSequence seq = DenseSequence::dyadic(6);

GradedGroup gq() { return {Group(CoeffRing::Q, 1), Group(CoeffRing::Q, 0)}; }
GradedGroup gz() { return {Group(CoeffRing::Z, 1), Group(CoeffRing::Z, 0)}; }

FieldBlock block(Endpoint l, bool lc, Endpoint r, bool rc, GradedGroup fib) {
  return {l, r, lc, rc, std::move(fib)};
}

}  // namespace

TEST_CASE("closed block [0, d1] realizes the elementary module on {u0,c1}") {
  FieldSpec spec{CoeffRing::Q,
                 {block(Endpoint::lit0(), true, Endpoint::at_cut(1), true, gq())}};
  FKModule m = realize(spec, seq, 1);
  REQUIRE(modules_equal(m, elementary_module(build_level(seq, 1), Run{0, 1}, gq())));
}

TEST_CASE("open block (d2, d1) realizes with suspension values") {
  FieldSpec spec{CoeffRing::Z,
                 {block(Endpoint::at_cut(2), false, Endpoint::at_cut(1), false, gz())}};
  FKModule m = realize(spec, seq, 2);
  // d2 = 1/4 < d1 = 1/2: chain positions 1 and 3, so the open run is {2,2}
  REQUIRE(modules_equal(m, elementary_module(build_level(seq, 2), Run{2, 2}, gz())));
  REQUIRE(m.group(Run{2, 2}) == suspend(gz()));
}

TEST_CASE("missing cut raises LevelTooCoarse with the required level") {
  FieldSpec spec{CoeffRing::Z,
                 {block(Endpoint::at_cut(3), true, Endpoint::lit1(), true, gz())}};
  try {
    realize(spec, seq, 2);
    FAIL("expected LevelTooCoarse");
  } catch (const LevelTooCoarse& e) {
    REQUIRE(e.block == 0);
    REQUIRE(e.required_level == 3);
  }
  REQUIRE_THROWS_AS(realize_tower(spec, seq, 2), LevelTooCoarse);
}

TEST_CASE("literal endpoints must be closed") {
  FieldSpec spec{CoeffRing::Z,
                 {block(Endpoint::lit0(), false, Endpoint::at_cut(1), true, gz())}};
  REQUIRE_THROWS_AS(realize(spec, seq, 1), InputError);
}

TEST_CASE("degenerate intervals are rejected") {
  FieldSpec bad{CoeffRing::Z,
                {block(Endpoint::at_cut(1), true, Endpoint::at_cut(1), false, gz())}};
  REQUIRE_THROWS_AS(check_field_spec(bad, seq), InputError);
  FieldSpec pt{CoeffRing::Z,
               {block(Endpoint::at_cut(1), true, Endpoint::at_cut(1), true, gz())}};
  REQUIRE_NOTHROW(check_field_spec(pt, seq));
  // reversed endpoints: d1 = 1/2 > d2 = 1/4
  FieldSpec rev{CoeffRing::Z,
                {block(Endpoint::at_cut(1), true, Endpoint::at_cut(2), true, gz())}};
  REQUIRE_THROWS_AS(check_field_spec(rev, seq), InputError);
}

TEST_CASE("realize commutes with coarsening over a block corpus") {
  std::vector<FieldSpec> corpus = {
      {CoeffRing::Z, {block(Endpoint::lit0(), true, Endpoint::at_cut(1), true, gz())}},
      {CoeffRing::Z,
       {block(Endpoint::at_cut(2), false, Endpoint::at_cut(1), false, gz()),
        block(Endpoint::at_cut(1), true, Endpoint::lit1(), true,
              {Group(CoeffRing::Z, 0, {3}), Group(CoeffRing::Z, 1)})}},
      {CoeffRing::Z, {block(Endpoint::at_cut(2), true, Endpoint::at_cut(2), true, gz())}},
  };
  for (const FieldSpec& spec : corpus)
    for (std::size_t n = 2; n <= 4; ++n) {
      FKModule fine = realize(spec, seq, n + 1);
      Level coarse_lv = build_level(seq, n);
      FKModule c = coarsen(fine, refinement(seq, fine.level, coarse_lv), coarse_lv);
      REQUIRE(modules_equal(c, realize(spec, seq, n)));
      REQUIRE(validate(fine).ok());
      REQUIRE(is_exact(fine));
    }
}

TEST_CASE("realize_tower builds a valid tower from a two-cut spec") {
  FieldSpec spec{CoeffRing::Q,
                 {block(Endpoint::lit0(), true, Endpoint::at_cut(2), true, gq()),
                  block(Endpoint::at_cut(1), false, Endpoint::lit1(), true, gq())}};
  Tower t = realize_tower(spec, seq, 4);
  REQUIRE(t.depth() == 4);
  for (std::size_t n = 1; n <= 4; ++n) REQUIRE(is_exact(t.at_level(n)));
  // determinism: realizing twice gives structurally equal towers
  Tower t2 = realize_tower(spec, seq, 4);
  for (std::size_t n = 1; n <= 4; ++n)
    REQUIRE(modules_equal(t.at_level(n), t2.at_level(n)));
}

TEST_CASE("empty spec realizes the zero tower") {
  FieldSpec spec{CoeffRing::Z, {}};
  Tower t = realize_tower(spec, seq, 3);
  for (std::size_t n = 1; n <= 3; ++n)
    REQUIRE(modules_equal(t.at_level(n),
                          FKModule::zero(build_level(seq, n), CoeffRing::Z)));
}

TEST_CASE("rationalizing fibers commutes with realization") {
  FieldSpec zspec{CoeffRing::Z,
                  {block(Endpoint::lit0(), true, Endpoint::at_cut(1), true,
                         {Group(CoeffRing::Z, 2, {2}), Group(CoeffRing::Z, 1)})}};
  FieldSpec qspec = zspec;
  qspec.ring = CoeffRing::Q;
  for (auto& b : qspec.blocks) b.fiber = rationalize(b.fiber);
  REQUIRE(modules_equal(realize(qspec, seq, 2), rationalize_module(realize(zspec, seq, 2))));
}
