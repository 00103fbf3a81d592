// Acceptance gate: one line per criterion, [PASS] or [FAIL].
// Exit status is the number of failed criteria.

#include <chrono>
#include <cstdio>
#include <functional>
#include <set>

#include "fkt/tower.hpp"
#include "module_util.hpp"

using namespace fkt;
using namespace fkt::testutil;

namespace {

int failures = 0;

void criterion(int k, const char* what, double limit_s,
               const std::function<bool()>& body) {
  auto t0 = std::chrono::steady_clock::now();
  bool ok = false;
  std::string err;
  try {
    ok = body();
  } catch (const std::exception& e) {
    err = e.what();
  }
  double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (limit_s > 0 && dt > limit_s) ok = false;
  if (!ok) ++failures;
  std::printf("[%s] %d. %s (%.1fs%s%s)\n", ok ? "PASS" : "FAIL", k, what, dt,
              err.empty() ? "" : "; exception: ", err.c_str());
  std::fflush(stdout);
}

// ---- criterion 3 oracle: brute-force admissible pairs ----------------------

std::set<std::size_t> min_open(std::size_t p, std::size_t n) {
  std::set<std::size_t> s{p};
  if (point_is_cut(p)) {
    if (p >= 1) s.insert(p - 1);
    if (p + 1 <= 2 * n) s.insert(p + 1);
  }
  return s;
}

bool subset_rel_open(const std::set<std::size_t>& S, const Run& Y, std::size_t n) {
  for (std::size_t p : S)
    for (std::size_t q : min_open(p, n))
      if (Y.contains(q) && !S.count(q)) return false;
  return true;
}

bool subset_connected(const std::set<std::size_t>& S) {
  return !S.empty() && *S.rbegin() - *S.begin() + 1 == S.size();
}

std::set<std::pair<std::size_t, std::size_t>> brute_force_admissible(const Run& Y,
                                                                     std::size_t n) {
  std::vector<std::size_t> pts;
  for (std::size_t p = Y.lo; p <= Y.hi; ++p) pts.push_back(p);
  std::set<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t mask = 1; mask + 1 < (1u << pts.size()); ++mask) {
    std::set<std::size_t> U, Q;
    for (std::size_t i = 0; i < pts.size(); ++i)
      ((mask >> i) & 1 ? U : Q).insert(pts[i]);
    if (!subset_connected(U) || !subset_connected(Q)) continue;
    if (!subset_rel_open(U, Y, n)) continue;
    out.insert({*U.begin(), *U.rbegin()});
  }
  return out;
}

// ---- shared helpers --------------------------------------------------------

std::string fingerprint(const ModuleHom& h) {
  std::string s;
  for (const GradedHom& c : h.comps) {
    GradedHom r = c.reduced();
    for (const Mat* m : {&r.even.mat, &r.odd.mat})
      for (std::size_t i = 0; i < m->rows(); ++i)
        for (std::size_t j = 0; j < m->cols(); ++j)
          s += (*m)(i, j).get_str() + ",";
    s += ";";
  }
  return s;
}

/// All elements of a finite group as coordinate tuples in the hom space.
std::vector<std::vector<Int>> enumerate_finite(const Group& g) {
  if (g.rank != 0) throw InputError("enumerate_finite on infinite group");
  std::vector<std::vector<Int>> out;
  std::vector<long> c(g.torsion.size(), 0);
  for (;;) {
    out.emplace_back(c.begin(), c.end());
    std::size_t j = 0;
    while (j < c.size()) {
      if (++c[j] < g.torsion[j].get_si()) break;
      c[j++] = 0;
    }
    if (j == c.size()) break;
    if (c.empty()) break;
  }
  return out;
}

const std::vector<GradedGroup> kFiniteFibers = {
    {Group(CoeffRing::Z, 0, {2}), Group(CoeffRing::Z, 0)},
    {Group(CoeffRing::Z, 0, {3}), Group(CoeffRing::Z, 0)},
    {Group(CoeffRing::Z, 0, {4}), Group(CoeffRing::Z, 0)},
    {Group(CoeffRing::Z, 0), Group(CoeffRing::Z, 0, {2})},
    {Group(CoeffRing::Z, 0, {2}), Group(CoeffRing::Z, 0, {2})},
};

}  // namespace

int main() {
  const DenseSequence seq = DenseSequence::dyadic(8);

  criterion(1, "SNF vs minor-gcd oracle, 500 random matrices", 5.0, [&] {
    std::mt19937_64 rng(1);
    for (int t = 0; t < 500; ++t) {
      std::uniform_int_distribution<std::size_t> dim(1, 4);
      Mat m = random_matrix(rng, dim(rng), dim(rng), -5, 5);
      SmithForm s = smith_normal_form(m);
      if (s.U * m * s.V != s.D) return false;
      if (!is_unimodular(s.U) || !is_unimodular(s.V)) return false;
      std::vector<Int> expect = minor_gcd_invariant_factors(m);
      std::vector<Int> got;
      for (std::size_t i = 0; i < s.diag_len() && s.diag(i) != 0; ++i)
        got.push_back(s.diag(i));
      if (got != expect) return false;
    }
    return true;
  });

  criterion(2, "Hom/Ext tables: Hom(Z/m,Z/n) = Ext1(Z/m,Z/n) = Z/gcd, m,n <= 12",
            0, [&] {
    for (long m = 1; m <= 12; ++m)
      for (long n = 1; n <= 12; ++n) {
        Group a(CoeffRing::Z, 0, m > 1 ? std::vector<Int>{m} : std::vector<Int>{});
        Group b(CoeffRing::Z, 0, n > 1 ? std::vector<Int>{n} : std::vector<Int>{});
        long g = std::gcd(m, n);
        Group expect(CoeffRing::Z, 0, g > 1 ? std::vector<Int>{g} : std::vector<Int>{});
        if (hom_group(a, b) != expect) return false;
        if (ext_group(a, b) != expect) return false;
      }
    return true;
  });

  criterion(3, "run counts (2n+1)(2n+2)/2 for n <= 6; admissible pairs vs oracle, n <= 3",
            10.0, [&] {
    for (std::size_t n = 0; n <= 6; ++n) {
      Level lv = build_level(seq, n);
      if (runs(lv).size() != (2 * n + 1) * (2 * n + 2) / 2) return false;
    }
    for (std::size_t n = 0; n <= 3; ++n) {
      Level lv = build_level(seq, n);
      for (const Run& y : runs(lv)) {
        std::set<std::pair<std::size_t, std::size_t>> got;
        for (const auto& p : admissible_pairs(y)) got.insert({p.U.lo, p.U.hi});
        if (got != brute_force_admissible(y, n)) return false;
      }
    }
    return true;
  });

  criterion(4, "elementary modules valid+exact, 5 fibers, all runs, n <= 4; coarsen compat",
            60.0, [&] {
    const std::vector<GradedGroup> fibers = {
        {Group(CoeffRing::Z, 1), Group(CoeffRing::Z, 0)},
        {Group(CoeffRing::Z, 0), Group(CoeffRing::Z, 1)},
        {Group(CoeffRing::Z, 0, {2}), Group(CoeffRing::Z, 0)},
        {Group(CoeffRing::Z, 1, {4}), Group(CoeffRing::Z, 0, {2})},
        {Group(CoeffRing::Z, 2), Group(CoeffRing::Z, 1)},
    };
    for (std::size_t n = 1; n <= 4; ++n) {
      Level lv = build_level(seq, n);
      for (const Run& z : runs(lv))
        for (const GradedGroup& f : fibers) {
          FKModule e = elementary_module(lv, z, f);
          if (!validate(e).ok() || !is_exact(e)) return false;
          for (const auto& p : e.pairs) {
            int nonzero = !e.group(p.U).is_trivial() + !e.group(p.Y).is_trivial() +
                          !e.group(p.Q).is_trivial();
            if (nonzero > 2) return false;
          }
        }
    }
    for (std::size_t n = 1; n <= 3; ++n) {
      Level coarse = build_level(seq, n), fine = build_level(seq, n + 1);
      Refinement ref = refinement(seq, fine, coarse);
      for (const Run& y : runs(coarse))
        for (const GradedGroup& f : fibers) {
          FKModule up = elementary_module(fine, preimage_run(ref, y), f);
          if (!modules_equal(coarsen(up, ref, coarse), elementary_module(coarse, y, f)))
            return false;
        }
    }
    return true;
  });

  criterion(5, "hom_space equals exhaustive enumeration on 20 seeded finite pairs, n <= 2",
            120.0, [&] {
    std::mt19937_64 rng(2024);
    int accepted = 0;
    while (accepted < 20) {
      std::uniform_int_distribution<std::size_t> pickn(1, 2);
      std::size_t n = pickn(rng);
      Level lv = build_level(seq, n);
      auto rs = runs(lv);
      std::uniform_int_distribution<std::size_t> pickr(0, rs.size() - 1);
      std::uniform_int_distribution<std::size_t> pickf(0, kFiniteFibers.size() - 1);
      FKModule a = elementary_module(lv, rs[pickr(rng)], kFiniteFibers[pickf(rng)]);
      FKModule b = elementary_module(lv, rs[pickr(rng)], kFiniteFibers[pickf(rng)]);
      HomSpace h = hom_space(a, b);
      // total size of the raw coordinate box
      double total = 1;
      for (const Int& o : h.coord_orders) total *= o.get_d();
      if (total > double(1 << 18)) continue;
      ++accepted;
      std::set<std::string> brute;
      std::vector<Int> x(h.offset.back(), 0);
      std::vector<long> c(x.size(), 0);
      for (;;) {
        for (std::size_t j = 0; j < x.size(); ++j) x[j] = c[j];
        ModuleHom m = h.from_coord_vec(x);
        if (is_natural(a, b, m)) brute.insert(fingerprint(m));
        std::size_t j = 0;
        while (j < c.size()) {
          if (++c[j] < h.coord_orders[j].get_si()) break;
          c[j++] = 0;
        }
        if (j == c.size()) break;
        if (c.empty()) break;
      }
      if (h.group.rank != 0) return false;
      std::set<std::string> solved;
      for (const auto& coords : enumerate_finite(h.group))
        solved.insert(fingerprint(h.from_coords(coords)));
      if (solved != brute) return false;
      if (h.group.order() != Int(long(brute.size()))) return false;
    }
    return true;
  });

  criterion(6, "five-lemma analog: open-run invertibility implies full invertibility",
            0, [&] {
    for (std::size_t n = 1; n <= 2; ++n) {
      Level lv = build_level(seq, n);
      std::vector<FKModule> family;
      for (const Run& z : runs(lv))
        for (const GradedGroup& f : kFiniteFibers)
          family.push_back(elementary_module(lv, z, f));
      for (const FKModule& a : family)
        for (const FKModule& b : family) {
          HomSpace h = hom_space(a, b);
          if (h.group.rank != 0) return false;
          for (const auto& coords : enumerate_finite(h.group)) {
            ModuleHom phi = h.from_coords(coords);
            if (is_componentwise_iso(a, phi, IsoScope::OPEN_RUNS) &&
                !is_componentwise_iso(a, phi, IsoScope::ALL_RUNS))
              return false;
          }
        }
    }
    return true;
  });

  criterion(7, "randomized iso recovery over Q: >= 99/100 FOUND, 100% sound", 0, [&] {
    Level l1 = build_level(seq, 1);
    auto rs = runs(l1);
    int found = 0;
    for (int inst = 0; inst < 100; ++inst) {
      std::mt19937_64 rng(7000 + inst);
      std::uniform_int_distribution<int> nblocks(1, 5), dim(0, 3);
      std::uniform_int_distribution<std::size_t> pickr(0, rs.size() - 1);
      std::vector<FKModule> blocks;
      for (int k = nblocks(rng); k-- > 0;) {
        int d0 = dim(rng), d1 = dim(rng);
        if (d0 + d1 == 0) d0 = 1;
        blocks.push_back(elementary_module(
            l1, rs[pickr(rng)],
            {Group(CoeffRing::Q, d0), Group(CoeffRing::Q, d1)}));
      }
      std::vector<const FKModule*> ptrs;
      for (const FKModule& m : blocks) ptrs.push_back(&m);
      FKModule a = direct_sum(ptrs, l1, CoeffRing::Q);
      std::vector<GradedHom> P, Pinv;
      random_transforms(a, rng, P, Pinv);
      FKModule b = twist(a, P, Pinv);
      IsoSearchConfig cfg;
      cfg.trials = 32;
      cfg.coeff_bound = 1000000;
      cfg.seed = 9000 + inst;
      IsoResult r = find_iso(a, b, cfg);
      if (r.status == IsoStatus::FOUND) {
        // soundness: every FOUND must re-verify
        if (!is_natural(a, b, *r.iso) || !is_componentwise_iso(a, *r.iso)) return false;
        ++found;
      }
    }
    return found >= 99;
  });

  criterion(8, "end-to-end certification: DIVISIBLE/FREE/PARITY/REFUTED/NOT_CERTIFIED",
            120.0, [&] {
    // (a) twisted Q pair at depth 5 -> DIVISIBLE with a verified tower iso
    auto run_a = [&] {
      Tower a = elementary_tower(seq, 5, Run{0, 2},
                                 {Group(CoeffRing::Q, 1), Group(CoeffRing::Q, 0)});
      std::mt19937_64 rng(5);
      std::vector<GradedHom> P, Pinv;
      random_transforms(a.at_level(5), rng, P, Pinv);
      Tower b = tower_from_top(seq, twist(a.at_level(5), P, Pinv));
      IsoSearchConfig cfg;
      cfg.seed = 7;
      return certify_classification(a, b, cfg);
    };
    ClassificationCertificate ca = run_a();
    if (ca.status != CertStatus::CERTIFIED || ca.route != VanishingRoute::DIVISIBLE)
      return false;
    if (ca.tower_iso.size() != 5) return false;
    // determinism under the fixed seed
    ClassificationCertificate ca2 = run_a();
    if (ca2.status != ca.status || ca2.route != ca.route ||
        ca2.conclusion != ca.conclusion || ca2.tower_iso.size() != ca.tower_iso.size())
      return false;
    for (std::size_t i = 0; i < ca.tower_iso.size(); ++i)
      if (fingerprint(ca.tower_iso[i]) != fingerprint(ca2.tower_iso[i])) return false;

    // (b) pointwise-free Z pair with mixed degrees -> FREE
    Level l2 = build_level(seq, 2);
    GradedGroup gz{Group(CoeffRing::Z, 1), Group(CoeffRing::Z, 0)};
    FKModule m0 = elementary_module(l2, l2.full_run(), gz);
    FKModule m1 = elementary_module(l2, Run{1, 1}, suspend(gz));
    FKModule top = direct_sum({&m0, &m1}, l2, CoeffRing::Z);
    Tower fz = tower_from_top(seq, top);
    ClassificationCertificate cb = certify_classification(fz, fz);
    if (cb.status != CertStatus::CERTIFIED || cb.route != VanishingRoute::FREE)
      return false;

    // (c) parity-vanishing pair -> PARITY
    Tower pz = elementary_tower(seq, 2, Run{1, 1}, gz);
    ClassificationCertificate cc = certify_classification(pz, pz);
    if (cc.status != CertStatus::CERTIFIED || cc.route != VanishingRoute::PARITY)
      return false;

    // (d) rank mismatch -> REFUTED with a witness run
    Tower q1 = elementary_tower(seq, 2, Run{0, 2},
                                {Group(CoeffRing::Q, 1), Group(CoeffRing::Q, 0)});
    Tower q2 = elementary_tower(seq, 2, Run{0, 2},
                                {Group(CoeffRing::Q, 2), Group(CoeffRing::Q, 0)});
    ClassificationCertificate cd = certify_classification(q1, q2);
    if (cd.status != CertStatus::REFUTED || !cd.witness_run.has_value()) return false;

    // (e) Z/2 fibers -> NOT_CERTIFIED citing the torsion remark
    Tower tz = elementary_tower(seq, 2, Run{1, 1},
                                {Group(CoeffRing::Z, 0, {2}), Group(CoeffRing::Z, 0)});
    ClassificationCertificate ce = certify_classification(tz, tz);
    if (ce.status != CertStatus::NOT_CERTIFIED) return false;
    if (ce.reason.find("torsion") == std::string::npos) return false;
    return true;
  });

  criterion(9, "lim/lim1: constant ML_AT(1); x2 depth 6 fails; eventually-constant ML_AT(3)",
            0, [&] {
    Group z(CoeffRing::Z, 1);
    auto scalar = [&](std::vector<long> mults) {
      GroupTower t;
      t.groups.assign(mults.size() + 1, z);
      for (long m : mults) t.maps.push_back(GroupHom(z, z, Mat(1, 1, {m})));
      return t;
    };
    GroupTower constant = scalar({1, 1, 1, 1});
    MLStatus s1 = lim1_status(constant);
    LimResult l1 = lim(constant);
    if (!s1.ml || s1.stage != 1 || !l1.stabilized || l1.group != z) return false;

    GroupTower doubling = scalar({2, 2, 2, 2, 2});
    MLStatus s2 = lim1_status(doubling);
    if (s2.ml || s2.stage != 6 || lim(doubling).stabilized) return false;

    GroupTower eventual = scalar({1, 2, 1, 1});
    MLStatus s3 = lim1_status(eventual);
    if (!s3.ml || s3.stage != 3 || lim(eventual).group != z) return false;
    return true;
  });

  std::printf("%d/9 criteria passed\n", 9 - failures);
  return failures;
}
