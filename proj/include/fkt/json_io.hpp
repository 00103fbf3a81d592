#pragma once

#include <json.hpp>

#include "fkt/fieldspec.hpp"

namespace fkt::io {

using nlohmann::json;

// Integers are emitted as numbers when they fit, decimal strings
// otherwise; both forms parse.
inline json to_json(const Int& v) {
  if (v.fits_slong_p()) return v.get_si();
  return v.get_str();
}

inline Int int_from_json(const json& j) {
  if (j.is_number_integer()) return Int(static_cast<long>(j.get<long long>()));
  if (j.is_string()) return Int(j.get<std::string>());
  throw InputError("expected integer or decimal string");
}

inline std::string rat_str(const Rat& r) {
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline Rat rat_from_json(const json& j) {
  if (!j.is_string()) throw InputError("expected rational string \"p/q\"");
  Rat r(j.get<std::string>());
  r.canonicalize();
  return r;
}

inline json seq_to_json(const DenseSequence& s) {
  json a = json::array();
  for (const Rat& v : s.values) a.push_back(rat_str(v));
  return a;
}

inline DenseSequence seq_from_json(const json& j) {
  std::vector<Rat> v;
  for (const auto& e : j) v.push_back(rat_from_json(e));
  return DenseSequence(std::move(v));
}

inline json to_json(const Run& r) { return {{"lo", r.lo}, {"hi", r.hi}}; }

inline Run run_from_json(const json& j) {
  return {j.at("lo").get<std::size_t>(), j.at("hi").get<std::size_t>()};
}

inline json level_to_json(const Level& lv) {
  json cuts = json::array();
  for (const Rat& c : lv.cuts) cuts.push_back(rat_str(c));
  return {{"n", lv.n}, {"cuts", cuts}};
}

inline const char* ring_name(CoeffRing r) { return r == CoeffRing::Z ? "Z" : "Q"; }

inline CoeffRing ring_from_json(const json& j) {
  std::string s = j.get<std::string>();
  if (s == "Z") return CoeffRing::Z;
  if (s == "Q") return CoeffRing::Q;
  throw InputError("ring must be \"Z\" or \"Q\"");
}

inline json group_part_to_json(const Group& g) {
  json t = json::array();
  for (const Int& d : g.torsion) t.push_back(to_json(d));
  return {{"rank", g.rank}, {"torsion", t}};
}

inline Group group_part_from_json(CoeffRing ring, const json& j) {
  std::vector<Int> torsion;
  for (const auto& d : j.at("torsion")) torsion.push_back(int_from_json(d));
  return Group(ring, j.at("rank").get<std::size_t>(), std::move(torsion));
}

inline json to_json(const GradedGroup& g) {
  return {{"ring", ring_name(g.ring())},
          {"deg0", group_part_to_json(g.deg0)},
          {"deg1", group_part_to_json(g.deg1)}};
}

inline GradedGroup graded_group_from_json(const json& j) {
  CoeffRing ring = ring_from_json(j.at("ring"));
  return {group_part_from_json(ring, j.at("deg0")),
          group_part_from_json(ring, j.at("deg1"))};
}

inline json to_json(const Mat& m) {
  json data = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) data.push_back(to_json(m(i, j)));
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

inline Mat mat_from_json(const json& j) {
  std::size_t rows = j.at("rows").get<std::size_t>();
  std::size_t cols = j.at("cols").get<std::size_t>();
  std::vector<Int> data;
  for (const auto& e : j.at("data")) data.push_back(int_from_json(e));
  return Mat(rows, cols, std::move(data));
}

inline std::string run_key(const Run& r) {
  return std::to_string(r.lo) + "-" + std::to_string(r.hi);
}

inline json module_to_json(const FKModule& m) {
  json groups = json::object();
  for (const Run& r : runs(m.level)) groups[run_key(r)] = to_json(m.group(r));
  json maps = json::array();
  for (std::size_t i = 0; i < m.pairs.size(); ++i) {
    const auto& p = m.pairs[i];
    const auto& pm = m.maps[i];
    maps.push_back({{"Y", to_json(p.Y)},
                    {"U", to_json(p.U)},
                    {"side", p.side == Side::LEFT ? "LEFT" : "RIGHT"},
                    {"iota", {to_json(pm.iota.even.mat), to_json(pm.iota.odd.mat)}},
                    {"rho", {to_json(pm.rho.even.mat), to_json(pm.rho.odd.mat)}},
                    {"delta", {to_json(pm.delta.even.mat), to_json(pm.delta.odd.mat)}}});
  }
  return {{"level", m.level.n},
          {"seq", seq_to_json(DenseSequence{std::vector<Rat>(m.level.cuts)})},
          {"ring", ring_name(m.ring)},
          {"groups", groups},
          {"maps", maps}};
}

inline FKModule module_from_json(const json& j,
                                 const std::optional<DenseSequence>& seq = {}) {
  FKModule m;
  std::size_t n = j.at("level").get<std::size_t>();
  DenseSequence s = seq               ? *seq
                    : j.contains("seq") ? seq_from_json(j.at("seq"))
                                        : DenseSequence::dyadic(n);
  m.level = build_level(s, n);
  m.ring = ring_from_json(j.at("ring"));
  auto rs = runs(m.level);
  m.groups.resize(rs.size(), zero_graded(m.ring));
  const json& groups = j.at("groups");
  if (groups.size() != rs.size()) throw InputError("module groups table incomplete");
  for (const Run& r : rs) {
    if (!groups.contains(run_key(r)))
      throw InputError("module missing group at run " + run_key(r));
    m.groups[run_index(m.level, r)] = graded_group_from_json(groups.at(run_key(r)));
  }
  m.pairs = all_admissible_pairs(m.level);
  m.maps.resize(m.pairs.size());
  std::vector<bool> seen(m.pairs.size(), false);
  const json& maps = j.at("maps");
  if (maps.size() != m.pairs.size()) throw InputError("module maps list incomplete");
  auto graded = [&](const json& pair_mats, const GradedGroup& s0, const GradedGroup& t0,
                    int parity) {
    return GradedHom(parity,
                     GroupHom(s0.deg0, t0.deg(parity), mat_from_json(pair_mats.at(0))),
                     GroupHom(s0.deg1, t0.deg(parity + 1), mat_from_json(pair_mats.at(1))));
  };
  for (const auto& e : maps) {
    Run Y = run_from_json(e.at("Y")), U = run_from_json(e.at("U"));
    std::size_t i = m.pair_index(Y, U);
    if (seen[i]) throw InputError("duplicate map for pair at run " + run_key(Y));
    seen[i] = true;
    const auto& p = m.pairs[i];
    std::string side = e.at("side").get<std::string>();
    if ((p.side == Side::LEFT) != (side == "LEFT"))
      throw InputError("map side disagrees with the admissible pair");
    m.maps[i] = {graded(e.at("iota"), m.group(p.U), m.group(p.Y), 0),
                 graded(e.at("rho"), m.group(p.Y), m.group(p.Q), 0),
                 graded(e.at("delta"), m.group(p.Q), m.group(p.U), 1)};
  }
  return m;
}

inline json tower_to_json(const Tower& t) {
  json mods = json::array();
  for (const FKModule& m : t.modules) mods.push_back(module_to_json(m));
  return {{"seq", seq_to_json(t.seq)}, {"depth", t.depth()}, {"modules", mods}};
}

inline Tower tower_from_json(const json& j) {
  DenseSequence seq = seq_from_json(j.at("seq"));
  std::size_t depth = j.at("depth").get<std::size_t>();
  const json& mods = j.at("modules");
  if (mods.size() != depth) throw InputError("tower depth disagrees with module count");
  std::vector<FKModule> modules;
  for (const auto& e : mods) modules.push_back(module_from_json(e, seq));
  return build_tower(seq, std::move(modules));
}

inline json endpoint_to_json(const Endpoint& e) {
  if (e.literal) return {{"lit", e.lit}};
  return {{"cut", e.cut}};
}

inline Endpoint endpoint_from_json(const json& j) {
  if (j.contains("lit")) {
    int v = j.at("lit").get<int>();
    if (v != 0 && v != 1) throw InputError("literal endpoint must be 0 or 1");
    return {true, v, 0};
  }
  if (j.contains("cut")) return Endpoint::at_cut(j.at("cut").get<std::size_t>());
  throw InputError("endpoint must be {\"lit\":0|1} or {\"cut\":k}");
}

inline json fieldspec_to_json(const FieldSpec& s) {
  json blocks = json::array();
  for (const FieldBlock& b : s.blocks)
    blocks.push_back({{"left", endpoint_to_json(b.left)},
                      {"left_closed", b.left_closed},
                      {"right", endpoint_to_json(b.right)},
                      {"right_closed", b.right_closed},
                      {"fiber", to_json(b.fiber)}});
  return {{"ring", ring_name(s.ring)}, {"blocks", blocks}};
}

inline FieldSpec fieldspec_from_json(const json& j) {
  FieldSpec s;
  s.ring = ring_from_json(j.at("ring"));
  for (const auto& e : j.at("blocks"))
    s.blocks.push_back({endpoint_from_json(e.at("left")),
                        endpoint_from_json(e.at("right")),
                        e.at("left_closed").get<bool>(),
                        e.at("right_closed").get<bool>(),
                        graded_group_from_json(e.at("fiber"))});
  return s;
}

}  // namespace fkt::io
