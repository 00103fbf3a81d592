// fkt: compute with filtrated K-theory invariants at finite interval
// approximations. Subcommands cover level inspection, invariant
// synthesis, validation, exactness, hom spaces, isomorphism search,
// classification certificates and inverse-limit diagnostics.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "fkt/json_io.hpp"

using namespace fkt;
using fkt::io::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFalse = 1;
constexpr int kExitInput = 2;
constexpr int kExitUnknown = 3;

struct Options {
  std::uint64_t seed = 0;
  std::size_t depth = 5;
  bool json_out = false;
  std::size_t trials = 200;
  long coeff_bound = 4;
  long radius = 2;
  std::string seq_csv;  // override for the dense sequence
};

DenseSequence parse_seq(const Options& opt, std::size_t min_len) {
  if (opt.seq_csv.empty()) return DenseSequence::dyadic(std::max<std::size_t>(min_len, 8));
  std::vector<Rat> vals;
  std::stringstream ss(opt.seq_csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    Rat r(item);
    r.canonicalize();
    vals.push_back(r);
  }
  return DenseSequence(std::move(vals));
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return json::parse(in);
}

void emit(const Options& opt, const json& report, const std::string& text) {
  if (opt.json_out)
    std::cout << report.dump(2) << "\n";
  else
    std::cout << text;
}

IsoSearchConfig iso_config(const Options& opt) {
  IsoSearchConfig cfg;
  cfg.seed = opt.seed;
  cfg.trials = opt.trials;
  cfg.coeff_bound = opt.coeff_bound;
  cfg.search_radius = opt.radius;
  return cfg;
}

enum class ArtifactKind { MODULE, TOWER, FIELDSPEC };

ArtifactKind kind_of(const json& j) {
  if (j.contains("blocks")) return ArtifactKind::FIELDSPEC;
  if (j.contains("modules")) return ArtifactKind::TOWER;
  if (j.contains("groups") && j.contains("maps")) return ArtifactKind::MODULE;
  throw InputError("unrecognized artifact (expected module, tower or field spec)");
}

Tower load_tower(const std::string& path, const Options& opt) {
  json j = load_json(path);
  switch (kind_of(j)) {
    case ArtifactKind::TOWER:
      return io::tower_from_json(j);
    case ArtifactKind::FIELDSPEC: {
      FieldSpec spec = io::fieldspec_from_json(j);
      return realize_tower(spec, parse_seq(opt, opt.depth), opt.depth);
    }
    default:
      throw InputError(path + ": expected a tower or field spec");
  }
}

std::string run_str(const Run& r) {
  return "[" + std::to_string(r.lo) + "," + std::to_string(r.hi) + "]";
}

std::string group_str(const Group& g) {
  std::string s;
  if (g.rank > 0) s += (g.ring == CoeffRing::Q ? "Q^" : "Z^") + std::to_string(g.rank);
  for (const Int& d : g.torsion) s += (s.empty() ? "Z/" : " + Z/") + d.get_str();
  return s.empty() ? "0" : s;
}

std::string graded_str(const GradedGroup& g) {
  return "(" + group_str(g.deg0) + ", " + group_str(g.deg1) + ")";
}

// --- subcommand bodies -----------------------------------------------------

int cmd_level(const Options& opt, std::size_t n) {
  Level lv = build_level(parse_seq(opt, n), n);
  json rep = io::level_to_json(lv);
  rep["runs"] = runs(lv).size();
  rep["admissible_pairs"] = all_admissible_pairs(lv).size();
  std::ostringstream txt;
  txt << "level " << n << ": " << runs(lv).size() << " runs, "
      << all_admissible_pairs(lv).size() << " admissible pairs\ncuts:";
  for (const Rat& c : lv.cuts) txt << " " << io::rat_str(c);
  txt << "\n";
  emit(opt, rep, txt.str());
  return kExitOk;
}

int cmd_gen(const Options& opt, const std::string& spec_path, const std::string& out) {
  FieldSpec spec = io::fieldspec_from_json(load_json(spec_path));
  Tower t = realize_tower(spec, parse_seq(opt, opt.depth), opt.depth);
  json j = io::tower_to_json(t);
  if (out.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::ofstream os(out);
    if (!os) throw InputError("cannot write " + out);
    os << j.dump(2) << "\n";
    std::cout << "wrote tower of depth " << t.depth() << " to " << out << "\n";
  }
  return kExitOk;
}

int cmd_validate(const Options& opt, const std::string& path) {
  json j = load_json(path);
  std::vector<std::pair<std::string, ValidationReport>> reports;
  if (kind_of(j) == ArtifactKind::MODULE) {
    reports.emplace_back("module", validate(io::module_from_json(j)));
  } else {
    Tower t = load_tower(path, opt);
    for (std::size_t n = 1; n <= t.depth(); ++n)
      reports.emplace_back("level " + std::to_string(n), validate(t.at_level(n)));
  }
  bool ok = true;
  json rep;
  rep["violations"] = json::array();
  std::ostringstream txt;
  for (const auto& [what, r] : reports) {
    ok = ok && r.ok();
    for (const std::string& v : r.violations) {
      rep["violations"].push_back(what + ": " + v);
      txt << what << ": " << v << "\n";
    }
  }
  rep["valid"] = ok;
  if (ok) txt << "valid\n";
  emit(opt, rep, txt.str());
  return ok ? kExitOk : kExitFalse;
}

int cmd_exact(const Options& opt, const std::string& path) {
  json j = load_json(path);
  bool exact = true;
  if (kind_of(j) == ArtifactKind::MODULE) {
    exact = is_exact(io::module_from_json(j));
  } else {
    Tower t = load_tower(path, opt);
    for (std::size_t n = 1; exact && n <= t.depth(); ++n)
      exact = is_exact(t.at_level(n));
  }
  emit(opt, json{{"exact", exact}}, exact ? "exact\n" : "not exact\n");
  return exact ? kExitOk : kExitFalse;
}

int cmd_hom(const Options& opt, const std::string& pa, const std::string& pb,
            int parity) {
  json ja = load_json(pa), jb = load_json(pb);
  if (kind_of(ja) == ArtifactKind::MODULE && kind_of(jb) == ArtifactKind::MODULE) {
    FKModule a = io::module_from_json(ja), b = io::module_from_json(jb);
    HomSpace h = hom_space(a, b, parity);
    json rep{{"parity", parity}, {"group", io::group_part_to_json(h.group)},
             {"ring", io::ring_name(h.ring)}};
    emit(opt, rep,
         "Hom (parity " + std::to_string(parity) + ") = " + group_str(h.group) + "\n");
    return kExitOk;
  }
  Tower a = load_tower(pa, opt), b = load_tower(pb, opt);
  TowerHom th = tower_hom(a, b, parity);
  json rep{{"parity", parity}, {"levels", json::array()}};
  std::ostringstream txt;
  for (std::size_t n = 1; n <= a.depth(); ++n) {
    rep["levels"].push_back(io::group_part_to_json(th.groups.groups[n - 1]));
    txt << "level " << n << ": " << group_str(th.groups.groups[n - 1]) << "\n";
  }
  rep["mittag_leffler"] = th.ml.ml;
  rep["stage"] = th.ml.stage;
  if (th.ml.ml)
    txt << "images stabilize at stage " << th.ml.stage << "\n";
  else
    txt << "not stabilized at horizon " << a.depth() << "\n";
  LimResult l = lim(th.groups);
  if (l.stabilized) {
    rep["lim"] = io::group_part_to_json(l.group);
    txt << "lim = " << group_str(l.group) << "\n";
  }
  emit(opt, rep, txt.str());
  return kExitOk;
}

int cmd_iso(const Options& opt, const std::string& pa, const std::string& pb) {
  json ja = load_json(pa), jb = load_json(pb);
  IsoStatus status;
  json rep;
  std::ostringstream txt;
  if (kind_of(ja) == ArtifactKind::MODULE && kind_of(jb) == ArtifactKind::MODULE) {
    IsoResult r = find_iso(io::module_from_json(ja), io::module_from_json(jb),
                           iso_config(opt));
    status = r.status;
    if (r.witness) {
      rep["witness_run"] = io::to_json(*r.witness);
      txt << "witness run " << run_str(*r.witness) << "\n";
    }
  } else {
    TowerIsoResult r = find_tower_iso(load_tower(pa, opt), load_tower(pb, opt),
                                      iso_config(opt));
    status = r.status;
    if (r.level) rep["witness_level"] = *r.level;
    if (r.witness) rep["witness_run"] = io::to_json(*r.witness);
    if (r.level) txt << "witness at level " << *r.level;
    if (r.witness) txt << " run " << run_str(*r.witness);
    if (r.level || r.witness) txt << "\n";
  }
  const char* name = status == IsoStatus::FOUND     ? "FOUND"
                     : status == IsoStatus::REFUTED ? "REFUTED"
                                                    : "UNKNOWN";
  rep["status"] = name;
  emit(opt, rep, std::string(name) + "\n" + txt.str());
  return status == IsoStatus::FOUND     ? kExitOk
         : status == IsoStatus::REFUTED ? kExitFalse
                                        : kExitUnknown;
}

int cmd_certify(const Options& opt, const std::string& pa, const std::string& pb) {
  Tower a = load_tower(pa, opt), b = load_tower(pb, opt);
  ClassificationCertificate c = certify_classification(a, b, iso_config(opt));
  const char* status = c.status == CertStatus::CERTIFIED ? "CERTIFIED"
                       : c.status == CertStatus::REFUTED ? "REFUTED"
                                                         : "NOT_CERTIFIED";
  const char* route = c.route == VanishingRoute::DIVISIBLE ? "DIVISIBLE"
                      : c.route == VanishingRoute::FREE    ? "FREE"
                      : c.route == VanishingRoute::PARITY  ? "PARITY"
                                                           : "NONE";
  json rep{{"status", status}, {"route", route}, {"depth", a.depth()}};
  std::ostringstream txt;
  txt << status << "\n";
  if (c.status == CertStatus::CERTIFIED) {
    rep["conclusion"] = c.conclusion;
    txt << "route: " << route;
    if (c.parity_degree) {
      rep["parity_degree"] = *c.parity_degree;
      txt << "(" << *c.parity_degree << ")";
    }
    txt << "\n" << c.conclusion << "\n";
  } else {
    rep["reason"] = c.reason;
    txt << c.reason << "\n";
    if (c.witness_level) {
      rep["witness_level"] = *c.witness_level;
      txt << "witness at level " << *c.witness_level;
      if (c.witness_run) {
        rep["witness_run"] = io::to_json(*c.witness_run);
        txt << " run " << run_str(*c.witness_run);
      }
      txt << "\n";
    }
  }
  emit(opt, rep, txt.str());
  return c.status == CertStatus::CERTIFIED ? kExitOk
         : c.status == CertStatus::REFUTED ? kExitFalse
                                           : kExitUnknown;
}

int cmd_lim(const Options& opt, const std::string& pa, const std::string& pb,
            int parity) {
  Tower a = load_tower(pa, opt);
  Tower b = pb.empty() ? a : load_tower(pb, opt);
  TowerHom th = tower_hom(a, b, parity);
  json rep{{"mittag_leffler", th.ml.ml}, {"stage", th.ml.stage}};
  std::ostringstream txt;
  if (th.ml.ml)
    txt << "ML_AT(" << th.ml.stage << ")\n";
  else
    txt << "ML_FAILS_UP_TO(" << th.groups.depth() << ")\n";
  LimResult l = lim(th.groups);
  if (l.stabilized) {
    rep["lim"] = io::group_part_to_json(l.group);
    txt << "lim = " << group_str(l.group) << " (stage " << l.stage << ")\n";
  } else {
    rep["lim"] = "NOT_STABILIZED";
    txt << "lim NOT_STABILIZED\n";
  }
  emit(opt, rep, txt.str());
  return kExitOk;
}

int cmd_report(const Options& opt, const std::string& path) {
  json j = load_json(path);
  std::ostringstream txt;
  json rep;
  auto module_summary = [&](const FKModule& m, const std::string& head) {
    txt << head << ": level " << m.level.n << ", ring " << io::ring_name(m.ring)
        << ", " << m.pairs.size() << " pairs\n";
    for (const Run& r : runs(m.level))
      if (!m.group(r).is_trivial())
        txt << "  " << run_str(r) << " -> " << graded_str(m.group(r)) << "\n";
    bool valid = validate(m).ok();
    txt << "  valid: " << (valid ? "yes" : "no");
    if (valid) txt << ", exact: " << (is_exact(m) ? "yes" : "no");
    txt << "\n";
  };
  switch (kind_of(j)) {
    case ArtifactKind::MODULE: {
      FKModule m = io::module_from_json(j);
      rep = {{"kind", "module"}, {"level", m.level.n}};
      module_summary(m, "module");
      break;
    }
    case ArtifactKind::TOWER: {
      Tower t = io::tower_from_json(j);
      rep = {{"kind", "tower"}, {"depth", t.depth()}};
      txt << "tower of depth " << t.depth() << "\n";
      for (std::size_t n = 1; n <= t.depth(); ++n)
        module_summary(t.at_level(n), "level " + std::to_string(n));
      break;
    }
    case ArtifactKind::FIELDSPEC: {
      FieldSpec s = io::fieldspec_from_json(j);
      rep = {{"kind", "fieldspec"}, {"blocks", s.blocks.size()}};
      txt << "field spec: " << s.blocks.size() << " blocks over "
          << io::ring_name(s.ring) << "\n";
      break;
    }
  }
  emit(opt, rep, txt.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"filtrated K-theory invariant calculator"};
  app.require_subcommand(1);
  Options opt;
  app.add_option("--seed", opt.seed, "random seed");
  app.add_option("--depth", opt.depth, "tower depth for field specs");
  app.add_option("--trials", opt.trials, "random iso-search trials");
  app.add_option("--coeff-bound", opt.coeff_bound, "coefficient bound for random combos");
  app.add_option("--radius", opt.radius, "box radius for free generators");
  app.add_option("--seq", opt.seq_csv, "dense sequence as comma-separated rationals");
  bool json_flag = false, text_flag = false;
  app.add_flag("--json", json_flag, "machine-readable output");
  app.add_flag("--text", text_flag, "human-readable output (default)");

  std::size_t level_n = 1;
  auto* level = app.add_subcommand("level", "describe a finite approximation level");
  level->add_option("n", level_n, "level index")->required();

  std::string gen_spec, gen_out;
  auto* gen = app.add_subcommand("gen", "realize a field spec as a tower");
  gen->add_option("--spec", gen_spec, "field spec JSON")->required();
  gen->add_option("--out", gen_out, "output path (stdout if omitted)");

  std::string v_path;
  auto* validate_cmd = app.add_subcommand("validate", "check module axioms R1-R3");
  validate_cmd->add_option("file", v_path)->required();

  std::string e_path;
  auto* exact_cmd = app.add_subcommand("exact", "check six-term exactness");
  exact_cmd->add_option("file", e_path)->required();

  std::string h_a, h_b;
  int h_parity = 0;
  auto* hom_cmd = app.add_subcommand("hom", "hom space of modules or towers");
  hom_cmd->add_option("a", h_a)->required();
  hom_cmd->add_option("b", h_b)->required();
  hom_cmd->add_option("--parity", h_parity);

  std::string i_a, i_b;
  auto* iso_cmd = app.add_subcommand("iso", "search for an isomorphism");
  iso_cmd->add_option("a", i_a)->required();
  iso_cmd->add_option("b", i_b)->required();

  std::string c_a, c_b;
  auto* certify_cmd = app.add_subcommand("certify", "emit a classification certificate");
  certify_cmd->add_option("a", c_a)->required();
  certify_cmd->add_option("b", c_b)->required();

  std::string l_a, l_b;
  int l_parity = 0;
  auto* lim_cmd = app.add_subcommand("lim", "inverse limit of the hom tower");
  lim_cmd->add_option("a", l_a)->required();
  lim_cmd->add_option("b", l_b, "second tower (defaults to the first)");
  lim_cmd->add_option("--parity", l_parity);

  std::string r_path;
  auto* report_cmd = app.add_subcommand("report", "summarize an artifact");
  report_cmd->add_option("file", r_path)->required();

  for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);
  opt.json_out = json_flag && !text_flag;

  try {
    if (*level) return cmd_level(opt, level_n);
    if (*gen) return cmd_gen(opt, gen_spec, gen_out);
    if (*validate_cmd) return cmd_validate(opt, v_path);
    if (*exact_cmd) return cmd_exact(opt, e_path);
    if (*hom_cmd) return cmd_hom(opt, h_a, h_b, h_parity);
    if (*iso_cmd) return cmd_iso(opt, i_a, i_b);
    if (*certify_cmd) return cmd_certify(opt, c_a, c_b);
    if (*lim_cmd) return cmd_lim(opt, l_a, l_b, l_parity);
    if (*report_cmd) return cmd_report(opt, r_path);
  } catch (const json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const ShapeError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
