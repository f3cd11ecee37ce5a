#include <CLI11.hpp>
#include <json.hpp>

#include "sunit/congruence.hpp"
#include "sunit/io.hpp"

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

namespace {

using Json = nlohmann::ordered_json;
using namespace sunit;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
}

std::string swap_suffix(const std::string& path, const std::string& suffix) {
  const std::string json_ext = ".json";
  if (path.size() > json_ext.size() &&
      path.compare(path.size() - json_ext.size(), json_ext.size(), json_ext) == 0)
    return path.substr(0, path.size() - json_ext.size()) + suffix;
  return path + suffix;
}

std::vector<long> parse_primes(const std::string& csv) {
  std::vector<long> out;
  std::string item;
  std::istringstream in(csv);
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    long p = std::stol(item);
    if (!is_prime(p)) throw std::runtime_error("'" + item + "' is not prime");
    for (long q : out)
      if (q == p) throw std::runtime_error("repeated prime " + item);
    out.push_back(p);
  }
  return out;
}

struct BuiltLevel {
  GroupLevel level;
  std::optional<QuatOrder> order;
};

BuiltLevel build_level(const std::string& algebra, int n, const std::string& a,
                       const std::string& b, const std::string& order_file,
                       const std::vector<long>& primes) {
  BuiltLevel out;
  if (algebra == "matrix") {
    GroupLevel level = base_level_matrix(n);
    for (long p : primes) level = extend_level(level, p);
    out.level = std::move(level);
  } else if (algebra == "quaternion") {
    QuatOrder o = [&] {
      if (!order_file.empty()) {
        // Accepts either a full presentation document or a bare
        // {algebra, order_basis} object.
        Json doc = Json::parse(read_file(order_file));
        QuatAlg alg{parse_rat(doc.at("algebra").at("a").get<std::string>()),
                    parse_rat(doc.at("algebra").at("b").get<std::string>())};
        const auto& rows = doc.at("order_basis");
        RatMat basis(4, 4);
        for (Eigen::Index i = 0; i < 4; ++i)
          for (Eigen::Index j = 0; j < 4; ++j)
            basis(i, j) = parse_rat(rows.at(static_cast<std::size_t>(i))
                                        .at(static_cast<std::size_t>(j))
                                        .get<std::string>());
        return make_order(alg, basis);
      }
      Rat ra = parse_rat(a), rb = parse_rat(b);
      if (ra >= 0 || rb >= 0) throw std::runtime_error("need a < 0 and b < 0 (definite)");
      if (ra == -1 && rb == -1) return hurwitz_order();
      throw std::runtime_error(
          "no built-in maximal order for this algebra; supply --order with an order "
          "basis (JSON with algebra and order_basis fields)");
    }();
    out.level = quat_s_presentation(o, primes);
    out.order = std::move(o);
  } else {
    throw std::runtime_error("unknown algebra '" + algebra + "'");
  }
  return out;
}

BuiltLevel rebuild_from_loaded(const LoadedPresentation& doc) {
  BuiltLevel out;
  if (doc.kind == GroupLevel::Kind::matrix) {
    GroupLevel level = base_level_matrix(doc.n);
    for (long p : doc.primes) level = extend_level(level, p);
    out.level = std::move(level);
  } else {
    out.level = quat_s_presentation(*doc.order, doc.primes);
    out.order = doc.order;
  }
  return out;
}

Json invariants_json(const AbelianInvariants& inv) {
  Json torsion = Json::array();
  for (const Int& t : inv.torsion) torsion.push_back(t.get_str());
  return Json{{"free_rank", inv.free_rank}, {"torsion", torsion}};
}

int cmd_present(const std::string& algebra, int n, const std::string& a,
                const std::string& b, const std::string& order_file,
                const std::string& primes_csv, const std::string& out_path,
                bool do_simplify) {
  BuiltLevel built = build_level(algebra, n, a, b, order_file, parse_primes(primes_csv));
  const GroupLevel& level = built.level;

  write_file(out_path,
             presentation_to_json(level, built.order ? &*built.order : nullptr));
  Presentation for_text = do_simplify ? simplify(level.pres) : level.pres;
  write_file(swap_suffix(out_path, ".txt"), to_text(for_text));
  write_file(swap_suffix(out_path, ".provenance.jsonl"), provenance_jsonl(level));

  VerifyReport rep = verify_level(level);
  Json summary;
  summary["generators"] = level.pres.generators.size();
  summary["relators"] = level.pres.relators.size();
  summary["verified"] = rep.all_pass();
  summary["abelian_invariants"] = invariants_json(abelian_invariants(level.pres));
  std::cout << summary.dump(2) << "\n";
  return rep.all_pass() ? 0 : 1;
}

int cmd_verify(const std::string& path, unsigned long seed) {
  LoadedPresentation doc = load_presentation_json(read_file(path));
  BuiltLevel rebuilt = rebuild_from_loaded(doc);
  const GroupLevel& level = rebuilt.level;

  bool same_shape = doc.pres.generators == level.pres.generators &&
                    doc.pres.relators.size() == level.pres.relators.size() &&
                    doc.center_words == level.center_words;
  if (same_shape) {
    for (std::size_t k = 0; k < doc.pres.relators.size(); ++k)
      if (!(doc.pres.relators[k] == level.pres.relators[k])) same_shape = false;
    for (const std::string& g : doc.pres.generators)
      if (!mat_eq(doc.pres.images.at(g), level.pres.images.at(g))) same_shape = false;
  }

  VerifyReport rep = verify_level(level);

  // Seeded random round-trips through the rewriter.
  std::mt19937_64 rng(seed);
  bool roundtrips = true;
  const auto& names = level.pres.generators;
  for (int trial = 0; trial < 10 && roundtrips; ++trial) {
    RatMat g = rat_identity(level.n);
    for (int s = 0; s < 12; ++s) {
      const RatMat& img = level.pres.images.at(names[rng() % names.size()]);
      g = g * (rng() % 2 ? img : rat_inverse(img));
    }
    Word w = rewrite(level, g);
    if (!mat_eq(evaluate(w, level.pres.images, level.n), g)) roundtrips = false;
  }

  Json out;
  out["file_matches_rebuild"] = same_shape;
  out["level_checks_pass"] = rep.all_pass();
  out["seeded_roundtrips_pass"] = roundtrips;
  Json failures = Json::array();
  for (const auto& e : rep.entries)
    if (!e.pass) failures.push_back(Json{{"check", e.name}, {"detail", e.detail}});
  out["failures"] = std::move(failures);
  std::cout << out.dump(2) << "\n";
  return (same_shape && rep.all_pass() && roundtrips) ? 0 : 1;
}

int cmd_abelianize(const std::string& path) {
  LoadedPresentation doc = load_presentation_json(read_file(path));
  std::cout << invariants_json(abelian_invariants(doc.pres)).dump(2) << "\n";
  return 0;
}

int cmd_probe(const std::string& path, long q) {
  LoadedPresentation doc = load_presentation_json(read_file(path));
  GroupLevel level = doc.as_level();
  CongruenceProbe probe = congruence_probe(level, q);
  Json out;
  out["modulus"] = probe.q;
  out["relators_hold"] = probe.relators_hold;
  out["image_order"] = probe.image_order;
  out["special_order"] = probe.special_order;
  out["expected_special"] = probe.expected_special.get_str();
  out["strong_approximation"] = probe.strong_approximation;
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_lowindex(const std::string& path, int max_index, const std::string& predicted_csv) {
  LoadedPresentation doc = load_presentation_json(read_file(path));
  GroupLevel level = doc.as_level();
  NormalScanReport report = normal_scan(level, max_index, parse_primes(predicted_csv));
  Json out;
  out["max_index"] = report.max_index;
  out["predicted_primes"] = report.predicted_primes;
  out["any_flagged"] = report.any_flagged;
  Json entries = Json::array();
  for (const auto& e : report.entries) {
    Json je;
    je["index"] = e.index;
    je["quotient_order"] = e.quotient_order;
    je["quotient_invariants"] = invariants_json(e.quotient_invariants);
    je["order_primes"] = e.order_primes;
    je["flagged"] = e.flagged;
    if (e.congruence_modulus) je["congruence_modulus"] = e.congruence_modulus;
    entries.push_back(std::move(je));
  }
  out["normal_subgroups"] = std::move(entries);
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_building(int n, long p, int depth) {
  Vertex v0 = standard_vertex(n, p);
  std::map<std::string, long> dist{{v0.key(), 0}};
  std::vector<Vertex> frontier{v0};
  std::vector<long> spheres{1};
  for (int d = 1; d <= depth; ++d) {
    std::vector<Vertex> next;
    for (const Vertex& u : frontier)
      for (const Vertex& w : neighbors(u))
        if (dist.emplace(w.key(), d).second) next.push_back(w);
    spheres.push_back(static_cast<long>(next.size()));
    frontier = std::move(next);
  }
  Json out;
  out["n"] = n;
  out["p"] = p;
  out["degree"] = vertex_degree(n, Int(p)).get_str();
  out["sphere_sizes"] = spheres;
  std::cout << out.dump(2) << "\n";
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"presentations of S-unit groups of orders via Bruhat-Tits buildings"};
  app.require_subcommand(1);

  // present
  auto* present = app.add_subcommand("present", "build an S-level presentation");
  std::string algebra = "matrix", a = "-1", b = "-1", order_file, primes_csv, out_path;
  int n = 2;
  bool do_simplify = false;
  present->add_option("--algebra", algebra, "matrix | quaternion");
  present->add_option("--n", n, "matrix rank (2..4)");
  present->add_option("--a", a, "quaternion parameter a (rational)");
  present->add_option("--b", b, "quaternion parameter b (rational)");
  present->add_option("--order", order_file, "JSON file with a custom order basis");
  present->add_option("--primes", primes_csv, "comma-separated primes")->required();
  present->add_option("--out", out_path, "output JSON path")->required();
  present->add_flag("--simplify", do_simplify, "simplify the plain-text export");

  // verify
  auto* verify = app.add_subcommand("verify", "rebuild and re-check a presentation file");
  std::string verify_path;
  unsigned long seed = 20240901UL;
  verify->add_option("file", verify_path)->required();
  verify->add_option("--seed", seed, "seed for randomized round-trips");

  // abelianize
  auto* abelianize = app.add_subcommand("abelianize", "abelian invariants of a file");
  std::string ab_path;
  abelianize->add_option("file", ab_path)->required();

  // probe
  auto* probe = app.add_subcommand("probe", "congruence quotient probe");
  std::string probe_path;
  long probe_mod = 0;
  probe->add_option("--mod", probe_mod, "prime modulus")->required();
  probe->add_option("file", probe_path)->required();

  // lowindex
  auto* lowindex = app.add_subcommand("lowindex", "normal subgroup scan");
  std::string li_path, predicted = "2,3";
  int li_max = 12;
  lowindex->add_option("--max", li_max, "maximal index (<= 15)");
  lowindex->add_option("--predicted", predicted, "congruence-predicted primes");
  lowindex->add_option("file", li_path)->required();

  // building
  auto* building = app.add_subcommand("building", "sphere sizes of the building");
  int bn = 2, bdepth = 3;
  long bp = 3;
  building->add_option("--n", bn, "rank");
  building->add_option("--p", bp, "prime");
  building->add_option("--depth", bdepth, "BFS depth");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (present->parsed())
      return cmd_present(algebra, n, a, b, order_file, primes_csv, out_path, do_simplify);
    if (verify->parsed()) return cmd_verify(verify_path, seed);
    if (abelianize->parsed()) return cmd_abelianize(ab_path);
    if (probe->parsed()) return cmd_probe(probe_path, probe_mod);
    if (lowindex->parsed()) return cmd_lowindex(li_path, li_max, predicted);
    if (building->parsed()) return cmd_building(bn, bp, bdepth);
  } catch (const std::exception& ex) {
    nlohmann::ordered_json err;
    err["error"] = ex.what();
    std::cerr << err.dump() << "\n";
    return 1;
  }
  return 2;
}
