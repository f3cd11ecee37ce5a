#include "sunit/io.hpp"

#include <json.hpp>

namespace sunit {

namespace {

using Json = nlohmann::ordered_json;

Json matrix_to_json(const RatMat& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(rat_str(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

RatMat matrix_from_json(const Json& rows) {
  const auto r = static_cast<Eigen::Index>(rows.size());
  const auto c = static_cast<Eigen::Index>(rows.at(0).size());
  RatMat m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j)
      m(i, j) = parse_rat(rows.at(static_cast<std::size_t>(i))
                              .at(static_cast<std::size_t>(j))
                              .get<std::string>());
  return m;
}

} // namespace

std::string presentation_to_json(const GroupLevel& level, const QuatOrder* order) {
  Json doc;
  doc["kind"] = level.kind == GroupLevel::Kind::matrix ? "matrix" : "quaternion";
  if (level.kind == GroupLevel::Kind::matrix) {
    doc["n"] = level.n;
  } else {
    if (!order)
      throw std::invalid_argument("presentation_to_json: quaternion level needs its order");
    doc["algebra"] = Json{{"a", rat_str(order->alg.a)}, {"b", rat_str(order->alg.b)}};
    doc["order_basis"] = matrix_to_json(order->basis);
  }
  doc["primes"] = level.primes;

  Json gens = Json::array();
  for (const std::string& name : level.pres.generators) {
    Json g;
    g["name"] = name;
    if (level.kind == GroupLevel::Kind::matrix) {
      g["matrix"] = matrix_to_json(level.pres.images.at(name));
    } else {
      QuatElt x = rep_to_element(*order, level.pres.images.at(name));
      g["element"] = Json::array({rat_str(x.c[0]), rat_str(x.c[1]), rat_str(x.c[2]),
                                  rat_str(x.c[3])});
    }
    gens.push_back(std::move(g));
  }
  doc["generators"] = std::move(gens);

  Json rels = Json::array();
  for (const Word& r : level.pres.relators) rels.push_back(r.str());
  doc["relators"] = std::move(rels);
  doc["center_words"] = level.center_words;
  return doc.dump(2) + "\n";
}

std::string provenance_jsonl(const GroupLevel& level) {
  std::string out;
  for (std::size_t k = 0; k < level.pres.relators.size(); ++k) {
    Json line;
    line["relator"] = level.pres.relators[k].str();
    const ProvenanceEntry& pv =
        k < level.provenance.size() ? level.provenance[k] : ProvenanceEntry{"?"};
    line["tag"] = pv.tag;
    if (pv.prime) line["prime"] = pv.prime;
    if (pv.edge) line["edge"] = pv.edge;
    if (pv.tri_i) line["triangle"] = Json::array({pv.tri_i, pv.tri_j});
    if (pv.schreier >= 0) line["schreier"] = pv.schreier;
    out += line.dump();
    out += "\n";
  }
  return out;
}

GroupLevel LoadedPresentation::as_level() const {
  GroupLevel level;
  level.kind = kind;
  level.n = n;
  level.primes = primes;
  level.pres = pres;
  level.center_words = center_words;
  return level;
}

LoadedPresentation load_presentation_json(const std::string& text) {
  Json doc = Json::parse(text);
  LoadedPresentation out;
  std::string kind = doc.at("kind").get<std::string>();
  if (kind == "matrix")
    out.kind = GroupLevel::Kind::matrix;
  else if (kind == "quaternion")
    out.kind = GroupLevel::Kind::quaternion;
  else
    throw std::invalid_argument("load_presentation_json: unknown kind '" + kind + "'");

  if (out.kind == GroupLevel::Kind::matrix) {
    out.n = doc.at("n").get<int>();
  } else {
    QuatAlg alg{parse_rat(doc.at("algebra").at("a").get<std::string>()),
                parse_rat(doc.at("algebra").at("b").get<std::string>())};
    out.order = make_order(alg, matrix_from_json(doc.at("order_basis")));
    out.n = 4;
  }
  for (const auto& p : doc.at("primes")) out.primes.push_back(p.get<long>());

  for (const auto& g : doc.at("generators")) {
    std::string name = g.at("name").get<std::string>();
    out.pres.generators.push_back(name);
    if (out.kind == GroupLevel::Kind::matrix) {
      out.pres.images[name] = matrix_from_json(g.at("matrix"));
    } else {
      const auto& coords = g.at("element");
      QuatElt x{{parse_rat(coords.at(0).get<std::string>()),
                 parse_rat(coords.at(1).get<std::string>()),
                 parse_rat(coords.at(2).get<std::string>()),
                 parse_rat(coords.at(3).get<std::string>())}};
      out.pres.images[name] = right_rep(*out.order, x);
    }
  }
  for (const auto& r : doc.at("relators"))
    out.pres.relators.push_back(Word::parse(r.get<std::string>()));
  if (doc.contains("center_words"))
    for (const auto& w : doc.at("center_words"))
      out.center_words.push_back(w.get<std::string>());
  out.pres.validate();
  return out;
}

} // namespace sunit
