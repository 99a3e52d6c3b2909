#pragma once

// JSON exchange forms for complexes, certificates, Betti vectors and index reports.

#include <string>
#include <vector>

#include "json.hpp"

#include "coindex/complex.hpp"
#include "coindex/homology.hpp"
#include "coindex/index.hpp"
#include "coindex/subshift.hpp"

namespace coindex {

using Json = nlohmann::ordered_json;

// {p, vertices: [labels], maximal_cells: [[i, ...]], generator: [i, ...]}
inline Json complex_to_json(const SimplicialComplex& c) {
  return Json{{"p", c.prime()},
              {"vertices", c.labels()},
              {"maximal_cells", c.maximal_cells()},
              {"generator", c.generator()}};
}

inline SimplicialComplex complex_from_json(const Json& j) {
  try {
    for (const char* key : {"p", "vertices", "generator"})
      if (!j.contains(key)) throw ShapeError(std::string("complex JSON lacks '") + key + "'");
    for (const auto& [key, _] : j.items())
      if (key != "p" && key != "vertices" && key != "maximal_cells" && key != "generator")
        throw ShapeError("complex JSON has unknown key '" + key + "'");
    const auto p = j.at("p").get<unsigned>();
    auto labels = j.at("vertices").get<std::vector<std::string>>();
    auto gen = j.at("generator").get<std::vector<std::uint32_t>>();
    std::vector<std::vector<std::uint32_t>> cells;
    if (j.contains("maximal_cells")) cells = j.at("maximal_cells").get<std::vector<std::vector<std::uint32_t>>>();
    return SimplicialComplex::from_cells(p, std::move(labels), cells, std::move(gen));
  } catch (const nlohmann::json::exception& e) {
    throw ShapeError(std::string("malformed complex JSON: ") + e.what());
  }
}

inline Json certificate_to_json(const EquivariantMapCert& c) {
  return Json{{"p", c.p}, {"n", c.n}, {"domain", c.domain}, {"vertex_map", c.vertex_map}, {"target_ref", c.target_ref}};
}

inline EquivariantMapCert certificate_from_json(const Json& j) {
  try {
    EquivariantMapCert c;
    c.p = j.at("p").get<unsigned>();
    c.n = j.at("n").get<int>();
    c.domain = j.value("domain", c.domain);
    c.vertex_map = j.at("vertex_map").get<std::vector<std::uint64_t>>();
    c.target_ref = j.value("target_ref", std::string());
    for (const auto& [key, _] : j.items())
      if (key != "p" && key != "n" && key != "domain" && key != "vertex_map" && key != "target_ref")
        throw ShapeError("certificate JSON has unknown key '" + key + "'");
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ShapeError(std::string("malformed certificate JSON: ") + e.what());
  }
}

inline Json level_json(int v) { return v == kInfinity ? Json("inf") : Json(v); }

inline Json report_to_json(const IndexReport& r) {
  Json j{{"p", r.p()},
         {"subject", r.subject()},
         {"coind_lower", level_json(r.coind_lower())},
         {"coind_upper", level_json(r.coind_upper())},
         {"ind_lower", level_json(r.ind_lower())},
         {"ind_upper", level_json(r.ind_upper())}};
  if (r.exact()) j["exact"] = r.coind_lower();
  else j["exact"] = nullptr;
  j["provenance"] = r.provenance();
  return j;
}

inline Json betti_to_json(const BettiVector& b) {
  return Json{{"field", b.field},
              {"reduced_betti", b.reduced},
              {"connectivity", connectivity(b)},
              {"cells_by_dim", b.cells}};
}

/// Words in their text form, in the library's stable (lexicographic) order.
inline Json words_to_json(const Alphabet& a, const std::vector<CyclicWord>& words) {
  Json out = Json::array();
  for (const auto& w : words) out.push_back(format_word(a, w));
  return out;
}

}  // namespace coindex
