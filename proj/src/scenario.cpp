#include <fstream>
#include <sstream>

#include "localix/errors.hpp"
#include "localix/workbench.hpp"

namespace localix {

using json = nlohmann::ordered_json;

namespace {

std::pair<std::size_t, std::size_t> line_and_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw ValidationError("scenario", where + ": missing field '" + key + "'");
  return j.at(key);
}

IntMatrix matrix_from(const json& rows, std::size_t n_rows, std::size_t n_cols, const std::string& where) {
  if (!rows.is_array() || rows.size() != n_rows)
    throw ValidationError("scenario", where + ": expected " + std::to_string(n_rows) + " rows");
  IntMatrix m(n_rows, n_cols);
  for (std::size_t r = 0; r < n_rows; ++r) {
    if (!rows[r].is_array() || rows[r].size() != n_cols)
      throw ValidationError("scenario", where + ": row " + std::to_string(r) + " must have " + std::to_string(n_cols) +
                                            " entries");
    for (std::size_t c = 0; c < n_cols; ++c) m(r, c) = rows[r][c].get<Int>();
  }
  return m;
}

json matrix_to(const IntMatrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) rows.push_back(m.row(r));
  return rows;
}

EMModule module_from(const json& j, const Algebra& algebra, const std::string& where) {
  const auto factors = field(j, "invariant_factors", where).get<std::vector<Int>>();
  const json& acts = field(j, "actions", where);
  if (!acts.is_array() || acts.size() != algebra.rank())
    throw ValidationError("Eq. 2.2", where + ": need one action matrix per algebra basis element");
  try {
    FinModule carrier(algebra.modulus(), factors);
    std::vector<ModuleMap> actions;
    for (std::size_t i = 0; i < acts.size(); ++i)
      actions.emplace_back(carrier, carrier,
                           matrix_from(acts[i], carrier.rank(), carrier.rank(), where + ".actions[" + std::to_string(i) + "]"));
    return EMModule(carrier, std::move(actions));
  } catch (const ValidationError& e) {
    if (!e.anchor().empty()) throw;
    throw ValidationError("Eq. 2.2", where + ": " + e.what());
  } catch (const Error& e) {
    throw ValidationError("Eq. 2.2", where + ": " + e.what());
  }
}

Scenario build(const json& j, const std::string& origin) {
  if (!j.is_object()) throw ValidationError("scenario", origin + ": top level must be an object");
  if (j.contains("schema") && j.at("schema") != kScenarioSchema)
    throw ValidationError("scenario", origin + ": unsupported schema " + j.at("schema").dump());
  const std::string name = j.value("name", origin);
  const std::string description = j.value("description", "");
  const Int modulus = field(j, "modulus", origin).get<Int>();
  if (modulus < 2) throw ValidationError("scenario", origin + ": modulus must be at least 2");

  const json& alg = field(j, "algebra", origin);
  const auto unit = field(alg, "unit", origin + ".algebra").get<Element>();
  if (alg.contains("rank") && alg.at("rank").get<std::size_t>() != unit.size())
    throw ValidationError("Eq. 2.1", origin + ": rank does not match the unit vector");
  const auto products = field(alg, "products", origin + ".algebra").get<std::vector<std::vector<Element>>>();
  Algebra algebra(modulus, unit, products);
  const LawReport laws = check_monad_laws(algebra);
  if (!laws) throw ValidationError(laws.anchor, origin + ": " + laws.describe());

  Bounds bounds;
  if (j.contains("options")) {
    const json& o = j.at("options");
    bounds.elements = o.value("bound_elements", bounds.elements);
    bounds.subgroups = o.value("bound_ideals", bounds.subgroups);
    bounds.lattice = o.value("bound_lattice", bounds.lattice);
  }

  std::optional<AlgebraDerivation> given;
  if (j.contains("derivation"))
    given.emplace(algebra, matrix_from(j.at("derivation"), algebra.rank(), algebra.rank(), origin + ".derivation"));
  if (given) {
    const LawReport d = check_derivation(algebra, *given);
    if (!d) throw ValidationError(d.anchor, origin + ": " + d.describe());
  }
  const std::string which = j.value("derivations", "given");
  std::vector<AlgebraDerivation> derivations;
  if (which == "all") {
    derivations = enumerate_algebra_derivations(algebra, bounds);
  } else if (which == "given") {
    derivations.push_back(given ? *given : AlgebraDerivation::zero(algebra));
  } else {
    throw ValidationError("scenario", origin + ": 'derivations' must be \"given\" or \"all\"");
  }

  std::vector<NamedModule> modules;
  const std::string corpus = j.value("corpus", "standard");
  if (corpus == "standard") {
    modules = standard_corpus(algebra, bounds);
  } else if (corpus != "none") {
    throw ValidationError("scenario", origin + ": 'corpus' must be \"standard\" or \"none\"");
  }
  if (j.contains("modules"))
    for (std::size_t k = 0; k < j.at("modules").size(); ++k) {
      const json& mj = j.at("modules")[k];
      const std::string where = origin + ".modules[" + std::to_string(k) + "]";
      EMModule m = module_from(mj, algebra, where);
      const LawReport r = check_em_module(algebra, m);
      if (!r) throw ValidationError(r.anchor, where + ": " + r.describe());
      modules.push_back({mj.value("name", "M" + std::to_string(k)), std::move(m)});
    }

  std::optional<GabrielFilter> filter;
  if (j.contains("filter")) {
    const EMModule regular = regular_module(algebra);
    std::vector<Submodule> ideals;
    for (const auto& gens : j.at("filter")) {
      auto elems = gens.get<std::vector<Element>>();
      for (auto& e : elems)
        if (e.size() != algebra.rank()) throw ValidationError("scenario", origin + ": filter generator of wrong length");
      ideals.push_back(em_span(regular, elems));
    }
    filter.emplace(algebra, std::move(ideals), bounds);
  }
  return Scenario{name, description, std::move(algebra), std::move(derivations), std::move(modules), std::move(filter),
                  bounds};
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, column] = line_and_column(text, e.byte);
    std::string what = e.what();
    const auto cut = what.find("column");
    if (cut != std::string::npos && what.find(": ", cut) != std::string::npos) what = what.substr(what.find(": ", cut) + 2);
    throw ParseError(line, column, origin + ": " + what);
  }
  try {
    return build(j, origin);
  } catch (const json::exception& e) {
    throw ValidationError("scenario", origin + ": " + e.what());
  }
}

Scenario load_scenario(const std::string& path_or_builtin) {
  const std::string prefix = "builtin:";
  if (path_or_builtin.rfind(prefix, 0) == 0) {
    const std::string name = path_or_builtin.substr(prefix.size());
    for (const auto& f : builtin_algebras())
      if (f.name == name) return parse_scenario(builtin_scenario_json(f).dump(), path_or_builtin);
    throw PreconditionError("unknown built-in fixture '" + name + "'");
  }
  std::ifstream in(path_or_builtin, std::ios::binary);
  if (!in) throw PreconditionError("cannot read scenario file '" + path_or_builtin + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str(), path_or_builtin);
}

json builtin_scenario_json(const FixtureAlgebra& fixture) {
  const Algebra& a = fixture.algebra;
  json products = json::array();
  for (std::size_t i = 0; i < a.rank(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < a.rank(); ++j) row.push_back(a.product(i, j));
    products.push_back(row);
  }
  json j;
  j["schema"] = kScenarioSchema;
  j["name"] = fixture.name;
  j["description"] = fixture.description;
  j["modulus"] = a.modulus();
  j["algebra"] = {{"rank", a.rank()}, {"unit", a.unit()}, {"products", products}};
  j["derivation"] = matrix_to(fixture.derivation);
  j["derivations"] = "all";
  j["corpus"] = "standard";
  return j;
}

std::vector<Scenario> builtin_fixtures() {
  std::vector<Scenario> out;
  for (const auto& f : builtin_algebras()) out.push_back(parse_scenario(builtin_scenario_json(f).dump(), "builtin:" + f.name));
  return out;
}

}  // namespace localix
