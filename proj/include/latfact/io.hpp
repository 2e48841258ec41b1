#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "latfact/factorization.hpp"

namespace latfact {

using ojson = nlohmann::ordered_json;

namespace io {

inline ojson load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw error(errc::bad_input, "cannot open '" + path.string() + "'");
  ojson j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw error(errc::bad_input, "invalid JSON in '" + path.string() + "': " + e.what());
  }
  return j;
}

inline std::string load_text_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw error(errc::bad_input, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Lattice schema: either an explicit family
///   {"universe": ["n","d","v"], "elements": {"B": [], "N": ["n"], ...}}
/// or a poset of join-irreducibles
///   {"join_irreducibles": {"elems": ["n","d","v"], "leq": [["n","v"],["d","v"]]}}
/// Exactly one of "elements" / "join_irreducibles" must be present.
inline LatticePtr parse_lattice(const ojson& j) {
  if (!j.is_object()) throw error(errc::bad_input, "lattice spec must be a JSON object");
  const bool has_elements = j.contains("elements");
  const bool has_ji = j.contains("join_irreducibles");
  if (has_elements == has_ji)
    throw error(errc::bad_input,
                "lattice spec needs exactly one of 'elements' and 'join_irreducibles'");
  if (has_elements) {
    if (!j.contains("universe") || !j.at("universe").is_array())
      throw error(errc::bad_input, "lattice spec needs a 'universe' atom list");
    Universe u(j.at("universe").get<std::vector<std::string>>());
    std::vector<std::pair<std::string, Bits>> named;
    for (const auto& [name, atoms] : j.at("elements").items()) {
      if (!atoms.is_array()) throw error(errc::bad_input, "element '" + name + "' must list atoms");
      named.emplace_back(name, u.subset_of(atoms.get<std::vector<std::string>>()));
    }
    return make_lattice(Lattice::from_subsets(std::move(u), named));
  }
  const ojson& ji = j.at("join_irreducibles");
  if (!ji.contains("elems") || !ji.at("elems").is_array())
    throw error(errc::bad_input, "'join_irreducibles' needs an 'elems' list");
  std::vector<std::pair<std::string, std::string>> pairs;
  if (ji.contains("leq"))
    for (const auto& pr : ji.at("leq")) {
      if (!pr.is_array() || pr.size() != 2)
        throw error(errc::bad_input, "'leq' entries must be [a, b] pairs");
      pairs.emplace_back(pr[0].get<std::string>(), pr[1].get<std::string>());
    }
  Poset p(ji.at("elems").get<std::vector<std::string>>(), pairs);
  return make_lattice(Lattice::from_join_irreducibles(p));
}

inline ojson lattice_to_json(const Lattice& lat) {
  ojson j;
  j["universe"] = lat.universe().atoms();
  ojson elems = ojson::object();
  for (const auto& e : lat.elements()) elems[lat.display(e)] = lat.universe().names_of(e.bits);
  j["elements"] = std::move(elems);
  return j;
}

/// Domain schema:
///   {"domains": [{"name": "X1", "elements": ["A1",...], "zero": "A1", "one": "A4"}, ...],
///    "lattice": <lattice object or path string>}
/// "zero"/"one" are optional. A path is resolved against base_dir.
inline std::pair<std::vector<Domain>, LatticePtr> parse_domains(const ojson& j,
                                                                const std::filesystem::path& base_dir) {
  if (!j.is_object() || !j.contains("domains") || !j.at("domains").is_array())
    throw error(errc::bad_input, "domain spec needs a 'domains' array");
  LatticePtr lat;
  if (j.contains("lattice")) {
    const ojson& lj = j.at("lattice");
    if (lj.is_string()) {
      std::filesystem::path p = lj.get<std::string>();
      lat = parse_lattice(load_json_file(p.is_absolute() ? p : base_dir / p));
    } else {
      lat = parse_lattice(lj);
    }
  }
  std::vector<Domain> doms;
  for (const auto& dj : j.at("domains")) {
    Domain d;
    if (!dj.contains("name") || !dj.contains("elements"))
      throw error(errc::bad_input, "every domain needs 'name' and 'elements'");
    d.name = dj.at("name").get<std::string>();
    d.points = dj.at("elements").get<std::vector<std::string>>();
    auto point_index = [&](const std::string& nm) -> std::size_t {
      for (std::size_t i = 0; i < d.points.size(); ++i)
        if (d.points[i] == nm) return i;
      throw error(errc::bad_input, "designated element '" + nm + "' not in domain '" + d.name + "'");
    };
    if (dj.contains("zero")) d.zero = point_index(dj.at("zero").get<std::string>());
    if (dj.contains("one")) d.one = point_index(dj.at("one").get<std::string>());
    doms.push_back(std::move(d));
  }
  return {std::move(doms), std::move(lat)};
}

namespace detail {

// Splits one CSV line; cells may be double-quoted ("" escapes a quote), so
// element names containing commas stay usable.
inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  for (auto& s : out) {
    std::size_t b = s.find_first_not_of(" \t");
    std::size_t e = s.find_last_not_of(" \t");
    s = b == std::string::npos ? "" : s.substr(b, e - b + 1);
  }
  return out;
}

}  // namespace detail

/// Table CSV: header "x1,...,xn,f", one row per tuple of the product, cell
/// values resolved by name against the domain spec / lattice.
inline FunctionTable parse_table_csv(const std::string& text, std::vector<Domain> domains,
                                     LatticePtr lattice) {
  const std::size_t n = domains.size();
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw error(errc::bad_input, "empty table file");
  auto header = detail::split_csv_line(line);
  std::vector<std::string> expected;
  for (std::size_t k = 1; k <= n; ++k) expected.push_back("x" + std::to_string(k));
  expected.push_back("f");
  if (header != expected) {
    std::string want;
    for (std::size_t i = 0; i < expected.size(); ++i) want += (i ? "," : "") + expected[i];
    throw error(errc::bad_input, "table header must be '" + want + "'");
  }

  std::size_t count = 1;
  for (const auto& d : domains) count *= d.points.size();
  std::vector<LatticeElement> values(count, lattice->bottom());
  std::vector<bool> seen(count, false);

  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    auto cells = detail::split_csv_line(line);
    if (cells.size() != n + 1)
      throw error(errc::bad_input, "line " + std::to_string(lineno) + ": expected " +
                                       std::to_string(n + 1) + " cells");
    Tuple t(n);
    for (std::size_t k = 0; k < n; ++k) {
      const auto& pts = domains[k].points;
      std::size_t idx = pts.size();
      for (std::size_t i = 0; i < pts.size(); ++i)
        if (pts[i] == cells[k]) { idx = i; break; }
      if (idx == pts.size())
        throw error(errc::bad_input, "line " + std::to_string(lineno) + ": '" + cells[k] +
                                         "' is not in domain '" + domains[k].name + "'");
      t[k] = idx;
    }
    auto val = lattice->element_named(cells[n]);
    if (!val)
      throw error(errc::bad_input,
                  "line " + std::to_string(lineno) + ": '" + cells[n] + "' is not a lattice element");
    std::size_t flat = 0;
    for (std::size_t k = 0; k < n; ++k) flat = flat * domains[k].points.size() + t[k];
    if (seen[flat])
      throw error(errc::bad_input, "line " + std::to_string(lineno) + ": duplicate tuple");
    seen[flat] = true;
    values[flat] = *val;
  }

  for (std::size_t flat = 0; flat < count; ++flat)
    if (!seen[flat]) {
      Tuple t(n);
      std::size_t rest = flat;
      for (std::size_t k = n; k-- > 0;) {
        t[k] = rest % domains[k].points.size();
        rest /= domains[k].points.size();
      }
      std::string name = "(";
      for (std::size_t k = 0; k < n; ++k) name += (k ? "," : "") + domains[k].points[t[k]];
      throw error(errc::bad_input, "table is not total: missing tuple " + name + ")");
    }

  return FunctionTable(std::move(domains), std::move(lattice), std::move(values));
}

/// Polynomial schema: {"arity": 2, "coeffs": {"": "B", "1": "N", "2": "B", "1,2": "V"}}
/// with keys listing 1-based variable indices. Always emitted canonical, in
/// bitmask order.
inline ojson polynomial_to_json(const PolynomialFn& p) {
  ojson j;
  j["arity"] = p.arity();
  ojson coeffs = ojson::object();
  for (std::size_t I = 0; I < p.coeffs().size(); ++I) {
    std::string key;
    for (std::size_t i = 0; i < p.arity(); ++i)
      if (I >> i & 1) key += (key.empty() ? "" : ",") + std::to_string(i + 1);
    coeffs[key] = p.lattice()->display(p.coeffs()[I]);
  }
  j["coeffs"] = std::move(coeffs);
  return j;
}

inline PolynomialFn parse_polynomial(const ojson& j, const LatticePtr& lattice) {
  if (!j.is_object() || !j.contains("arity") || !j.contains("coeffs"))
    throw error(errc::bad_input, "polynomial spec needs 'arity' and 'coeffs'");
  const std::size_t n = j.at("arity").get<std::size_t>();
  if (n > PolynomialFn::max_arity) throw error(errc::bad_input, "polynomial arity exceeds the cap");
  std::vector<LatticeElement> raw(std::size_t{1} << n, lattice->bottom());
  for (const auto& [key, val] : j.at("coeffs").items()) {
    std::size_t mask = 0;
    if (!key.empty()) {
      std::istringstream ks(key);
      std::string tok;
      while (std::getline(ks, tok, ',')) {
        std::size_t idx = 0;
        try {
          idx = std::stoul(tok);
        } catch (...) {
          throw error(errc::bad_input, "bad coefficient key '" + key + "'");
        }
        if (idx < 1 || idx > n) throw error(errc::bad_input, "coefficient key '" + key + "' out of range");
        mask |= std::size_t{1} << (idx - 1);
      }
    }
    auto e = lattice->element_named(val.get<std::string>());
    if (!e)
      throw error(errc::bad_input, "'" + val.get<std::string>() + "' is not a lattice element");
    raw[mask] = *e;
  }
  return PolynomialFn(lattice, n, std::move(raw));
}

/// Inner maps: {"X1": {"A1": "B", ...}, "X2": {...}} in declared order.
inline ojson phi_to_json(const PhiVector& phi, const std::vector<Domain>& domains,
                         const Lattice& lat) {
  ojson j = ojson::object();
  for (std::size_t k = 0; k < domains.size(); ++k) {
    ojson m = ojson::object();
    for (std::size_t a = 0; a < domains[k].points.size(); ++a)
      m[domains[k].points[a]] = lat.display(phi.at(k, a));
    j[domains[k].name] = std::move(m);
  }
  return j;
}

inline PhiVector parse_phi(const ojson& j, const std::vector<Domain>& domains, const Lattice& lat) {
  if (!j.is_object()) throw error(errc::bad_input, "phi spec must be an object");
  PhiVector phi;
  phi.maps.resize(domains.size());
  for (std::size_t k = 0; k < domains.size(); ++k) {
    if (!j.contains(domains[k].name))
      throw error(errc::bad_input, "phi spec missing domain '" + domains[k].name + "'");
    const ojson& m = j.at(domains[k].name);
    phi.maps[k].resize(domains[k].points.size());
    for (std::size_t a = 0; a < domains[k].points.size(); ++a) {
      const auto& pt = domains[k].points[a];
      if (!m.contains(pt))
        throw error(errc::bad_input, "phi spec missing point '" + pt + "' of '" + domains[k].name + "'");
      auto e = lat.element_named(m.at(pt).get<std::string>());
      if (!e)
        throw error(errc::bad_input,
                    "'" + m.at(pt).get<std::string>() + "' is not a lattice element");
      phi.maps[k][a] = *e;
    }
  }
  return phi;
}

inline ojson tuple_to_json(const FunctionTable& f, const Tuple& t) {
  ojson arr = ojson::array();
  for (std::size_t k = 0; k < f.arity(); ++k) arr.push_back(f.domains()[k].points[t[k]]);
  return arr;
}

}  // namespace io
}  // namespace latfact
