#pragma once

#include <string>
#include <utility>
#include <vector>

#include "latfact/chains.hpp"
#include "latfact/io.hpp"
#include "latfact/oracle.hpp"

namespace latfact {

enum class ChainMode { automatic, force, off };
enum class BoundsMode { automatic, explicit_only };

struct PipelineOptions {
  std::size_t cap = 10000;
  bool count_only = false;
  bool strict = false;
  ChainMode chain_mode = ChainMode::automatic;
  BoundsMode bounds_mode = BoundsMode::automatic;
};

/// Outcome of a pipeline run: the JSON report plus the CLI exit code
/// (0 positive verdict, 1 negative verdict, 2 input problem, 3 cap hit).
struct PipelineResult {
  ojson report;
  int exit_code = 0;
};

namespace detail {

inline ojson inferred_bounds_json(const FunctionTable& f,
                                  const std::vector<std::vector<std::pair<std::size_t, std::size_t>>>& inf) {
  ojson arr = ojson::array();
  for (std::size_t k = 0; k < f.arity(); ++k) {
    ojson entry;
    entry["domain"] = f.domains()[k].name;
    ojson pairs = ojson::array();
    for (const auto& [z0, z1] : inf[k])
      pairs.push_back(ojson::array({f.domains()[k].points[z0], f.domains()[k].points[z1]}));
    entry["pairs"] = std::move(pairs);
    arr.push_back(std::move(entry));
  }
  return arr;
}

inline ojson bounds_used_json(const FunctionTable& f) {
  ojson j = ojson::object();
  for (const auto& d : f.domains())
    j[d.name] = ojson::array({d.points[*d.zero], d.points[*d.one]});
  return j;
}

inline ojson phi_table_json(const FunctionTable& f, const std::vector<std::vector<LatticeElement>>& t) {
  ojson j = ojson::object();
  for (std::size_t k = 0; k < f.arity(); ++k) {
    ojson m = ojson::object();
    for (std::size_t a = 0; a < f.domains()[k].points.size(); ++a)
      m[f.domains()[k].points[a]] = f.lattice().display(t[k][a]);
    j[f.domains()[k].name] = std::move(m);
  }
  return j;
}

inline ojson pseudo_witness_json(const FunctionTable& f, const PseudoCheck& pc) {
  if (pc.boundary_witness) {
    const auto& w = *pc.boundary_witness;
    ojson j;
    j["kind"] = "boundary";
    j["coordinate"] = f.domains()[w.coord].name;
    j["tuple"] = io::tuple_to_json(f, w.tuple);
    j["side"] = w.lower ? "lower" : "upper";
    return j;
  }
  if (pc.gap_witness) {
    const auto& w = *pc.gap_witness;
    ojson j;
    j["kind"] = "phi_gap";
    j["coordinate"] = f.domains()[w.coord].name;
    j["x"] = io::tuple_to_json(f, w.x);
    j["y"] = io::tuple_to_json(f, w.y);
    return j;
  }
  return nullptr;
}

inline ojson chain_section(const FunctionTable& f) {
  ojson j;
  auto cc = chain_characterization(f);
  j["characterization"] = cc.ok;
  ojson wlu = ojson::object();
  for (std::size_t k = 0; k < f.arity(); ++k) {
    ojson per_point = ojson::object();
    for (std::size_t a = 0; a < f.domains()[k].points.size(); ++a) {
      WLUSets s = wlu_sets(f, k, a);
      ojson cell;
      auto names = [&](const std::vector<LatticeElement>& v) {
        ojson arr = ojson::array();
        for (const auto& e : v) arr.push_back(f.lattice().display(e));
        return arr;
      };
      cell["w"] = names(s.w);
      cell["l"] = names(s.l);
      cell["u"] = names(s.u);
      per_point[f.domains()[k].points[a]] = std::move(cell);
    }
    wlu[f.domains()[k].name] = std::move(per_point);
  }
  j["wlu"] = std::move(wlu);

  if (cc.ok) {
    PhiBounds pb = chain_phi_bounds(f);
    ojson suff = ojson::object();
    auto suff_json = [&](const PhiVector& phi) {
      auto tr = suff_conditions(f, phi);
      ojson out = ojson::object();
      for (std::size_t k = 0; k < f.arity(); ++k) {
        ojson per_point = ojson::object();
        for (std::size_t a = 0; a < f.domains()[k].points.size(); ++a)
          per_point[f.domains()[k].points[a]] =
              ojson{{"a", tr[k][a].a}, {"b", tr[k][a].b}, {"c", tr[k][a].c}};
        out[f.domains()[k].name] = std::move(per_point);
      }
      return out;
    };
    suff["phi_minus"] = suff_json(PhiVector{pb.lower});
    suff["phi_plus"] = suff_json(PhiVector{pb.upper});
    j["suff"] = std::move(suff);
  } else {
    j["suff"] = nullptr;
  }

  auto fr = free_phi_bounds(f);
  ojson fb;
  fb["phi_minus"] = phi_table_json(f, fr.bounds.lower);
  fb["phi_plus"] = phi_table_json(f, fr.bounds.upper);
  ojson des = ojson::object();
  for (std::size_t k = 0; k < f.arity(); ++k) {
    const auto& d = f.domains()[k];
    if (fr.designated[k])
      des[d.name] = ojson::array({d.points[fr.designated[k]->first], d.points[fr.designated[k]->second]});
    else
      des[d.name] = nullptr;
  }
  fb["designated"] = std::move(des);
  j["free_bounds"] = std::move(fb);
  return j;
}

struct ResolvedBounds {
  FunctionTable table;
  ojson inferred;
  bool ok = false;        // bounds available and usable
  bool ambiguous = false; // more than one candidate assignment
  bool none = false;      // some coordinate has no valid pair
};

/// Coordinates with declared designated elements keep them; the rest are
/// inferred, requiring a unique valid pair each.
inline ResolvedBounds resolve_bounds(const FunctionTable& f, BoundsMode mode) {
  auto inf = infer_bounds(f);
  ojson inferred = inferred_bounds_json(f, inf);
  if (mode == BoundsMode::explicit_only) {
    f.require_bounds();
    return {f, std::move(inferred), true, false, false};
  }
  if (f.bounds_set()) return {f, std::move(inferred), true, false, false};
  bool none = false, ambiguous = false;
  std::vector<std::pair<std::size_t, std::size_t>> choice(f.arity());
  for (std::size_t k = 0; k < f.arity(); ++k) {
    const Domain& d = f.domains()[k];
    if (d.zero && d.one) {
      choice[k] = {*d.zero, *d.one};
    } else if (inf[k].empty()) {
      none = true;
    } else if (inf[k].size() > 1) {
      ambiguous = true;
    } else {
      choice[k] = inf[k].front();
    }
  }
  if (none) return {f, std::move(inferred), false, false, true};
  if (ambiguous) return {f, std::move(inferred), false, true, false};
  return {f.with_bounds(choice), std::move(inferred), true, false, false};
}

}  // namespace detail

/// The analysis pipeline behind `check` and `factorize`.
inline PipelineResult run_analysis(const FunctionTable& input, const PipelineOptions& opts,
                                   bool factorize) {
  ojson rep;
  rep["schema"] = 1;

  auto rb = detail::resolve_bounds(input, opts.bounds_mode);
  rep["inferred_bounds"] = rb.inferred;
  if (rb.ambiguous) {
    rep["boundary_ok"] = nullptr;
    rep["bounds_used"] = nullptr;
    rep["pseudo_polynomial"] = nullptr;
    rep["witness"] = nullptr;
    rep["error"] = "designated elements are ambiguous; pass an explicit choice";
    return {std::move(rep), 2};
  }
  if (rb.none) {
    rep["boundary_ok"] = false;
    rep["bounds_used"] = nullptr;
    rep["phi_minus"] = nullptr;
    rep["phi_plus"] = nullptr;
    rep["pseudo_polynomial"] = false;
    rep["witness"] = nullptr;
    return {std::move(rep), 1};
  }
  const FunctionTable& f = rb.table;
  rep["bounds_used"] = detail::bounds_used_json(f);

  auto pc = is_pseudo_polynomial(f);
  bool boundary_ok = !pc.boundary_witness.has_value();
  rep["boundary_ok"] = boundary_ok;
  if (boundary_ok) {
    PhiBounds pb = phi_bounds(f);
    rep["phi_minus"] = detail::phi_table_json(f, pb.lower);
    rep["phi_plus"] = detail::phi_table_json(f, pb.upper);
  } else {
    rep["phi_minus"] = nullptr;
    rep["phi_plus"] = nullptr;
  }
  rep["pseudo_polynomial"] = pc.ok;
  rep["witness"] = detail::pseudo_witness_json(f, pc);

  bool chain_active = false;
  if (opts.chain_mode == ChainMode::force && !f.lattice().is_chain())
    throw error(errc::not_a_chain, "--chain-mode force on a non-chain codomain");
  if (opts.chain_mode != ChainMode::off && f.lattice().is_chain() && boundary_ok)
    chain_active = true;
  if (chain_active) rep["chain"] = detail::chain_section(f);

  int exit_code = pc.ok ? 0 : 1;

  if (factorize && pc.ok) {
    rep["p0"] = io::polynomial_to_json(factor_polynomial(f));
    EnumerateOptions eo;
    eo.cap = opts.cap;
    eo.count_only = opts.count_only;
    eo.strict = opts.strict;
    auto res = enumerate_factorizations(f, eo);
    ojson facts = ojson::array();
    for (const auto& item : res.items) {
      ojson fj;
      fj["phi"] = io::phi_to_json(item.phi, f.domains(), f.lattice());
      fj["p"] = io::polynomial_to_json(item.p);
      fj["verified"] = item.verified;
      facts.push_back(std::move(fj));
    }
    rep["factorizations"] = std::move(facts);
    ojson counts;
    counts["phi_vectors"] = res.phi_vectors;
    counts["total"] = res.total;
    counts["capped"] = res.capped;
    if (res.capped) {
      ojson sizes = ojson::object();
      for (std::size_t k = 0; k < f.arity(); ++k) {
        ojson m = ojson::object();
        for (std::size_t a = 0; a < f.domains()[k].points.size(); ++a)
          m[f.domains()[k].points[a]] = res.interval_sizes[k][a];
        sizes[f.domains()[k].name] = std::move(m);
      }
      counts["interval_sizes"] = std::move(sizes);
      counts["phi_product_bound"] = res.phi_product_bound;
    }
    rep["counts"] = std::move(counts);
  } else if (factorize) {
    rep["p0"] = nullptr;
    rep["factorizations"] = ojson::array();
    rep["counts"] = ojson{{"phi_vectors", 0}, {"total", 0}, {"capped", false}};
  }

  return {std::move(rep), exit_code};
}

/// Named stock lattices used by the oracle comparison: "chainN" (N carrier
/// elements), "pow2" (all subsets of a 2-set), "pow2top" (pow2 with a new
/// top adjoined).
inline LatticePtr builtin_lattice(const std::string& name) {
  if (name.rfind("chain", 0) == 0) {
    std::size_t n = 0;
    try {
      n = std::stoul(name.substr(5));
    } catch (...) {
      throw error(errc::bad_input, "bad chain size in '" + name + "'");
    }
    if (n < 1 || n > 32) throw error(errc::bad_input, "chain size out of range in '" + name + "'");
    return make_lattice(chain_lattice(n - 1));
  }
  if (name == "pow2")
    return make_lattice(Lattice::from_join_irreducibles(Poset({"a", "b"}, {})));
  if (name == "pow2top")
    return make_lattice(
        Lattice::from_join_irreducibles(Poset({"a", "b", "t"}, {{"a", "t"}, {"b", "t"}})));
  throw error(errc::bad_input, "unknown builtin lattice '" + name + "'");
}

/// Order-independent fingerprint of a factorization for set comparison.
inline std::vector<std::size_t> factorization_key(const Lattice& lat, const PhiVector& phi,
                                                  const PolynomialFn& p) {
  std::vector<std::size_t> key;
  for (const auto& m : phi.maps)
    for (const auto& v : m) key.push_back(lat.index_of(v));
  for (const auto& c : p.coeffs()) key.push_back(lat.index_of(c));
  return key;
}

/// Run the engine and the brute-force oracle side by side over seeded random
/// instances; verdicts must match and, when factorizable, the full
/// factorization sets must coincide.
inline ojson run_oracle_compare(const std::vector<std::pair<std::string, LatticePtr>>& lattices,
                                std::uint64_t seed_lo, std::uint64_t seed_hi,
                                const InstanceLimits& limits) {
  ojson summary;
  summary["schema"] = 1;
  summary["seeds"] = ojson::array({seed_lo, seed_hi});
  summary["limits"] = ojson{{"max_arity", limits.max_arity},
                            {"max_domain", limits.max_domain},
                            {"max_lattice", limits.max_lattice}};
  ojson latnames = ojson::array();
  for (const auto& [nm, ignored] : lattices) latnames.push_back(nm);
  summary["lattices"] = std::move(latnames);

  std::size_t instances = 0, pseudo = 0, non_pseudo = 0;
  ojson disagreements = ojson::array();
  for (const auto& [nm, lat] : lattices) {
    for (std::uint64_t seed = seed_lo; seed <= seed_hi; ++seed) {
      FunctionTable f = random_instance(lat, seed, limits);
      ++instances;
      bool engine_yes = is_pseudo_polynomial(f).ok;
      auto brute = brute_force_factorizations(f, limits);
      bool oracle_yes = !brute.empty();
      std::string problem;
      if (engine_yes != oracle_yes) {
        problem = "verdict mismatch";
      } else if (engine_yes) {
        EnumerateOptions eo;
        eo.cap = 1'000'000;
        auto res = enumerate_factorizations(f, eo);
        if (res.capped) {
          problem = "enumeration capped";
        } else {
          std::vector<std::vector<std::size_t>> a, b;
          for (const auto& item : res.items)
            a.push_back(factorization_key(f.lattice(), item.phi, item.p));
          for (const auto& [phi, p] : brute) b.push_back(factorization_key(f.lattice(), phi, p));
          std::sort(a.begin(), a.end());
          std::sort(b.begin(), b.end());
          if (a != b) problem = "factorization sets differ";
        }
      }
      if (!problem.empty()) {
        disagreements.push_back(ojson{{"lattice", nm}, {"seed", seed}, {"problem", problem}});
      } else {
        (engine_yes ? pseudo : non_pseudo)++;
      }
    }
  }
  summary["instances"] = instances;
  summary["pseudo"] = pseudo;
  summary["non_pseudo"] = non_pseudo;
  summary["disagreements"] = disagreements;
  summary["pass"] = disagreements.empty();
  return summary;
}

/// The pipeline behind `verify`: check one claimed factorization.
inline PipelineResult run_verify(const FunctionTable& input, const PhiVector& phi,
                                 const PolynomialFn& p, const PipelineOptions& opts) {
  ojson rep;
  rep["schema"] = 1;
  auto rb = detail::resolve_bounds(input, opts.bounds_mode);
  if (rb.ambiguous) {
    rep["verified"] = nullptr;
    rep["error"] = "designated elements are ambiguous; pass an explicit choice";
    return {std::move(rep), 2};
  }
  const FunctionTable& f = rb.table;

  auto vr = verify_factorization(f, phi, p);
  rep["verified"] = vr.ok;
  rep["witness"] = vr.witness ? io::tuple_to_json(f, *vr.witness) : ojson(nullptr);

  // cite the admissibility interval when phi falls outside it
  ojson violation = nullptr;
  bool admissible = false;
  if (!rb.none && f.bounds_set()) {
    try {
      if (!satisfies_boundary_condition(f, phi)) {
        violation = ojson{{"kind", "boundary_condition"}};
      } else if (check_boundary(f).ok) {
        PhiBounds pb = phi_bounds(f);
        admissible = true;
        for (std::size_t k = 0; k < f.arity() && violation.is_null(); ++k)
          for (std::size_t a = 0; a < f.domains()[k].points.size(); ++a) {
            bool lo = subset(pb.lower[k][a].bits, phi.at(k, a).bits);
            bool hi = subset(phi.at(k, a).bits, pb.upper[k][a].bits);
            if (lo && hi) continue;
            admissible = false;
            violation = ojson{{"kind", "interval"},
                              {"coordinate", f.domains()[k].name},
                              {"point", f.domains()[k].points[a]},
                              {"value", f.lattice().display(phi.at(k, a))},
                              {"lower", f.lattice().display(pb.lower[k][a])},
                              {"upper", f.lattice().display(pb.upper[k][a])}};
            break;
          }
      }
    } catch (const error&) {
      violation = nullptr;
    }
  }
  rep["admissible"] = admissible;
  rep["admissibility_violation"] = violation;
  return {std::move(rep), vr.ok ? 0 : 1};
}

}  // namespace latfact
