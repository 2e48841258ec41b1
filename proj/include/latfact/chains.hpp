#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "latfact/factorization.hpp"

namespace latfact {

/// View of a lattice whose carrier is totally ordered: elements become levels
/// [0] c [1] c ... c [m], and every atom gets the rank of the first level
/// that contains it. Closure and interior then have closed forms.
class ChainContext {
 public:
  explicit ChainContext(LatticePtr lattice) : lattice_(std::move(lattice)) {
    if (!lattice_->is_chain())
      throw error(errc::not_a_chain, "carrier is not totally ordered");
    const auto elems = lattice_->elements();
    atom_rank_.assign(lattice_->universe().size(), 0);
    for (std::size_t i = 0; i < atom_rank_.size(); ++i)
      for (std::size_t lvl = 0; lvl < elems.size(); ++lvl)
        if (elems[lvl].bits >> i & 1) { atom_rank_[i] = lvl; break; }
  }

  const Lattice& lattice() const { return *lattice_; }
  const LatticePtr& lattice_ptr() const { return lattice_; }

  /// m: the number of proper inclusions along the carrier.
  std::size_t length() const { return lattice_->size() - 1; }

  LatticeElement level(std::size_t k) const { return lattice_->elements()[k]; }
  std::size_t rank(LatticeElement e) const { return lattice_->index_of(e); }

  /// Index of the first level containing the atom.
  std::size_t atom_rank(std::size_t atom) const { return atom_rank_[atom]; }

 private:
  LatticePtr lattice_;
  std::vector<std::size_t> atom_rank_;
};

/// cl(S) = [max rank over atoms of S] (with [0] for the empty set).
inline LatticeElement chain_closure(const ChainContext& ctx, Bits s) {
  std::size_t k = 0;
  for (std::size_t i = 0; i < ctx.lattice().universe().size(); ++i)
    if (s >> i & 1) k = std::max(k, ctx.atom_rank(i));
  return ctx.level(k);
}

/// int(S) = [min rank over atoms outside S, minus one] (with [m] for S = U).
inline LatticeElement chain_interior(const ChainContext& ctx, Bits s) {
  std::size_t k = ctx.length() + 1;
  for (std::size_t i = 0; i < ctx.lattice().universe().size(); ++i)
    if (!(s >> i & 1)) k = std::min(k, ctx.atom_rank(i));
  return ctx.level(k - 1);
}

namespace detail {

inline void require_chain(const FunctionTable& f) {
  if (!f.lattice().is_chain())
    throw error(errc::not_a_chain, "codomain carrier is not totally ordered");
}

}  // namespace detail

/// The three value classes at (k, a): values strictly inside their sandwich
/// interval (w), values pinned to the top of it (l), and values pinned to the
/// bottom (u). Each sorted in carrier order, duplicates removed.
struct WLUSets {
  std::vector<LatticeElement> w, l, u;
};

inline WLUSets wlu_sets(const FunctionTable& f, std::size_t k, std::size_t a) {
  detail::require_chain(f);
  f.require_bounds();
  const Lattice& lat = f.lattice();
  std::vector<bool> in_w(lat.size(), false), in_l(lat.size(), false), in_u(lat.size(), false);
  for (std::size_t flat = 0; flat < f.tuple_count(); ++flat) {
    Tuple x = f.tuple_at(flat);
    if (x[k] != a) continue;
    Bits f0 = f.value(FunctionTable::replaced(x, k, f.zero_of(k))).bits;
    Bits fx = f.value_at(flat).bits;
    Bits f1 = f.value(FunctionTable::replaced(x, k, f.one_of(k))).bits;
    bool below = subset(f0, fx) && f0 != fx;  // f(x_k^0) < f(x)
    bool above = subset(fx, f1) && fx != f1;  // f(x) < f(x_k^1)
    std::size_t r = lat.index_of({fx});
    if (below && above)
      in_w[r] = true;
    else if (below && fx == f1)
      in_l[r] = true;
    else if (f0 == fx && above)
      in_u[r] = true;
  }
  WLUSets out;
  for (std::size_t r = 0; r < lat.size(); ++r) {
    if (in_w[r]) out.w.push_back(lat.elements()[r]);
    if (in_l[r]) out.l.push_back(lat.elements()[r]);
    if (in_u[r]) out.u.push_back(lat.elements()[r]);
  }
  return out;
}

/// Chain form of the inner bounds: lower = join of l and w, upper = meet of
/// u and w (empty join = 0, empty meet = 1). Agrees with phi_bounds.
inline PhiBounds chain_phi_bounds(const FunctionTable& f) {
  detail::require_chain(f);
  auto bc = check_boundary(f);
  if (!bc.ok)
    throw error(errc::boundary_violated,
                "sandwich condition fails at " + f.format_tuple(bc.witness->tuple));
  const Lattice& lat = f.lattice();
  PhiBounds out;
  out.lower.resize(f.arity());
  out.upper.resize(f.arity());
  for (std::size_t k = 0; k < f.arity(); ++k) {
    const std::size_t m = f.domains()[k].points.size();
    out.lower[k].resize(m);
    out.upper[k].resize(m);
    for (std::size_t a = 0; a < m; ++a) {
      WLUSets s = wlu_sets(f, k, a);
      Bits lo = 0, hi = lat.top().bits;
      for (const auto& e : s.l) lo |= e.bits;
      for (const auto& e : s.w) lo |= e.bits;
      for (const auto& e : s.u) hi &= e.bits;
      for (const auto& e : s.w) hi &= e.bits;
      out.lower[k][a] = {lo};
      out.upper[k][a] = {hi};
    }
  }
  return out;
}

/// Per-point reformulation of the admissibility interval on chains:
/// (a) w is empty or the singleton {phi_k(a)};
/// (b) phi_k(a) >= join of l;
/// (c) phi_k(a) <= meet of u.
struct SuffTriple {
  bool a = false, b = false, c = false;
  bool all() const { return a && b && c; }
};

inline std::vector<std::vector<SuffTriple>> suff_conditions(const FunctionTable& f,
                                                            const PhiVector& phi) {
  detail::require_chain(f);
  detail::check_phi_shape(f, phi);
  const Lattice& lat = f.lattice();
  std::vector<std::vector<SuffTriple>> out(f.arity());
  for (std::size_t k = 0; k < f.arity(); ++k) {
    const std::size_t m = f.domains()[k].points.size();
    out[k].resize(m);
    for (std::size_t a = 0; a < m; ++a) {
      WLUSets s = wlu_sets(f, k, a);
      Bits v = phi.at(k, a).bits;
      SuffTriple t;
      t.a = s.w.empty() || (s.w.size() == 1 && s.w[0].bits == v);
      Bits ljoin = 0;
      for (const auto& e : s.l) ljoin |= e.bits;
      t.b = subset(ljoin, v);
      Bits umeet = lat.top().bits;
      for (const auto& e : s.u) umeet &= e.bits;
      t.c = subset(v, umeet);
      out[k][a] = t;
    }
  }
  return out;
}

struct ChainCheck {
  bool ok = false;
  std::optional<BoundaryWitness> boundary_witness;
  // two tuples sharing their k-th component with incomparable-for-chains values
  std::optional<PhiGapWitness> gap_witness;
};

/// Chain characterization of factorizability: the sandwich condition, and for
/// tuples x, y sharing their k-th component, f(x) strictly above its lower
/// sandwich value and f(y) strictly below its upper one force f(x) <= f(y).
inline ChainCheck chain_characterization(const FunctionTable& f) {
  detail::require_chain(f);
  f.require_bounds();
  auto bc = check_boundary(f);
  if (!bc.ok) return {false, bc.witness, std::nullopt};
  for (std::size_t k = 0; k < f.arity(); ++k)
    for (std::size_t fx = 0; fx < f.tuple_count(); ++fx) {
      Tuple x = f.tuple_at(fx);
      Bits vx = f.value_at(fx).bits;
      Bits x0 = f.value(FunctionTable::replaced(x, k, f.zero_of(k))).bits;
      if (x0 == vx) continue;  // need f(x_k^0) < f(x)
      for (std::size_t fy = 0; fy < f.tuple_count(); ++fy) {
        Tuple y = f.tuple_at(fy);
        if (y[k] != x[k]) continue;
        Bits vy = f.value_at(fy).bits;
        Bits y1 = f.value(FunctionTable::replaced(y, k, f.one_of(k))).bits;
        if (vy == y1) continue;  // need f(y) < f(y_k^1)
        if (!subset(vx, vy)) return {false, std::nullopt, PhiGapWitness{k, y, x}};
      }
    }
  return {true, std::nullopt, std::nullopt};
}

/// Inner bounds computed without designated elements: every point of X_k
/// serves as the reference. When declared bounds satisfying the sandwich
/// condition exist, this coincides with phi_bounds; afterwards 0/1 can be
/// read off as argmin/argmax (ties broken by declared order).
struct FreePhiResult {
  PhiBounds bounds;
  // inferred (0, 1) per coordinate when the lower/upper rows have comparable
  // extrema; always present when the carrier is a chain
  std::vector<std::optional<std::pair<std::size_t, std::size_t>>> designated;
  std::vector<std::vector<std::size_t>> argmin_points;  // all points attaining the minimum
  std::vector<std::vector<std::size_t>> argmax_points;
};

inline FreePhiResult free_phi_bounds(const FunctionTable& f) {
  const Lattice& lat = f.lattice();
  FreePhiResult res;
  res.bounds.lower.resize(f.arity());
  res.bounds.upper.resize(f.arity());
  res.designated.resize(f.arity());
  res.argmin_points.resize(f.arity());
  res.argmax_points.resize(f.arity());
  for (std::size_t k = 0; k < f.arity(); ++k) {
    const std::size_t m = f.domains()[k].points.size();
    res.bounds.lower[k].resize(m);
    res.bounds.upper[k].resize(m);
    for (std::size_t a = 0; a < m; ++a) {
      Bits jn = 0;
      Bits mt = lat.top().bits;
      for (std::size_t flat = 0; flat < f.tuple_count(); ++flat) {
        Tuple x = f.tuple_at(flat);
        if (x[k] != a) continue;
        Bits fx = f.value_at(flat).bits;
        for (std::size_t h = 0; h < m; ++h) {
          Bits fh = f.value(FunctionTable::replaced(x, k, h)).bits;
          jn |= lat.closure(fx & lat.complement(fh)).bits;
          mt &= lat.interior(fx | lat.complement(fh)).bits;
        }
      }
      res.bounds.lower[k][a] = {jn};
      res.bounds.upper[k][a] = {mt};
    }
    // argmin of the lower row / argmax of the upper row, first point wins ties
    std::optional<std::size_t> zmin, zmax;
    for (std::size_t a = 0; a < m; ++a) {
      bool is_min = true, is_max = true;
      for (std::size_t b = 0; b < m; ++b) {
        if (!subset(res.bounds.lower[k][a].bits, res.bounds.lower[k][b].bits)) is_min = false;
        if (!subset(res.bounds.upper[k][b].bits, res.bounds.upper[k][a].bits)) is_max = false;
      }
      if (is_min) {
        res.argmin_points[k].push_back(a);
        if (!zmin) zmin = a;
      }
      if (is_max) {
        res.argmax_points[k].push_back(a);
        if (!zmax) zmax = a;
      }
    }
    if (zmin && zmax)
      res.designated[k] = std::make_pair(*zmin, *zmax);
  }
  return res;
}

}  // namespace latfact
