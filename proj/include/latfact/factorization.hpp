#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "latfact/polynomial.hpp"
#include "latfact/table.hpp"

namespace latfact {

/// One inner map per coordinate: maps_[k][point] is the value of phi_k at
/// that point of X_k.
struct PhiVector {
  std::vector<std::vector<LatticeElement>> maps;

  LatticeElement at(std::size_t k, std::size_t point) const { return maps[k][point]; }
  friend bool operator==(const PhiVector&, const PhiVector&) = default;
};

/// Pointwise least and greatest admissible inner maps.
struct PhiBounds {
  std::vector<std::vector<LatticeElement>> lower;  // [k][point]
  std::vector<std::vector<LatticeElement>> upper;
};

struct BoundaryWitness {
  std::size_t coord = 0;
  Tuple tuple;        // the x at which the sandwich fails
  bool lower = true;  // true: f(x_k^0) <= f(x) failed, else f(x) <= f(x_k^1)
};

struct BoundaryCheck {
  bool ok = false;
  std::optional<BoundaryWitness> witness;
};

namespace detail {

inline void check_phi_shape(const FunctionTable& f, const PhiVector& phi) {
  if (phi.maps.size() != f.arity())
    throw error(errc::arity_mismatch, "phi vector has " + std::to_string(phi.maps.size()) +
                                          " coordinates, table has " + std::to_string(f.arity()));
  for (std::size_t k = 0; k < f.arity(); ++k) {
    if (phi.maps[k].size() != f.domains()[k].points.size())
      throw error(errc::arity_mismatch, "phi map for '" + f.domains()[k].name +
                                            "' does not cover the domain");
    for (const auto& v : phi.maps[k])
      if (!f.lattice().contains(v))
        throw error(errc::foreign_element,
                    "phi value '" + f.lattice().display(v) + "' not in carrier");
  }
}

}  // namespace detail

/// The n-variable sandwich condition: f(x_k^0) <= f(x) <= f(x_k^1) for every
/// coordinate k and tuple x, w.r.t. the designated elements.
inline BoundaryCheck check_boundary(const FunctionTable& f) {
  f.require_bounds();
  for (std::size_t flat = 0; flat < f.tuple_count(); ++flat) {
    Tuple x = f.tuple_at(flat);
    Bits fx = f.value_at(flat).bits;
    for (std::size_t k = 0; k < f.arity(); ++k) {
      if (!subset(f.value(FunctionTable::replaced(x, k, f.zero_of(k))).bits, fx))
        return {false, BoundaryWitness{k, x, true}};
      if (!subset(fx, f.value(FunctionTable::replaced(x, k, f.one_of(k))).bits))
        return {false, BoundaryWitness{k, x, false}};
    }
  }
  return {true, std::nullopt};
}

/// All ordered pairs (z0, z1) per coordinate for which the sandwich condition
/// holds. An empty list for some coordinate means no designated pair works,
/// so the table cannot be factorized.
inline std::vector<std::vector<std::pair<std::size_t, std::size_t>>> infer_bounds(const FunctionTable& f) {
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> out(f.arity());
  for (std::size_t k = 0; k < f.arity(); ++k) {
    const std::size_t m = f.domains()[k].points.size();
    for (std::size_t z0 = 0; z0 < m; ++z0)
      for (std::size_t z1 = 0; z1 < m; ++z1) {
        if (z0 == z1) continue;
        bool ok = true;
        for (std::size_t flat = 0; flat < f.tuple_count() && ok; ++flat) {
          Tuple x = f.tuple_at(flat);
          Bits fx = f.value_at(flat).bits;
          ok = subset(f.value(FunctionTable::replaced(x, k, z0)).bits, fx) &&
               subset(fx, f.value(FunctionTable::replaced(x, k, z1)).bits);
        }
        if (ok) out[k].emplace_back(z0, z1);
      }
  }
  return out;
}

/// The closure terms joined into the lower inner bound at (k, a), one per
/// tuple with x_k = a, in table row order.
inline std::vector<LatticeElement> phi_minus_joinands(const FunctionTable& f, std::size_t k,
                                                      std::size_t a) {
  f.require_bounds();
  const Lattice& lat = f.lattice();
  std::vector<LatticeElement> terms;
  for (std::size_t flat = 0; flat < f.tuple_count(); ++flat) {
    Tuple x = f.tuple_at(flat);
    if (x[k] != a) continue;
    Bits f0 = f.value(FunctionTable::replaced(x, k, f.zero_of(k))).bits;
    terms.push_back(lat.closure(f.value_at(flat).bits & lat.complement(f0)));
  }
  return terms;
}

/// The interior terms met into the upper inner bound at (k, a), in row order.
inline std::vector<LatticeElement> phi_plus_meetands(const FunctionTable& f, std::size_t k,
                                                     std::size_t a) {
  f.require_bounds();
  const Lattice& lat = f.lattice();
  std::vector<LatticeElement> terms;
  for (std::size_t flat = 0; flat < f.tuple_count(); ++flat) {
    Tuple x = f.tuple_at(flat);
    if (x[k] != a) continue;
    Bits f1 = f.value(FunctionTable::replaced(x, k, f.one_of(k))).bits;
    terms.push_back(lat.interior(f.value_at(flat).bits | lat.complement(f1)));
  }
  return terms;
}

/// Least and greatest inner maps: any phi usable in a factorization lies
/// pointwise between them. Requires the sandwich condition.
inline PhiBounds phi_bounds(const FunctionTable& f) {
  auto bc = check_boundary(f);
  if (!bc.ok)
    throw error(errc::boundary_violated,
                "sandwich condition fails at " + f.format_tuple(bc.witness->tuple) + " in coordinate " +
                    f.domains()[bc.witness->coord].name);
  PhiBounds out;
  out.lower.resize(f.arity());
  out.upper.resize(f.arity());
  for (std::size_t k = 0; k < f.arity(); ++k) {
    const std::size_t m = f.domains()[k].points.size();
    out.lower[k].resize(m);
    out.upper[k].resize(m);
    for (std::size_t a = 0; a < m; ++a) {
      Bits jn = 0;
      for (const auto& t : phi_minus_joinands(f, k, a)) jn |= t.bits;
      Bits mt = f.lattice().top().bits;
      for (const auto& t : phi_plus_meetands(f, k, a)) mt &= t.bits;
      out.lower[k][a] = {jn};
      out.upper[k][a] = {mt};
    }
  }
  return out;
}

/// Witness that the inner-map interval is empty at some point: a pair of
/// tuples sharing their k-th component whose closure term exceeds the
/// interior term.
struct PhiGapWitness {
  std::size_t coord = 0;
  Tuple x;  // meetand side
  Tuple y;  // joinand side
};

struct PseudoCheck {
  bool ok = false;
  std::optional<BoundaryWitness> boundary_witness;
  std::optional<PhiGapWitness> gap_witness;
};

/// Decide factorizability: the sandwich condition plus pointwise
/// lower <= upper for the inner bounds.
inline PseudoCheck is_pseudo_polynomial(const FunctionTable& f) {
  f.require_bounds();
  auto bc = check_boundary(f);
  if (!bc.ok) return {false, bc.witness, std::nullopt};
  const Lattice& lat = f.lattice();
  PhiBounds pb = phi_bounds(f);
  for (std::size_t k = 0; k < f.arity(); ++k)
    for (std::size_t a = 0; a < f.domains()[k].points.size(); ++a) {
      if (subset(pb.lower[k][a].bits, pb.upper[k][a].bits)) continue;
      // locate a violating joinand/meetand pair
      for (std::size_t fy = 0; fy < f.tuple_count(); ++fy) {
        Tuple y = f.tuple_at(fy);
        if (y[k] != a) continue;
        Bits jn = lat.closure(f.value_at(fy).bits &
                              lat.complement(f.value(FunctionTable::replaced(y, k, f.zero_of(k))).bits))
                      .bits;
        for (std::size_t fx = 0; fx < f.tuple_count(); ++fx) {
          Tuple x = f.tuple_at(fx);
          if (x[k] != a) continue;
          Bits mt = lat.interior(f.value_at(fx).bits |
                                 lat.complement(f.value(FunctionTable::replaced(x, k, f.one_of(k))).bits))
                        .bits;
          if (!subset(jn, mt)) return {false, std::nullopt, PhiGapWitness{k, x, y}};
        }
      }
    }
  return {true, std::nullopt, std::nullopt};
}

/// The canonical polynomial usable in every factorization: coefficients are
/// the table values at the designated tuples.
inline PolynomialFn factor_polynomial(const FunctionTable& f) {
  auto bc = check_boundary(f);
  if (!bc.ok)
    throw error(errc::boundary_violated,
                "sandwich condition fails at " + f.format_tuple(bc.witness->tuple));
  std::vector<LatticeElement> raw(std::size_t{1} << f.arity());
  for (std::size_t I = 0; I < raw.size(); ++I) raw[I] = f.value(f.one_hat(I));
  return PolynomialFn(f.codomain(), f.arity(), std::move(raw));
}

/// Does phi satisfy the per-coordinate boundary condition
/// phi_k(0) <= phi_k(a) <= phi_k(1)?
inline bool satisfies_boundary_condition(const FunctionTable& f, const PhiVector& phi) {
  f.require_bounds();
  detail::check_phi_shape(f, phi);
  for (std::size_t k = 0; k < f.arity(); ++k) {
    Bits lo = phi.at(k, f.zero_of(k)).bits, hi = phi.at(k, f.one_of(k)).bits;
    for (const auto& v : phi.maps[k])
      if (!subset(lo, v.bits) || !subset(v.bits, hi)) return false;
  }
  return true;
}

/// Pointwise interval test: lower <= phi <= upper for every coordinate. This
/// is equivalent to phi occurring in some factorization of f.
inline bool check_phi_admissible(const FunctionTable& f, const PhiVector& phi) {
  detail::check_phi_shape(f, phi);
  if (!satisfies_boundary_condition(f, phi))
    throw error(errc::bc1_violated, "phi violates the boundary condition");
  PhiBounds pb = phi_bounds(f);  // throws boundary_violated if the sandwich fails
  for (std::size_t k = 0; k < f.arity(); ++k)
    for (std::size_t a = 0; a < phi.maps[k].size(); ++a)
      if (!subset(pb.lower[k][a].bits, phi.at(k, a).bits) ||
          !subset(phi.at(k, a).bits, pb.upper[k][a].bits))
        return false;
  return true;
}

namespace detail {

/// Raw coefficient families of the least/greatest interpolating polynomials
/// for a fixed phi, indexed by coordinate bitmask.
inline std::pair<std::vector<LatticeElement>, std::vector<LatticeElement>> interpolation_coeffs(
    const FunctionTable& f, const PhiVector& phi) {
  const Lattice& lat = f.lattice();
  const std::size_t n = f.arity();
  std::vector<Bits> a(n), b(n);
  for (std::size_t k = 0; k < n; ++k) {
    a[k] = phi.at(k, f.zero_of(k)).bits;
    b[k] = phi.at(k, f.one_of(k)).bits;
  }
  std::vector<LatticeElement> lo(std::size_t{1} << n), hi(std::size_t{1} << n);
  for (std::size_t I = 0; I < lo.size(); ++I) {
    Bits fI = f.value(f.one_hat(I)).bits;
    Bits m = fI;
    for (std::size_t i = 0; i < n; ++i)
      if (!(I >> i & 1)) m &= lat.complement(a[i]);
    Bits p = fI;
    for (std::size_t i = 0; i < n; ++i)
      if (I >> i & 1) p |= lat.complement(b[i]);
    lo[I] = lat.closure(m);
    hi[I] = lat.interior(p);
  }
  return {std::move(lo), std::move(hi)};
}

}  // namespace detail

/// Least and greatest polynomials solving the 2^n-point interpolation problem
/// p(e_I) = f(1^_I) for the given admissible phi; a polynomial yields a
/// factorization with phi exactly when it lies between them.
inline std::pair<PolynomialFn, PolynomialFn> interpolation_bounds(const FunctionTable& f,
                                                                  const PhiVector& phi) {
  if (!check_phi_admissible(f, phi))
    throw error(errc::phi_not_admissible, "phi is outside the admissible interval");
  auto [lo, hi] = detail::interpolation_coeffs(f, phi);
  return {PolynomialFn(f.codomain(), f.arity(), std::move(lo)),
          PolynomialFn(f.codomain(), f.arity(), std::move(hi))};
}

struct VerifyResult {
  bool ok = false;
  std::optional<Tuple> witness;  // a tuple where f(x) != p(phi(x))
};

/// Check f(x) = p(phi(x)) on every tuple.
inline VerifyResult verify_exhaustive(const FunctionTable& f, const PhiVector& phi,
                                      const PolynomialFn& p) {
  detail::check_phi_shape(f, phi);
  if (p.arity() != f.arity())
    throw error(errc::arity_mismatch, "polynomial arity does not match the table");
  std::vector<LatticeElement> args(f.arity());
  for (std::size_t flat = 0; flat < f.tuple_count(); ++flat) {
    Tuple x = f.tuple_at(flat);
    for (std::size_t k = 0; k < f.arity(); ++k) args[k] = phi.at(k, x[k]);
    if (!(p.evaluate_unchecked(args) == f.value_at(flat))) return {false, x};
  }
  return {true, std::nullopt};
}

/// Interpolation shortcut: with an admissible phi, f = p o phi holds iff
/// p(e_I) = f(1^_I) for all I, where e_I is phi applied to the designated
/// tuple 1^_I. Only 2^n evaluations.
inline VerifyResult verify_by_interpolation(const FunctionTable& f, const PhiVector& phi,
                                            const PolynomialFn& p) {
  detail::check_phi_shape(f, phi);
  if (p.arity() != f.arity())
    throw error(errc::arity_mismatch, "polynomial arity does not match the table");
  const std::size_t n = f.arity();
  std::vector<LatticeElement> e(n);
  for (std::size_t I = 0; I < (std::size_t{1} << n); ++I) {
    Tuple hat = f.one_hat(I);
    for (std::size_t k = 0; k < n; ++k) e[k] = phi.at(k, hat[k]);
    if (!(p.evaluate_unchecked(e) == f.value(hat))) return {false, hat};
  }
  return {true, std::nullopt};
}

/// Verify a factorization, using the interpolation shortcut when phi is
/// admissible and falling back to the exhaustive check otherwise.
inline VerifyResult verify_factorization(const FunctionTable& f, const PhiVector& phi,
                                         const PolynomialFn& p) {
  detail::check_phi_shape(f, phi);
  bool shortcut = false;
  if (f.bounds_set() && satisfies_boundary_condition(f, phi)) {
    try {
      shortcut = check_phi_admissible(f, phi);
    } catch (const error&) {
      shortcut = false;
    }
  }
  return shortcut ? verify_by_interpolation(f, phi, p) : verify_exhaustive(f, phi, p);
}

struct MedianDecompCheck {
  bool ok = false;
  std::optional<std::size_t> coord;
  std::optional<Tuple> tuple;
};

/// Median decomposition test: f(x) = med(f(x_k^0), phi_k(x_k), f(x_k^1)) for
/// every coordinate and tuple.
inline MedianDecompCheck check_pseudo_median_decomposable(const FunctionTable& f,
                                                          const PhiVector& phi) {
  f.require_bounds();
  detail::check_phi_shape(f, phi);
  const Lattice& lat = f.lattice();
  for (std::size_t flat = 0; flat < f.tuple_count(); ++flat) {
    Tuple x = f.tuple_at(flat);
    for (std::size_t k = 0; k < f.arity(); ++k) {
      LatticeElement u = f.value(FunctionTable::replaced(x, k, f.zero_of(k)));
      LatticeElement w = f.value(FunctionTable::replaced(x, k, f.one_of(k)));
      if (!(lat.median(u, phi.at(k, x[k]), w) == f.value_at(flat)))
        return {false, k, x};
    }
  }
  return {true, std::nullopt, std::nullopt};
}

/// Interval form of the median equation: for u <= m <= w,
/// med(u, v, w) = m holds iff m ^ ~u <= v <= m v ~w.
inline bool median_solve_check(const Lattice& lat, LatticeElement u, LatticeElement m,
                               LatticeElement w, LatticeElement v) {
  if (!lat.contains(u) || !lat.contains(m) || !lat.contains(w) || !lat.contains(v))
    throw error(errc::foreign_element, "median arguments must be carrier members");
  if (!subset(u.bits, m.bits) || !subset(m.bits, w.bits))
    throw error(errc::precondition_violated, "need u <= m <= w");
  return subset(m.bits & lat.complement(u), v.bits) && subset(v.bits, m.bits | lat.complement(w));
}

struct Factorization {
  PhiVector phi;
  PolynomialFn p;
  bool verified = false;
};

struct EnumerateOptions {
  std::size_t cap = 10000;   // stop after this many factorizations
  bool count_only = false;   // count without materializing
  bool strict = false;       // throw cap_exceeded instead of flagging
};

struct EnumerationResult {
  std::vector<Factorization> items;
  std::size_t phi_vectors = 0;  // admissible inner-map vectors (exact)
  std::size_t total = 0;        // factorizations found (exact up to cap)
  bool capped = false;
  std::vector<std::vector<std::size_t>> interval_sizes;  // [k][point]
  unsigned long long phi_product_bound = 0;              // product of interval sizes
};

namespace detail {

/// All maps X_k -> Y within the pointwise interval, filtered by the boundary
/// condition; deterministic order (points left to right, carrier order per
/// point, last point varying fastest).
inline std::vector<std::vector<LatticeElement>> admissible_maps(const FunctionTable& f,
                                                                const PhiBounds& pb, std::size_t k) {
  const Lattice& lat = f.lattice();
  const std::size_t m = f.domains()[k].points.size();
  std::vector<std::vector<LatticeElement>> choices(m);
  for (std::size_t a = 0; a < m; ++a)
    for (const auto& y : lat.elements())
      if (subset(pb.lower[k][a].bits, y.bits) && subset(y.bits, pb.upper[k][a].bits))
        choices[a].push_back(y);
  std::vector<std::vector<LatticeElement>> out;
  std::vector<LatticeElement> cur(m);
  auto rec = [&](auto&& self, std::size_t a) -> void {
    if (a == m) {
      Bits lo = cur[f.zero_of(k)].bits, hi = cur[f.one_of(k)].bits;
      for (const auto& v : cur)
        if (!subset(lo, v.bits) || !subset(v.bits, hi)) return;
      out.push_back(cur);
      return;
    }
    for (const auto& y : choices[a]) {
      cur[a] = y;
      self(self, a + 1);
    }
  };
  rec(rec, 0);
  return out;
}

}  // namespace detail

/// Every factorization (phi, p) of f: phi ranges over the pointwise interval
/// between the inner bounds (subject to the boundary condition) and p over
/// the monotone families between the interpolation bounds for that phi.
/// Deterministic order; every emitted item is re-verified.
inline EnumerationResult enumerate_factorizations(const FunctionTable& f,
                                                  const EnumerateOptions& opts = {}) {
  auto pc = is_pseudo_polynomial(f);
  if (!pc.ok) throw error(errc::not_pseudo_polynomial, "table admits no factorization");
  const Lattice& lat = f.lattice();
  PhiBounds pb = phi_bounds(f);

  EnumerationResult res;
  res.interval_sizes.resize(f.arity());
  res.phi_product_bound = 1;
  for (std::size_t k = 0; k < f.arity(); ++k) {
    const std::size_t m = f.domains()[k].points.size();
    res.interval_sizes[k].resize(m);
    for (std::size_t a = 0; a < m; ++a) {
      std::size_t c = 0;
      for (const auto& y : lat.elements())
        if (subset(pb.lower[k][a].bits, y.bits) && subset(y.bits, pb.upper[k][a].bits)) ++c;
      res.interval_sizes[k][a] = c;
      res.phi_product_bound *= c;
    }
  }

  std::vector<std::vector<std::vector<LatticeElement>>> per_coord(f.arity());
  res.phi_vectors = 1;
  for (std::size_t k = 0; k < f.arity(); ++k) {
    per_coord[k] = detail::admissible_maps(f, pb, k);
    res.phi_vectors *= per_coord[k].size();
  }

  PhiVector phi;
  phi.maps.resize(f.arity());
  bool done = false;
  auto walk = [&](auto&& self, std::size_t k) -> void {
    if (done) return;
    if (k == f.arity()) {
      auto [lo, hi] = detail::interpolation_coeffs(f, phi);
      detail::monotone_families_between(lat, f.arity(), lo, hi, [&](const std::vector<LatticeElement>& fam) {
        if (res.total == opts.cap) {
          if (opts.strict) throw error(errc::cap_exceeded, "factorization cap of " +
                                                               std::to_string(opts.cap) + " reached");
          res.capped = true;
          done = true;
          return false;
        }
        ++res.total;
        if (!opts.count_only) {
          PolynomialFn p(f.codomain(), f.arity(), fam);
          bool ok = verify_by_interpolation(f, phi, p).ok;
          res.items.push_back(Factorization{phi, std::move(p), ok});
        }
        return true;
      });
      return;
    }
    for (const auto& mp : per_coord[k]) {
      if (done) return;
      phi.maps[k] = mp;
      self(self, k + 1);
    }
  };
  walk(walk, 0);
  return res;
}

}  // namespace latfact
