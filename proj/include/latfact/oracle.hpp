#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "latfact/factorization.hpp"

namespace latfact {

/// Desk-scale guard rails for the brute-force ground truth.
struct InstanceLimits {
  std::size_t max_arity = 2;
  std::size_t max_domain = 3;
  std::size_t max_lattice = 6;
  unsigned long long search_cap = 100'000'000;  // candidate pairs scanned
};

/// All n-ary polynomial functions over the lattice, each exactly once, as
/// canonical monotone coefficient families in deterministic order.
inline std::vector<PolynomialFn> enumerate_all_polynomials(const LatticePtr& lattice, std::size_t n,
                                                           unsigned long long cap = 100'000'000) {
  const std::size_t slots = std::size_t{1} << n;
  if (std::pow(static_cast<double>(lattice->size()), static_cast<double>(slots)) >
      static_cast<double>(cap))
    throw error(errc::cap_exceeded, "polynomial search space exceeds the cap");
  std::vector<PolynomialFn> out;
  std::vector<LatticeElement> lo(slots, lattice->bottom()), hi(slots, lattice->top());
  detail::monotone_families_between(*lattice, n, lo, hi, [&](const std::vector<LatticeElement>& fam) {
    out.emplace_back(lattice, n, fam);
    return true;
  });
  return out;
}

/// Exhaustive ground truth: every (phi, p) with each phi_k satisfying the
/// boundary condition and f = p o phi pointwise. Deliberately ignorant of
/// the inner-bound machinery; only DNF evaluation is shared with the engine.
inline std::vector<std::pair<PhiVector, PolynomialFn>> brute_force_factorizations(
    const FunctionTable& f, const InstanceLimits& limits = {}) {
  f.require_bounds();
  const Lattice& lat = f.lattice();
  const std::size_t n = f.arity();
  if (n > limits.max_arity || lat.size() > limits.max_lattice)
    throw error(errc::cap_exceeded, "instance outside oracle limits");
  for (const auto& d : f.domains())
    if (d.points.size() > limits.max_domain)
      throw error(errc::cap_exceeded, "instance outside oracle limits");

  // all boundary-condition maps per coordinate, deterministic order
  std::vector<std::vector<std::vector<LatticeElement>>> per_coord(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t m = f.domains()[k].points.size();
    std::vector<LatticeElement> cur(m);
    auto rec = [&](auto&& self, std::size_t a) -> void {
      if (a == m) {
        Bits lo = cur[f.zero_of(k)].bits, hi = cur[f.one_of(k)].bits;
        for (const auto& v : cur)
          if (!subset(lo, v.bits) || !subset(v.bits, hi)) return;
        per_coord[k].push_back(cur);
        return;
      }
      for (const auto& y : lat.elements()) {
        cur[a] = y;
        self(self, a + 1);
      }
    };
    rec(rec, 0);
  }

  std::vector<PolynomialFn> polys = enumerate_all_polynomials(f.codomain(), n, limits.search_cap);

  unsigned long long pairs = polys.size();
  for (const auto& c : per_coord) pairs *= c.size();
  if (pairs > limits.search_cap)
    throw error(errc::cap_exceeded, "oracle search space exceeds the cap");

  // precompute every polynomial on all of Y^n once
  const std::size_t ysz = lat.size();
  std::size_t points = 1;
  for (std::size_t k = 0; k < n; ++k) points *= ysz;
  std::vector<std::vector<Bits>> ptable(polys.size(), std::vector<Bits>(points));
  {
    std::vector<LatticeElement> args(n);
    for (std::size_t pt = 0; pt < points; ++pt) {
      std::size_t rest = pt;
      for (std::size_t k = n; k-- > 0;) {
        args[k] = lat.elements()[rest % ysz];
        rest /= ysz;
      }
      for (std::size_t pi = 0; pi < polys.size(); ++pi)
        ptable[pi][pt] = polys[pi].evaluate_unchecked(args).bits;
    }
  }

  std::vector<std::pair<PhiVector, PolynomialFn>> out;
  PhiVector phi;
  phi.maps.resize(n);
  std::vector<std::size_t> row_point(f.tuple_count());
  auto walk = [&](auto&& self, std::size_t k) -> void {
    if (k == n) {
      for (std::size_t flat = 0; flat < f.tuple_count(); ++flat) {
        Tuple x = f.tuple_at(flat);
        std::size_t pt = 0;
        for (std::size_t j = 0; j < n; ++j) pt = pt * ysz + lat.index_of(phi.at(j, x[j]));
        row_point[flat] = pt;
      }
      for (std::size_t pi = 0; pi < polys.size(); ++pi) {
        bool ok = true;
        for (std::size_t flat = 0; flat < f.tuple_count() && ok; ++flat)
          ok = ptable[pi][row_point[flat]] == f.value_at(flat).bits;
        if (ok) out.emplace_back(phi, polys[pi]);
      }
      return;
    }
    for (const auto& mp : per_coord[k]) {
      phi.maps[k] = mp;
      self(self, k + 1);
    }
  };
  walk(walk, 0);
  return out;
}

/// Deterministic pseudo-random table over the given lattice. The generator is
/// fixed: a mersenne twister seeded with `seed` draws, in order, each domain
/// size uniformly from [2, max_domain]; arity is always max_arity. Odd seeds
/// then plant a factorizable composition (random boundary-condition maps and
/// a random monotone coefficient family, table = p o phi); even seeds draw
/// every table value independently and uniformly from the carrier. Designated
/// elements are always the first and last point of each domain.
inline FunctionTable random_instance(const LatticePtr& lattice, std::uint64_t seed,
                                     const InstanceLimits& limits = {}) {
  if (limits.max_arity == 0 || limits.max_domain < 2)
    throw error(errc::bad_input, "limits must allow at least one coordinate with two points");
  if (lattice->size() > limits.max_lattice)
    throw error(errc::cap_exceeded, "lattice larger than the instance limits");
  std::mt19937_64 rng(seed);
  const Lattice& lat = *lattice;
  const std::size_t n = limits.max_arity;

  std::vector<Domain> doms(n);
  std::size_t count = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t size = 2 + (limits.max_domain > 2
                                ? static_cast<std::size_t>(rng() % (limits.max_domain - 1))
                                : 0);
    doms[k].name = "X" + std::to_string(k + 1);
    for (std::size_t i = 0; i < size; ++i) doms[k].points.push_back("a" + std::to_string(i));
    doms[k].zero = 0;
    doms[k].one = size - 1;
    count *= size;
  }

  std::vector<LatticeElement> values(count);
  if (seed % 2 == 1) {
    // planted composition
    std::vector<std::vector<LatticeElement>> phi(n);
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t m = doms[k].points.size();
      LatticeElement lo = lat.elements()[rng() % lat.size()];
      LatticeElement hi = lat.elements()[rng() % lat.size()];
      if (!subset(lo.bits, hi.bits)) std::swap(lo, hi);
      if (!subset(lo.bits, hi.bits)) { lo = lat.bottom(); }  // incomparable draw
      std::vector<LatticeElement> between;
      for (const auto& y : lat.elements())
        if (subset(lo.bits, y.bits) && subset(y.bits, hi.bits)) between.push_back(y);
      phi[k].resize(m);
      phi[k][0] = lo;
      phi[k][m - 1] = hi;
      for (std::size_t a = 1; a + 1 < m; ++a) phi[k][a] = between[rng() % between.size()];
    }
    const std::size_t slots = std::size_t{1} << n;
    std::vector<LatticeElement> fam(slots);
    for (std::size_t I = 0; I < slots; ++I) {
      Bits floor = 0;
      for (std::size_t b = 0; b < n; ++b)
        if (I >> b & 1) floor |= fam[I ^ (std::size_t{1} << b)].bits;
      std::vector<LatticeElement> above;
      for (const auto& y : lat.elements())
        if (subset(floor, y.bits)) above.push_back(y);
      fam[I] = above[rng() % above.size()];
    }
    PolynomialFn p(lattice, n, fam);
    std::vector<LatticeElement> args(n);
    FunctionTable shape(doms, lattice, std::vector<LatticeElement>(count, lat.bottom()));
    for (std::size_t flat = 0; flat < count; ++flat) {
      Tuple x = shape.tuple_at(flat);
      for (std::size_t k = 0; k < n; ++k) args[k] = phi[k][x[k]];
      values[flat] = p.evaluate_unchecked(args);
    }
  } else {
    for (auto& v : values) v = lat.elements()[rng() % lat.size()];
  }
  return FunctionTable(std::move(doms), lattice, std::move(values));
}

}  // namespace latfact
