#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "latfact/lattice.hpp"

namespace latfact {

/// An n-ary lattice polynomial function in canonical disjunctive normal form:
/// a coefficient d_I per I <= [n] (indexed by bitmask), monotone under
/// inclusion, with d_I = p(1_I). Stored canonically; constructors
/// canonicalize eagerly.
class PolynomialFn {
 public:
  static constexpr std::size_t max_arity = 20;

  PolynomialFn(LatticePtr lattice, std::size_t arity, std::vector<LatticeElement> raw_coeffs)
      : lattice_(std::move(lattice)), arity_(arity) {
    if (arity_ > max_arity)
      throw error(errc::bad_input, "arity " + std::to_string(arity_) + " exceeds the cap of " +
                                       std::to_string(max_arity));
    const std::size_t slots = std::size_t{1} << arity_;
    if (raw_coeffs.size() > slots)
      throw error(errc::bad_input, "coefficient family larger than 2^arity");
    raw_coeffs.resize(slots, lattice_->bottom());
    for (const auto& c : raw_coeffs)
      if (!lattice_->contains(c))
        throw error(errc::foreign_element, "coefficient '" + lattice_->display(c) + "' not in carrier");
    coeffs_ = std::move(raw_coeffs);
    // canonicalize: d_I <- join of raw_J over J <= I (subset OR transform)
    for (std::size_t bit = 0; bit < arity_; ++bit)
      for (std::size_t mask = 0; mask < slots; ++mask)
        if (mask >> bit & 1) coeffs_[mask].bits |= coeffs_[mask ^ (std::size_t{1} << bit)].bits;
  }

  std::size_t arity() const { return arity_; }
  const LatticePtr& lattice() const { return lattice_; }

  /// Canonical coefficients d_I indexed by bitmask I.
  const std::vector<LatticeElement>& coeffs() const { return coeffs_; }

  /// DNF evaluation: join over I of (d_I meet the y_i with i in I).
  LatticeElement evaluate(std::span<const LatticeElement> ys) const {
    if (ys.size() != arity_)
      throw error(errc::arity_mismatch, "expected " + std::to_string(arity_) + " arguments, got " +
                                            std::to_string(ys.size()));
    for (const auto& y : ys)
      if (!lattice_->contains(y))
        throw error(errc::foreign_element, "argument '" + lattice_->display(y) + "' not in carrier");
    return evaluate_unchecked(ys);
  }

  /// Evaluation without membership checks; arguments must be carrier members.
  LatticeElement evaluate_unchecked(std::span<const LatticeElement> ys) const {
    Bits acc = coeffs_[0].bits;
    const std::size_t slots = coeffs_.size();
    for (std::size_t mask = 1; mask < slots; ++mask) {
      Bits term = coeffs_[mask].bits;
      for (std::size_t i = 0; term != 0 && i < arity_; ++i)
        if (mask >> i & 1) term &= ys[i].bits;
      acc |= term;
    }
    return {acc};
  }

  /// Sugeno integral test: p(0,...,0) = 0 and p(1,...,1) = 1.
  bool is_sugeno() const {
    return coeffs_.front() == lattice_->bottom() && coeffs_.back() == lattice_->top();
  }

  friend bool operator==(const PolynomialFn& p, const PolynomialFn& q) {
    return p.arity_ == q.arity_ && p.coeffs_ == q.coeffs_;
  }

 private:
  LatticePtr lattice_;
  std::size_t arity_;
  std::vector<LatticeElement> coeffs_;
};

/// Equality of polynomial functions over the same lattice; by the uniqueness
/// of the canonical form this coincides with pointwise equality on Y^n.
inline bool equals(const PolynomialFn& p, const PolynomialFn& q) {
  if (p.arity() != q.arity())
    throw error(errc::arity_mismatch, "comparing polynomials of arity " + std::to_string(p.arity()) +
                                          " and " + std::to_string(q.arity()));
  if (p.lattice() != q.lattice() && !(p.lattice()->elements().size() == q.lattice()->elements().size() &&
                                      std::equal(p.lattice()->elements().begin(), p.lattice()->elements().end(),
                                                 q.lattice()->elements().begin(),
                                                 [](LatticeElement a, LatticeElement b) { return a == b; })))
    throw error(errc::bad_input, "polynomials live over different lattices");
  return p.coeffs() == q.coeffs();
}

namespace detail {

/// Enumerate monotone coefficient families with lo_I <= d_I <= hi_I, in
/// lexicographic order over bitmask indices (carrier order per slot),
/// backtracking with immediate-predecessor pruning. The sink returns false
/// to stop early.
template <typename Sink>
bool monotone_families_between(const Lattice& lat, std::size_t n, const std::vector<LatticeElement>& lo,
                               const std::vector<LatticeElement>& hi, Sink&& sink) {
  const std::size_t slots = std::size_t{1} << n;
  std::vector<LatticeElement> cur(slots);
  auto rec = [&](auto&& self, std::size_t I) -> bool {
    if (I == slots) return sink(cur);
    for (const auto& y : lat.elements()) {
      if (!subset(lo[I].bits, y.bits) || !subset(y.bits, hi[I].bits)) continue;
      bool mono = true;
      for (std::size_t b = 0; b < n && mono; ++b)
        if (I >> b & 1) mono = subset(cur[I ^ (std::size_t{1} << b)].bits, y.bits);
      if (!mono) continue;
      cur[I] = y;
      if (!self(self, I + 1)) return false;
    }
    return true;
  };
  return rec(rec, 0);
}

}  // namespace detail

/// The unary polynomial y -> s v (t ^ y), i.e. med(s, y, t). Requires s <= t.
inline PolynomialFn unary_median_form(LatticePtr lattice, LatticeElement s, LatticeElement t) {
  if (!lattice->contains(s) || !lattice->contains(t))
    throw error(errc::foreign_element, "median-form bounds must be carrier members");
  if (!subset(s.bits, t.bits))
    throw error(errc::bounds_not_ordered, "'" + lattice->display(s) + "' is not below '" +
                                              lattice->display(t) + "'");
  return PolynomialFn(std::move(lattice), 1, {s, t});
}

}  // namespace latfact
