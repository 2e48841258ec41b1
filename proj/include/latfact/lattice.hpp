#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "latfact/error.hpp"

namespace latfact {

/// A subset of the universe as a characteristic bit vector (atom i -> bit i).
using Bits = std::uint64_t;

/// Ordered set of named atoms; the order fixes bit positions.
class Universe {
 public:
  static constexpr std::size_t max_atoms = 64;

  Universe() = default;

  explicit Universe(std::vector<std::string> atoms) : atoms_(std::move(atoms)) {
    if (atoms_.size() > max_atoms)
      throw error(errc::bad_input, "universe exceeds " + std::to_string(max_atoms) + " atoms");
    for (std::size_t i = 0; i < atoms_.size(); ++i)
      for (std::size_t j = i + 1; j < atoms_.size(); ++j)
        if (atoms_[i] == atoms_[j])
          throw error(errc::bad_input, "duplicate atom name '" + atoms_[i] + "'");
  }

  std::size_t size() const { return atoms_.size(); }
  const std::vector<std::string>& atoms() const { return atoms_; }

  /// Mask of the full set U.
  Bits full() const {
    return atoms_.empty() ? 0 : (atoms_.size() == 64 ? ~Bits{0} : (Bits{1} << atoms_.size()) - 1);
  }

  std::optional<std::size_t> index_of(std::string_view atom) const {
    for (std::size_t i = 0; i < atoms_.size(); ++i)
      if (atoms_[i] == atom) return i;
    return std::nullopt;
  }

  Bits subset_of(const std::vector<std::string>& names) const {
    Bits s = 0;
    for (const auto& n : names) {
      auto i = index_of(n);
      if (!i) throw error(errc::bad_input, "unknown atom '" + n + "'");
      s |= Bits{1} << *i;
    }
    return s;
  }

  std::vector<std::string> names_of(Bits s) const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < atoms_.size(); ++i)
      if (s >> i & 1) out.push_back(atoms_[i]);
    return out;
  }

  bool operator==(const Universe&) const = default;

 private:
  std::vector<std::string> atoms_;
};

/// A member of the carrier Y, i.e. a subset of U known to lie in the lattice.
struct LatticeElement {
  Bits bits = 0;
  friend bool operator==(LatticeElement, LatticeElement) = default;
};

/// Subset order on raw bit sets.
inline bool subset(Bits a, Bits b) { return (a & ~b) == 0; }

/// Canonical carrier order: by cardinality, then by mask value.
inline bool canonical_less(Bits a, Bits b) {
  int pa = std::popcount(a), pb = std::popcount(b);
  return pa != pb ? pa < pb : a < b;
}

namespace detail {

struct PosetWitness {
  std::string kind;  // "antisymmetry" or "transitivity"
  std::vector<std::string> elems;
};

}  // namespace detail

/// Finite partial order given by its element names and the <= relation.
/// The diagonal is implicit; all other related pairs must be listed, and the
/// listed relation must already be antisymmetric and transitive.
class Poset {
 public:
  Poset(std::vector<std::string> elems, const std::vector<std::pair<std::string, std::string>>& leq_pairs)
      : elems_(std::move(elems)) {
    const std::size_t n = elems_.size();
    if (n > 20) throw error(errc::bad_input, "poset exceeds 20 elements");
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (elems_[i] == elems_[j])
          throw error(errc::bad_input, "duplicate poset element '" + elems_[i] + "'");
    leq_.assign(n * n, false);
    for (std::size_t i = 0; i < n; ++i) leq_[i * n + i] = true;
    for (const auto& [a, b] : leq_pairs) {
      auto ia = index_of(a), ib = index_of(b);
      if (!ia || !ib)
        throw error(errc::bad_input, "leq pair references unknown element");
      leq_[*ia * n + *ib] = true;
    }
    validate();
  }

  std::size_t size() const { return elems_.size(); }
  const std::vector<std::string>& elems() const { return elems_; }
  bool leq(std::size_t a, std::size_t b) const { return leq_[a * elems_.size() + b]; }

  std::optional<std::size_t> index_of(std::string_view name) const {
    for (std::size_t i = 0; i < elems_.size(); ++i)
      if (elems_[i] == name) return i;
    return std::nullopt;
  }

 private:
  void validate() const {
    const std::size_t n = elems_.size();
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        if (a != b && leq(a, b) && leq(b, a))
          throw error(errc::not_a_partial_order,
                      "antisymmetry fails on (" + elems_[a] + ", " + elems_[b] + ")");
        if (!leq(a, b)) continue;
        for (std::size_t c = 0; c < n; ++c)
          if (leq(b, c) && !leq(a, c))
            throw error(errc::not_a_partial_order, "transitivity fails on (" + elems_[a] + ", " +
                                                       elems_[b] + ", " + elems_[c] + ")");
      }
  }

  std::vector<std::string> elems_;
  std::vector<bool> leq_;  // row-major n*n
};

/// A finite distributive lattice realized as a union/intersection-closed
/// family of subsets of a finite universe, with 0 = {} and 1 = U.
/// Immutable after construction; all operations are pure.
class Lattice {
 public:
  /// Build from an explicit family. The family must already be closed; this
  /// never auto-closes (see close_family for that).
  static Lattice from_subsets(Universe universe, const std::vector<std::pair<std::string, Bits>>& named) {
    Lattice lat;
    lat.universe_ = std::move(universe);
    const Bits full = lat.universe_.full();
    std::set<std::string> seen_names;
    std::set<Bits> members;
    for (const auto& [name, bits] : named) {
      if (!subset(bits, full))
        throw error(errc::bad_input, "set '" + name + "' is not a subset of the universe");
      if (!seen_names.insert(name).second)
        throw error(errc::bad_input, "duplicate element name '" + name + "'");
      if (!members.insert(bits).second)
        throw error(errc::bad_input, "duplicate element under name '" + name + "'");
      lat.names_.emplace(bits, name);
    }
    if (!members.count(0) || !members.count(full))
      throw error(errc::missing_bounds, "family must contain the empty set and the full universe");
    for (Bits a : members)
      for (Bits b : members) {
        if (!members.count(a | b))
          throw error(errc::not_closed, "union of '" + lat.display(a) + "' and '" + lat.display(b) +
                                            "' is missing from the family");
        if (!members.count(a & b))
          throw error(errc::not_closed, "intersection of '" + lat.display(a) + "' and '" +
                                            lat.display(b) + "' is missing from the family");
      }
    lat.adopt(members);
    return lat;
  }

  /// Birkhoff construction: carrier = all down-sets of the poset, one atom
  /// per poset element.
  static Lattice from_join_irreducibles(const Poset& poset) {
    Lattice lat;
    lat.universe_ = Universe(poset.elems());
    const std::size_t n = poset.size();
    std::set<Bits> members;
    for (Bits s = 0; s < (Bits{1} << n); ++s) {
      bool down = true;
      for (std::size_t b = 0; b < n && down; ++b)
        if (s >> b & 1)
          for (std::size_t a = 0; a < n; ++a)
            if (poset.leq(a, b) && !(s >> a & 1)) { down = false; break; }
      if (down) members.insert(s);
    }
    lat.adopt(members);
    return lat;
  }

  const Universe& universe() const { return universe_; }
  std::size_t size() const { return elements_.size(); }
  std::span<const LatticeElement> elements() const { return elements_; }

  LatticeElement bottom() const { return elements_.front(); }
  LatticeElement top() const { return elements_.back(); }

  bool contains(LatticeElement e) const { return rank_.count(e.bits) != 0; }

  /// Position of an element in the canonical (cardinality, mask) order.
  std::size_t index_of(LatticeElement e) const {
    auto it = rank_.find(e.bits);
    if (it == rank_.end())
      throw error(errc::foreign_element, "'" + display(e.bits) + "' is not in the carrier");
    return it->second;
  }

  LatticeElement meet(LatticeElement a, LatticeElement b) const {
    require(a); require(b);
    return {a.bits & b.bits};
  }

  LatticeElement join(LatticeElement a, LatticeElement b) const {
    require(a); require(b);
    return {a.bits | b.bits};
  }

  bool leq(LatticeElement a, LatticeElement b) const {
    require(a); require(b);
    return subset(a.bits, b.bits);
  }

  /// Complement within P(U); the result need not lie in the carrier.
  Bits complement(Bits s) const { return universe_.full() & ~s; }
  Bits complement(LatticeElement e) const { return complement(e.bits); }

  /// Least carrier element containing S.
  LatticeElement closure(Bits s) const {
    Bits acc = universe_.full();
    for (const auto& e : elements_)
      if (subset(s, e.bits)) acc &= e.bits;
    return {acc};
  }

  /// Greatest carrier element contained in S.
  LatticeElement interior(Bits s) const {
    Bits acc = 0;
    for (const auto& e : elements_)
      if (subset(e.bits, s)) acc |= e.bits;
    return {acc};
  }

  LatticeElement median(LatticeElement a, LatticeElement b, LatticeElement c) const {
    require(a); require(b); require(c);
    return {(a.bits & b.bits) | (b.bits & c.bits) | (c.bits & a.bits)};
  }

  /// Carrier totally ordered under inclusion.
  bool is_chain() const {
    for (std::size_t i = 0; i + 1 < elements_.size(); ++i)
      if (!subset(elements_[i].bits, elements_[i + 1].bits)) return false;
    return true;
  }

  /// Elements with exactly one lower cover (and != 0); with the inclusion
  /// order these recover the Birkhoff poset.
  std::vector<LatticeElement> join_irreducibles() const {
    std::vector<LatticeElement> out;
    for (const auto& e : elements_) {
      if (e.bits == 0) continue;
      std::vector<Bits> below;
      for (const auto& d : elements_)
        if (d.bits != e.bits && subset(d.bits, e.bits)) below.push_back(d.bits);
      std::size_t covers = 0;
      for (Bits d : below) {
        bool maximal = true;
        for (Bits d2 : below)
          if (d2 != d && subset(d, d2)) { maximal = false; break; }
        if (maximal) ++covers;
      }
      if (covers == 1) out.push_back(e);
    }
    return out;
  }

  /// Display name: the given name if any, else "{a,b,...}".
  std::string display(Bits s) const {
    auto it = names_.find(s);
    if (it != names_.end()) return it->second;
    std::string out = "{";
    bool first = true;
    for (const auto& a : universe_.names_of(s)) {
      if (!first) out += ",";
      out += a;
      first = false;
    }
    return out + "}";
  }
  std::string display(LatticeElement e) const { return display(e.bits); }

  std::optional<LatticeElement> element_named(std::string_view name) const {
    for (const auto& e : elements_)
      if (display(e.bits) == name) return e;
    return std::nullopt;
  }

 private:
  void adopt(const std::set<Bits>& members) {
    elements_.reserve(members.size());
    for (Bits b : members) elements_.push_back({b});
    std::sort(elements_.begin(), elements_.end(),
              [](LatticeElement a, LatticeElement b) { return canonical_less(a.bits, b.bits); });
    for (std::size_t i = 0; i < elements_.size(); ++i) rank_.emplace(elements_[i].bits, i);
  }

  void require(LatticeElement e) const {
    if (!contains(e))
      throw error(errc::foreign_element, "'" + display(e.bits) + "' is not in the carrier");
  }

  Universe universe_;
  std::vector<LatticeElement> elements_;  // canonical order
  std::map<Bits, std::size_t> rank_;
  std::map<Bits, std::string> names_;
};

using LatticePtr = std::shared_ptr<const Lattice>;

inline LatticePtr make_lattice(Lattice lat) { return std::make_shared<const Lattice>(std::move(lat)); }

/// Convenience: the maximal chain {[0],[1],...,[m]} over atoms "1".."m".
inline Lattice chain_lattice(std::size_t m) {
  std::vector<std::string> atoms;
  for (std::size_t i = 1; i <= m; ++i) atoms.push_back(std::to_string(i));
  Universe u(std::move(atoms));
  std::vector<std::pair<std::string, Bits>> named;
  for (std::size_t k = 0; k <= m; ++k) {
    Bits s = k == 0 ? 0 : (k == 64 ? ~Bits{0} : (Bits{1} << k) - 1);
    named.emplace_back("[" + std::to_string(k) + "]", s);
  }
  return Lattice::from_subsets(std::move(u), named);
}

/// Close a family under union/intersection and add the bounds. Helper for
/// preparing input; from_subsets itself never auto-closes.
inline std::vector<Bits> close_family(const Universe& universe, std::vector<Bits> sets) {
  std::set<Bits> fam(sets.begin(), sets.end());
  fam.insert(0);
  fam.insert(universe.full());
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<Bits> cur(fam.begin(), fam.end());
    for (Bits a : cur)
      for (Bits b : cur) {
        if (fam.insert(a | b).second) grew = true;
        if (fam.insert(a & b).second) grew = true;
      }
  }
  std::vector<Bits> out(fam.begin(), fam.end());
  std::sort(out.begin(), out.end(), canonical_less);
  return out;
}

}  // namespace latfact
