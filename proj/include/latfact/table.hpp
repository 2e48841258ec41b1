#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "latfact/lattice.hpp"

namespace latfact {

/// One input coordinate: a named finite set, points in declared order, with
/// optional designated elements 0_X and 1_X (as indices into points).
struct Domain {
  std::string name;
  std::vector<std::string> points;
  std::optional<std::size_t> zero;
  std::optional<std::size_t> one;
};

/// Index tuple into the product of the domains.
using Tuple = std::vector<std::size_t>;

/// A total map f: X1 x ... x Xn -> Y given as a table. Values are stored
/// row-major with the last coordinate varying fastest. Immutable.
class FunctionTable {
 public:
  FunctionTable(std::vector<Domain> domains, LatticePtr codomain, std::vector<LatticeElement> values)
      : domains_(std::move(domains)), codomain_(std::move(codomain)), values_(std::move(values)) {
    std::size_t count = 1;
    for (const auto& d : domains_) {
      if (d.points.size() < 2)
        throw error(errc::bad_input, "domain '" + d.name + "' needs at least two elements");
      for (std::size_t i = 0; i < d.points.size(); ++i)
        for (std::size_t j = i + 1; j < d.points.size(); ++j)
          if (d.points[i] == d.points[j])
            throw error(errc::bad_input, "duplicate point '" + d.points[i] + "' in domain '" + d.name + "'");
      if (d.zero && *d.zero >= d.points.size())
        throw error(errc::bad_input, "designated 0 out of range in domain '" + d.name + "'");
      if (d.one && *d.one >= d.points.size())
        throw error(errc::bad_input, "designated 1 out of range in domain '" + d.name + "'");
      if (d.zero && d.one && *d.zero == *d.one)
        throw error(errc::bad_input, "designated elements coincide in domain '" + d.name + "'");
      count *= d.points.size();
    }
    if (values_.size() != count)
      throw error(errc::bad_input, "table has " + std::to_string(values_.size()) + " values, expected " +
                                       std::to_string(count));
    for (const auto& v : values_)
      if (!codomain_->contains(v))
        throw error(errc::foreign_element, "table value '" + codomain_->display(v) + "' not in carrier");
  }

  std::size_t arity() const { return domains_.size(); }
  const std::vector<Domain>& domains() const { return domains_; }
  const LatticePtr& codomain() const { return codomain_; }
  const Lattice& lattice() const { return *codomain_; }
  std::size_t tuple_count() const { return values_.size(); }

  std::size_t flat_index(std::span<const std::size_t> tuple) const {
    std::size_t idx = 0;
    for (std::size_t k = 0; k < domains_.size(); ++k) idx = idx * domains_[k].points.size() + tuple[k];
    return idx;
  }

  Tuple tuple_at(std::size_t flat) const {
    Tuple t(domains_.size());
    for (std::size_t k = domains_.size(); k-- > 0;) {
      t[k] = flat % domains_[k].points.size();
      flat /= domains_[k].points.size();
    }
    return t;
  }

  LatticeElement value(std::span<const std::size_t> tuple) const { return values_[flat_index(tuple)]; }
  LatticeElement value_at(std::size_t flat) const { return values_[flat]; }
  const std::vector<LatticeElement>& values() const { return values_; }

  bool bounds_set() const {
    for (const auto& d : domains_)
      if (!d.zero || !d.one) return false;
    return true;
  }

  void require_bounds() const {
    if (!bounds_set())
      throw error(errc::bounds_missing, "designated 0/1 elements are not set for every coordinate");
  }

  std::size_t zero_of(std::size_t k) const { return *domains_[k].zero; }
  std::size_t one_of(std::size_t k) const { return *domains_[k].one; }

  /// Same table with the designated pair of every coordinate replaced.
  FunctionTable with_bounds(const std::vector<std::pair<std::size_t, std::size_t>>& bounds) const {
    if (bounds.size() != domains_.size())
      throw error(errc::bad_input, "bounds list does not match arity");
    std::vector<Domain> doms = domains_;
    for (std::size_t k = 0; k < doms.size(); ++k) {
      doms[k].zero = bounds[k].first;
      doms[k].one = bounds[k].second;
    }
    return FunctionTable(std::move(doms), codomain_, values_);
  }

  /// The tuple x_k^a: x with its k-th component replaced by a.
  static Tuple replaced(std::span<const std::size_t> x, std::size_t k, std::size_t a) {
    Tuple t(x.begin(), x.end());
    t[k] = a;
    return t;
  }

  /// The designated tuple 1^_I: coordinate i gets 1_{X_i} when i is in I,
  /// 0_{X_i} otherwise. I is a bitmask over coordinates.
  Tuple one_hat(std::size_t I) const {
    require_bounds();
    Tuple t(domains_.size());
    for (std::size_t k = 0; k < domains_.size(); ++k) t[k] = (I >> k & 1) ? one_of(k) : zero_of(k);
    return t;
  }

  std::string format_tuple(std::span<const std::size_t> tuple) const {
    std::string out = "(";
    for (std::size_t k = 0; k < domains_.size(); ++k) {
      if (k) out += ",";
      out += domains_[k].points[tuple[k]];
    }
    return out + ")";
  }

 private:
  std::vector<Domain> domains_;
  LatticePtr codomain_;
  std::vector<LatticeElement> values_;
};

}  // namespace latfact
