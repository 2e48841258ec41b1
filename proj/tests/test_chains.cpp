#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "test_support.hpp"

using namespace latfact;
using testsup::elem;

namespace {

FunctionTable random_chain_table(const LatticePtr& ch, std::vector<std::size_t> sizes,
                                 std::uint64_t seed) {
  std::uint64_t state = seed * 0x9e3779b97f4a7c15ull + 17;
  auto next = [&]() { state = state * 6364136223846793005ull + 1442695040888963407ull; return state >> 33; };
  std::vector<Domain> doms;
  std::size_t count = 1;
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    Domain d;
    d.name = "X" + std::to_string(k + 1);
    for (std::size_t i = 0; i < sizes[k]; ++i) d.points.push_back("p" + std::to_string(i));
    d.zero = 0;
    d.one = sizes[k] - 1;
    doms.push_back(std::move(d));
    count *= sizes[k];
  }
  std::vector<LatticeElement> vals(count);
  for (auto& v : vals) v = ch->elements()[next() % ch->size()];
  return FunctionTable(std::move(doms), ch, std::move(vals));
}

bool bounds_equal(const PhiBounds& a, const PhiBounds& b) {
  return a.lower == b.lower && a.upper == b.upper;
}

// 3x2 table over the 4-chain whose middle row has two distinct strictly
// sandwiched values, so its w-set has two members
FunctionTable double_w_table(const LatticePtr& ch3) {
  std::vector<Domain> doms = {{"X1", {"r0", "r1", "r2"}, 0, 2}, {"X2", {"c0", "c1"}, 0, 1}};
  auto L = [&](std::size_t k) { return ch3->elements()[k]; };
  std::vector<LatticeElement> vals = {L(0), L(0), L(1), L(2), L(3), L(3)};
  return FunctionTable(std::move(doms), ch3, std::move(vals));
}

}  // namespace

TEST_CASE("chain context and closed-form closure/interior") {
  auto ch3 = testsup::chain_ptr(3);
  ChainContext ctx(ch3);
  CHECK(ctx.length() == 3);

  CHECK(chain_closure(ctx, 0b010) == ctx.level(2));   // cl({2}) = [2]
  CHECK(chain_interior(ctx, 0b010) == ctx.level(0));  // int({2}) = [0]
  CHECK(chain_closure(ctx, 0) == ctx.level(0));
  CHECK(chain_interior(ctx, 0) == ctx.level(0));
  for (std::size_t k = 0; k <= 3; ++k) {
    CHECK(chain_closure(ctx, ctx.level(k).bits) == ctx.level(k));
    CHECK(chain_interior(ctx, ctx.level(k).bits) == ctx.level(k));
  }

  CHECK_THROWS_AS(ChainContext(testsup::airline_lattice()), error);

  // closed forms agree with the generic scan on every subset, m <= 8
  for (std::size_t m = 0; m <= 8; ++m) {
    auto ch = testsup::chain_ptr(m);
    ChainContext c(ch);
    const Bits full = ch->universe().full();
    for (Bits s = 0;; ++s) {
      if (s > full) break;
      CHECK(chain_closure(c, s) == ch->closure(s));
      CHECK(chain_interior(c, s) == ch->interior(s));
    }
  }

  // also on a chain carrier that is not the maximal prefix family
  Universe u({"1", "2", "3"});
  auto odd = make_lattice(Lattice::from_subsets(
      u, {{"0", 0b000}, {"m", 0b010}, {"1", 0b111}}));
  ChainContext oc(odd);
  const Bits full = odd->universe().full();
  for (Bits s = 0; s <= full; ++s) {
    CHECK(chain_closure(oc, s) == odd->closure(s));
    CHECK(chain_interior(oc, s) == odd->interior(s));
  }
}

TEST_CASE("w/l/u classification") {
  // f = min on {0,1}^2, mapped to the ends of the 3-element chain
  auto ch2 = testsup::chain_ptr(2);
  std::vector<Domain> doms = {{"X1", {"0", "1"}, 0, 1}, {"X2", {"0", "1"}, 0, 1}};
  auto bot = ch2->elements()[0], top = ch2->elements()[2];
  std::vector<LatticeElement> vals = {bot, bot, bot, top};
  FunctionTable fmin(doms, ch2, vals);

  auto s = wlu_sets(fmin, 0, 1);
  CHECK(s.w.empty());
  CHECK(s.l == std::vector<LatticeElement>{top});
  CHECK(s.u.empty());

  // constant tables never produce a strict inequality
  FunctionTable cf(doms, ch2, std::vector<LatticeElement>(4, ch2->elements()[1]));
  for (std::size_t k = 0; k < 2; ++k)
    for (std::size_t a = 0; a < 2; ++a) {
      auto e = wlu_sets(cf, k, a);
      CHECK(e.w.empty());
      CHECK(e.l.empty());
      CHECK(e.u.empty());
    }

  // at the designated 0 the l-set is empty by construction
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    auto t = random_chain_table(testsup::chain_ptr(3), {3, 2}, seed);
    if (!check_boundary(t).ok) continue;
    for (std::size_t k = 0; k < t.arity(); ++k) CHECK(wlu_sets(t, k, t.zero_of(k)).l.empty());
  }

  CHECK_THROWS_AS((void)wlu_sets(testsup::airline_table(testsup::airline_lattice()), 0, 0), error);
}

TEST_CASE("chain inner bounds match the generic ones") {
  // empty joins and meets: constant table
  auto ch4 = testsup::chain_ptr(4);
  std::vector<Domain> doms = {{"X1", {"a", "b"}, 0, 1}};
  FunctionTable cf(doms, ch4, std::vector<LatticeElement>(2, ch4->elements()[2]));
  PhiBounds cb = chain_phi_bounds(cf);
  CHECK(cb.lower[0][0] == ch4->bottom());
  CHECK(cb.upper[0][0] == ch4->top());
  CHECK(bounds_equal(cb, phi_bounds(cf)));

  for (std::size_t m = 1; m <= 5; ++m) {
    auto ch = testsup::chain_ptr(m);
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
      auto t = random_chain_table(ch, {3, 3}, seed);
      if (!check_boundary(t).ok) continue;
      CHECK(bounds_equal(chain_phi_bounds(t), phi_bounds(t)));
    }
  }

  // a double w-set forces lower > upper, blocking every inner map
  auto dw = double_w_table(testsup::chain_ptr(3));
  REQUIRE(check_boundary(dw).ok);
  PhiBounds pb = chain_phi_bounds(dw);
  CHECK_FALSE(subset(pb.lower[0][1].bits, pb.upper[0][1].bits));
  CHECK_FALSE(is_pseudo_polynomial(dw).ok);
}

TEST_CASE("the three per-point conditions equal the interval test") {
  auto ch = testsup::chain_ptr(3);
  std::uint64_t state = 5;
  auto next = [&]() { state = state * 6364136223846793005ull + 1442695040888963407ull; return state >> 33; };
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    auto t = random_chain_table(ch, {3, 2}, seed);
    if (!check_boundary(t).ok) continue;
    PhiBounds pb = phi_bounds(t);
    for (std::size_t trial = 0; trial < 20; ++trial) {
      PhiVector phi;
      phi.maps.resize(t.arity());
      for (std::size_t k = 0; k < t.arity(); ++k) {
        phi.maps[k].resize(t.domains()[k].points.size());
        for (auto& v : phi.maps[k]) v = ch->elements()[next() % ch->size()];
      }
      auto tr = suff_conditions(t, phi);
      for (std::size_t k = 0; k < t.arity(); ++k)
        for (std::size_t a = 0; a < t.domains()[k].points.size(); ++a) {
          bool interval = subset(pb.lower[k][a].bits, phi.at(k, a).bits) &&
                          subset(phi.at(k, a).bits, pb.upper[k][a].bits);
          CHECK(tr[k][a].all() == interval);
        }
    }
    // the two canonical maps always pass
    for (const auto& canon : {PhiVector{pb.lower}, PhiVector{pb.upper}}) {
      if (!is_pseudo_polynomial(t).ok) break;
      auto tr = suff_conditions(t, canon);
      for (const auto& row : tr)
        for (const auto& cell : row) CHECK(cell.all());
    }
  }

  // a singleton w pins the map: phi = that value passes, anything else fails (a)
  auto blocked = testsup::blocked_3x2_table(testsup::chain_ptr(2));
  auto s = wlu_sets(blocked, 0, 1);
  REQUIRE(s.w.size() == 1);

  // two distinct w values make (a) unsatisfiable for every phi
  auto dw = double_w_table(testsup::chain_ptr(3));
  for (std::size_t trial = 0; trial < 10; ++trial) {
    PhiVector phi;
    phi.maps = {{dw.lattice().elements()[trial % 4], dw.lattice().elements()[(trial + 1) % 4],
                 dw.lattice().elements()[3]},
                {dw.lattice().elements()[0], dw.lattice().elements()[3]}};
    auto tr = suff_conditions(dw, phi);
    CHECK_FALSE(tr[0][1].a);
  }
}

TEST_CASE("chain characterization equals the generic verdict") {
  CHECK_THROWS_AS((void)chain_characterization(testsup::airline_table(testsup::airline_lattice())),
                  error);

  // all 2x2 tables over the 3-chain
  auto ch = testsup::chain_ptr(2);
  std::vector<Domain> d22 = {{"X1", {"r0", "r1"}, 0, 1}, {"X2", {"c0", "c1"}, 0, 1}};
  for (std::size_t code = 0; code < 81; ++code) {
    std::size_t rest = code;
    std::vector<LatticeElement> vals(4);
    for (auto& v : vals) {
      v = ch->elements()[rest % 3];
      rest /= 3;
    }
    FunctionTable t(d22, ch, vals);
    CHECK(chain_characterization(t).ok == is_pseudo_polynomial(t).ok);
  }

  // seeded 3x3 instances over chains up to m = 5
  for (std::size_t m = 1; m <= 5; ++m) {
    auto chm = testsup::chain_ptr(m);
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
      auto t = random_chain_table(chm, {3, 3}, seed);
      CHECK(chain_characterization(t).ok == is_pseudo_polynomial(t).ok);
    }
  }

  auto blocked = testsup::blocked_3x2_table(testsup::chain_ptr(2));
  auto cc = chain_characterization(blocked);
  REQUIRE_FALSE(cc.ok);
  REQUIRE(cc.gap_witness.has_value());
  CHECK(cc.gap_witness->x[cc.gap_witness->coord] == cc.gap_witness->y[cc.gap_witness->coord]);

  // order-preserving min/max forms are factorizable
  std::vector<Domain> dm = {{"X1", {"0", "1", "2"}, 0, 2}, {"X2", {"0", "1", "2"}, 0, 2}};
  auto chm = testsup::chain_ptr(2);
  std::vector<LatticeElement> minv(9), maxv(9);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      minv[i * 3 + j] = chm->elements()[std::min(i, j)];
      maxv[i * 3 + j] = chm->elements()[std::max(i, j)];
    }
  CHECK(chain_characterization(FunctionTable(dm, chm, minv)).ok);
  CHECK(chain_characterization(FunctionTable(dm, chm, maxv)).ok);
}

TEST_CASE("designated-element-free inner bounds") {
  // equal to the standard bounds whenever declared bounds satisfy the sandwich
  for (std::size_t m = 1; m <= 4; ++m) {
    auto ch = testsup::chain_ptr(m);
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
      auto t = random_chain_table(ch, {3, 2}, seed);
      if (!check_boundary(t).ok) continue;
      auto fr = free_phi_bounds(t);
      CHECK(bounds_equal(fr.bounds, phi_bounds(t)));
      // on a chain the designated pair is always inferable
      CHECK(fr.designated[0].has_value());
      CHECK(fr.designated[1].has_value());
    }
  }

  // constant table: full interval everywhere, first point wins the ties
  auto ch3 = testsup::chain_ptr(3);
  std::vector<Domain> doms = {{"X1", {"a", "b", "c"}}};
  FunctionTable cf(doms, ch3, std::vector<LatticeElement>(3, ch3->elements()[1]));
  auto fr = free_phi_bounds(cf);
  for (std::size_t a = 0; a < 3; ++a) {
    CHECK(fr.bounds.lower[0][a] == ch3->bottom());
    CHECK(fr.bounds.upper[0][a] == ch3->top());
  }
  CHECK(fr.designated[0] == std::make_pair(std::size_t{0}, std::size_t{0}));
  CHECK(fr.argmin_points[0] == std::vector<std::size_t>{0, 1, 2});
  CHECK(fr.argmax_points[0] == std::vector<std::size_t>{0, 1, 2});

  // accepted on non-chains as well (no designated-element guarantee there)
  auto air = testsup::airline_lattice();
  auto f = testsup::airline_table(air);
  auto fa = free_phi_bounds(f);
  CHECK(bounds_equal(fa.bounds, phi_bounds(f)));
}
