#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "test_support.hpp"

using namespace latfact;
using testsup::elem;

namespace {

// DNF evaluation straight from a raw (possibly non-canonical) family;
// independent of PolynomialFn's canonical path.
Bits raw_dnf_eval(std::size_t n, const std::vector<LatticeElement>& raw,
                  const std::vector<LatticeElement>& ys) {
  Bits acc = 0;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    Bits term = raw[mask].bits;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1) term &= ys[i].bits;
    acc |= term;
  }
  return acc;
}

// every tuple in Y^n, odometer order
template <typename Fn>
void for_all_points(const Lattice& lat, std::size_t n, Fn&& fn) {
  std::vector<std::size_t> idx(n, 0);
  std::vector<LatticeElement> ys(n, lat.bottom());
  while (true) {
    for (std::size_t i = 0; i < n; ++i) ys[i] = lat.elements()[idx[i]];
    fn(ys);
    std::size_t k = 0;
    while (k < n && ++idx[k] == lat.size()) idx[k++] = 0;
    if (k == n) break;
  }
}

PolynomialFn airline_p0(const LatticePtr& air) {
  return PolynomialFn(air, 2, {elem(air, "B"), elem(air, "N"), elem(air, "B"), elem(air, "V")});
}

}  // namespace

TEST_CASE("evaluation matches the worked table rows") {
  auto air = testsup::airline_lattice();
  auto p0 = airline_p0(air);
  std::vector<LatticeElement> y1 = {elem(air, "G"), elem(air, "V")};
  CHECK(p0.evaluate(y1) == elem(air, "G"));
  std::vector<LatticeElement> y2 = {elem(air, "V"), elem(air, "N")};
  CHECK(p0.evaluate(y2) == elem(air, "N"));

  std::vector<LatticeElement> wrong_arity = {elem(air, "G")};
  CHECK_THROWS_AS((void)p0.evaluate(wrong_arity), error);
  std::vector<LatticeElement> foreign = {LatticeElement{0b100}, elem(air, "V")};
  try {
    (void)p0.evaluate(foreign);
    FAIL("expected foreign_element");
  } catch (const error& e) {
    CHECK(e.code() == errc::foreign_element);
  }
}

TEST_CASE("canonicalization") {
  auto air = testsup::airline_lattice();
  auto N = elem(air, "N"), G = elem(air, "G");

  // the airline family is already monotone, so it is its own canonical form
  auto p0 = airline_p0(air);
  CHECK(testsup::coeff_names(p0) == std::vector<std::string>{"B", "N", "B", "V"});

  // raising a lower coefficient above an upper one propagates upward
  PolynomialFn gconst(air, 1, {G, N});
  CHECK(testsup::coeff_names(gconst) == std::vector<std::string>{"G", "G"});
  for (auto y : air->elements()) {
    std::vector<LatticeElement> a = {y};
    CHECK(gconst.evaluate(a) == G);
  }

  PolynomialFn zero(air, 2, {});
  CHECK(testsup::coeff_names(zero) == std::vector<std::string>{"B", "B", "B", "B"});

  CHECK_THROWS_AS(PolynomialFn(air, 21, {}), error);
  try {
    PolynomialFn(air, 1, {LatticeElement{0b100}});
    FAIL("expected foreign_element");
  } catch (const error& e) {
    CHECK(e.code() == errc::foreign_element);
  }
}

TEST_CASE("canonicalization never changes the function") {
  std::vector<LatticePtr> lats = {testsup::airline_lattice(), testsup::chain_ptr(2),
                                  testsup::chain_ptr(5),
                                  make_lattice(Lattice::from_join_irreducibles(Poset({"a", "b"}, {})))};
  for (const auto& lat : lats) {
    for (std::size_t n = 0; n <= 2; ++n) {
      const std::size_t slots = std::size_t{1} << n;
      // exhaustive for tiny carriers, seeded sample otherwise
      const bool exhaustive = lat->size() <= 3;
      std::uint64_t state = 0x9e3779b97f4a7c15ull;
      auto next = [&]() { state = state * 6364136223846793005ull + 1442695040888963407ull; return state >> 33; };
      std::size_t trials = exhaustive ? 1 : 200;
      std::vector<std::size_t> pick(slots, 0);
      for (std::size_t t = 0;; ++t) {
        std::vector<LatticeElement> raw(slots);
        if (exhaustive) {
          for (std::size_t i = 0; i < slots; ++i) raw[i] = lat->elements()[pick[i]];
        } else {
          if (t >= trials) break;
          for (std::size_t i = 0; i < slots; ++i) raw[i] = lat->elements()[next() % lat->size()];
        }
        PolynomialFn p(lat, n, raw);
        for_all_points(*lat, n, [&](const std::vector<LatticeElement>& ys) {
          CHECK(p.evaluate_unchecked(ys).bits == raw_dnf_eval(n, raw, ys));
        });
        // canonical-value law: d_I = p(1_I)
        for (std::size_t I = 0; I < slots; ++I) {
          std::vector<LatticeElement> one_I(n);
          for (std::size_t i = 0; i < n; ++i) one_I[i] = (I >> i & 1) ? lat->top() : lat->bottom();
          CHECK(p.evaluate_unchecked(one_I) == p.coeffs()[I]);
        }
        if (exhaustive) {
          std::size_t k = 0;
          while (k < slots && ++pick[k] == lat->size()) pick[k++] = 0;
          if (k == slots) break;
        }
      }
    }
  }
}

TEST_CASE("canonical-value law at arity 3") {
  auto lat = testsup::chain_ptr(3);  // 4 elements
  std::uint64_t state = 42;
  auto next = [&]() { state = state * 6364136223846793005ull + 1442695040888963407ull; return state >> 33; };
  for (std::size_t t = 0; t < 100; ++t) {
    std::vector<LatticeElement> raw(8);
    for (auto& r : raw) r = lat->elements()[next() % lat->size()];
    PolynomialFn p(lat, 3, raw);
    for (std::size_t I = 0; I < 8; ++I) {
      std::vector<LatticeElement> one_I(3);
      for (std::size_t i = 0; i < 3; ++i) one_I[i] = (I >> i & 1) ? lat->top() : lat->bottom();
      CHECK(p.evaluate_unchecked(one_I) == p.coeffs()[I]);
    }
  }
}

TEST_CASE("Sugeno test") {
  auto air = testsup::airline_lattice();
  auto B = elem(air, "B"), V = elem(air, "V"), D = elem(air, "D");

  // the ternary median: coefficient 1 exactly on the sets of size >= 2
  std::vector<LatticeElement> med_raw(8, B);
  for (std::size_t I = 0; I < 8; ++I)
    if (std::popcount(I) >= 2) med_raw[I] = V;
  PolynomialFn med3(air, 3, med_raw);
  CHECK(med3.is_sugeno());
  for (auto a : air->elements())
    for (auto b : air->elements())
      for (auto c : air->elements()) {
        std::vector<LatticeElement> ys = {a, b, c};
        CHECK(med3.evaluate_unchecked(ys) == air->median(a, b, c));
      }

  CHECK(airline_p0(air).is_sugeno());

  PolynomialFn constD(air, 2, {D, D, D, D});
  CHECK_FALSE(constD.is_sugeno());
  // idempotence on the diagonal for Sugeno integrals
  for (auto y : air->elements()) {
    std::vector<LatticeElement> ys = {y, y};
    CHECK(airline_p0(air).evaluate_unchecked(ys) == y);
  }
}

TEST_CASE("unary median form") {
  auto air = testsup::airline_lattice();
  auto B = elem(air, "B"), N = elem(air, "N"), D = elem(air, "D"), V = elem(air, "V");

  auto ident = unary_median_form(air, B, V);
  for (auto y : air->elements()) {
    std::vector<LatticeElement> ys = {y};
    CHECK(ident.evaluate(ys) == y);
  }

  auto nv = unary_median_form(air, N, V);
  std::vector<LatticeElement> d = {D};
  CHECK(nv.evaluate(d) == elem(air, "G"));
  for (auto y : air->elements()) {
    std::vector<LatticeElement> ys = {y};
    CHECK(nv.evaluate(ys) == air->median(N, y, V));
  }

  auto constN = unary_median_form(air, N, N);
  for (auto y : air->elements()) {
    std::vector<LatticeElement> ys = {y};
    CHECK(constN.evaluate(ys) == N);
  }

  try {
    (void)unary_median_form(air, N, D);  // incomparable
    FAIL("expected bounds_not_ordered");
  } catch (const error& e) {
    CHECK(e.code() == errc::bounds_not_ordered);
  }
}

TEST_CASE("equality is canonical-form equality and pointwise equality") {
  auto air = testsup::airline_lattice();
  auto B = elem(air, "B"), N = elem(air, "N"), V = elem(air, "V");

  auto p0 = airline_p0(air);
  // (y1 ^ N) v (y1 ^ y2): only two raw coefficients given
  std::vector<LatticeElement> raw(4, B);
  raw[1] = N;
  raw[3] = V;
  PolynomialFn two_terms(air, 2, raw);
  CHECK(equals(p0, two_terms));

  PolynomialFn raised(air, 2, {B, N, N, V});
  CHECK_FALSE(equals(p0, raised));
  // and indeed they differ somewhere
  bool differ = false;
  for_all_points(*air, 2, [&](const std::vector<LatticeElement>& ys) {
    if (!(p0.evaluate_unchecked(ys) == raised.evaluate_unchecked(ys))) differ = true;
  });
  CHECK(differ);

  // equality decision agrees with exhaustive pointwise comparison
  std::uint64_t state = 7;
  auto next = [&]() { state = state * 6364136223846793005ull + 1442695040888963407ull; return state >> 33; };
  for (std::size_t t = 0; t < 60; ++t) {
    std::vector<LatticeElement> ra(4), rb(4);
    for (auto& r : ra) r = air->elements()[next() % air->size()];
    for (auto& r : rb) r = air->elements()[next() % air->size()];
    PolynomialFn a(air, 2, ra), b(air, 2, rb);
    bool pointwise = true;
    for_all_points(*air, 2, [&](const std::vector<LatticeElement>& ys) {
      if (!(a.evaluate_unchecked(ys) == b.evaluate_unchecked(ys))) pointwise = false;
    });
    CHECK(equals(a, b) == pointwise);
  }

  PolynomialFn c1(air, 0, {N}), c2(air, 0, {N}), c3(air, 0, {V});
  CHECK(equals(c1, c2));
  CHECK_FALSE(equals(c1, c3));
  CHECK_THROWS_AS((void)equals(c1, p0), error);
}

TEST_CASE("fixing all but one coordinate yields a unary median form") {
  auto air = testsup::airline_lattice();
  std::uint64_t state = 99;
  auto next = [&]() { state = state * 6364136223846793005ull + 1442695040888963407ull; return state >> 33; };
  for (std::size_t t = 0; t < 40; ++t) {
    std::vector<LatticeElement> raw(4);
    for (auto& r : raw) r = air->elements()[next() % air->size()];
    PolynomialFn p(air, 2, raw);
    for (std::size_t fixed = 0; fixed < 2; ++fixed) {
      for (auto c : air->elements()) {
        auto u = [&](LatticeElement y) {
          std::vector<LatticeElement> ys(2);
          ys[fixed] = c;
          ys[1 - fixed] = y;
          return p.evaluate_unchecked(ys);
        };
        LatticeElement s = u(air->bottom()), tt = u(air->top());
        REQUIRE(subset(s.bits, tt.bits));
        for (auto y : air->elements()) CHECK(u(y).bits == (s.bits | (tt.bits & y.bits)));
      }
    }
  }
}
