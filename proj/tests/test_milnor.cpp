#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "gphom/errors.hpp"
#include "gphom/milnor.hpp"

using namespace gphom;

namespace {

HomologyResult cyclic(std::initializer_list<long> orders) {
  std::vector<Integer> v;
  for (long o : orders) v.emplace_back(o);
  return HomologyResult::from_cyclic_orders(v);
}

unsigned mulmod(unsigned a, unsigned b, unsigned p) { return a * b % p; }

}  // namespace

TEST_CASE("symbolic elements") {
  SymbolicElement x = SymbolicElement::symbol({2, 3}, 5);
  CHECK(x.to_string() == "{2,3}");
  SymbolicElement y(2, 5);
  y.add({1, 3}, Integer(1));
  y.add({1, 1}, Integer(-2));
  CHECK((x - y).to_string() == "2{1,1} - {1,3} + {2,3}");
  CHECK((x - x).is_zero());
  CHECK((x - x).to_string() == "0");
  CHECK(x + y == y + x);
  CHECK_THROWS_AS(SymbolicElement::symbol({0, 2}, 5), NotAUnit);
  CHECK_THROWS_AS(SymbolicElement::symbol({5}, 5), NotAUnit);
  CHECK_THROWS_AS(x + SymbolicElement::symbol({2, 3}, 7), FieldMismatch);
  CHECK_THROWS_AS(y.add({1}, Integer(1)), Error);
  CHECK(symbol_text({4, 1, 2}) == "{4,1,2}");
}

TEST_CASE("K^M_1 is the unit group") {
  for (unsigned p : {2u, 3u, 5u, 7u, 11u}) {
    auto k = milnor_group(1, p);
    CHECK(k.symbols.size() == p - 1);
    CHECK(k.steinberg_count == 0);
    CHECK(k.structure() == cyclic({static_cast<long>(p - 1)}));
    CHECK(k.is_zero(SymbolicElement::symbol({1}, p)));
  }
  // {a} + {b} = {ab}
  auto k = milnor_group(1, 7);
  for (unsigned a = 1; a < 7; ++a)
    for (unsigned b = 1; b < 7; ++b) {
      auto lhs = SymbolicElement::symbol({a}, 7) + SymbolicElement::symbol({b}, 7);
      CHECK(k.reduce(lhs) == k.reduce(SymbolicElement::symbol({mulmod(a, b, 7)}, 7)));
    }
  // 3 generates F_7^*, so {3} has order 6
  SymbolicElement g = SymbolicElement::symbol({3}, 7);
  SymbolicElement m(1, 7);
  for (int i = 1; i <= 6; ++i) {
    m = m + g;
    CHECK(k.is_zero(m) == (i == 6));
  }
}

TEST_CASE("K^M_2 of a finite prime field vanishes") {
  for (unsigned p : {2u, 3u, 5u, 7u}) {
    auto k = milnor_group(2, p);
    CHECK(k.structure().is_zero());
    CHECK(milnor_k2_order_bruteforce(p) == 1);
  }
  CHECK(milnor_k2_order_bruteforce(11) == 1);
  CHECK(milnor_k2_order_bruteforce(13) == 1);
  CHECK(milnor_group(3, 3).structure().is_zero());
  CHECK_THROWS_AS(milnor_k2_order_bruteforce(9), NotPrime);
  CHECK_THROWS_AS(milnor_group(2, 6), NotPrime);
  CHECK_THROWS_AS(milnor_group(0, 5), Error);
}

TEST_CASE("relation counts") {
  auto k = milnor_group(2, 5);
  CHECK(k.symbols.size() == 16);
  CHECK(k.symbols.front() == std::vector<unsigned>{1, 1});
  CHECK(k.symbols.back() == std::vector<unsigned>{4, 4});
  CHECK(k.index_of({2, 3}) == 6);
  // {a, 1-a} for a = 2, 3, 4
  CHECK(k.steinberg_count == 3);
  CHECK(k.relations.cols() == k.multilinearity_count + k.steinberg_count);
  CHECK_THROWS_AS(k.index_of({2}), Error);
  CHECK_THROWS_AS(k.vector(SymbolicElement::symbol({2, 3}, 7)), FieldMismatch);
  ResourceCaps small = caps();
  small.max_basis = 10;
  ScopedCaps guard(small);
  CHECK_THROWS_AS(milnor_group(2, 5), CapExceeded);
}

TEST_CASE("every relation holds in the presentation") {
  for (unsigned p : {3u, 5u, 7u})
    for (unsigned n : {1u, 2u}) {
      auto k = milnor_group(n, p);
      for (std::size_t c = 0; c < k.relations.cols(); ++c) CHECK(k.group.is_zero(k.relations.column(c)));
      for (const auto& s : k.symbols)
        if (std::find(s.begin(), s.end(), 1u) != s.end()) CHECK(k.is_zero(SymbolicElement::symbol(s, p)));
    }
}

TEST_CASE("multiplicativity and antisymmetry") {
  auto k = milnor_group(1, 7);
  std::mt19937 rng(11);
  std::uniform_int_distribution<unsigned> unit(1, 6);
  for (int trial = 0; trial < 40; ++trial) {
    unsigned a = unit(rng), b = unit(rng);
    auto ab = SymbolicElement::symbol({mulmod(a, b, 7)}, 7);
    auto sum = SymbolicElement::symbol({a}, 7) + SymbolicElement::symbol({b}, 7);
    CHECK(k.is_zero(ab - sum));
  }
  auto k2 = milnor_group(2, 7);
  for (unsigned a = 1; a < 7; ++a)
    for (unsigned b = 1; b < 7; ++b) {
      auto ab = SymbolicElement::symbol({a, b}, 7), ba = SymbolicElement::symbol({b, a}, 7);
      CHECK(k2.is_zero(ab + ba));
      CHECK(k2.reduce(ab).is_zero());
    }
}

TEST_CASE("symbol map out of the corner") {
  for (unsigned p : {3u, 5u, 7u}) {
    auto e = e2_corner(1, p);
    auto k = milnor_group(1, p);
    CHECK(e.structure() == k.structure());
    CHECK_NOTHROW(check_symbol_map(e, k));
    for (const auto& s : e.symbols) {
      auto x = SymbolicElement::symbol(s, p);
      CHECK(to_corner(e, x) == e.symbol(s));
      CHECK(from_corner(e, e.symbol(s)) == x);
      CHECK(e2_to_milnor(x, e, k) == k.reduce(x));
    }
  }
  for (unsigned p : {3u, 5u}) {
    auto e = e2_corner(2, p);
    auto k = milnor_group(2, p);
    CHECK_NOTHROW(check_symbol_map(e, k));
  }
  CHECK_THROWS_AS(check_symbol_map(e2_corner(1, 5), milnor_group(1, 7)), FieldMismatch);
}

TEST_CASE("a target without multiplicativity is rejected") {
  auto e = e2_corner(1, 5);
  MilnorPresentation k = milnor_group(1, 5);
  k.relations = ExactMatrix(k.symbols.size(), 0);
  k.group = AbelianGroup(k.symbols.size(), k.relations);
  REQUIRE(e.relations.cols() > 0);
  CHECK_THROWS_AS(check_symbol_map(e, k), WellDefinednessFailure);
  CHECK_THROWS_AS(e2_to_milnor(SymbolicElement::symbol({2}, 5), e, k), WellDefinednessFailure);
}

TEST_CASE("cross product classes") {
  auto c = cross_product_class(2, 3, {2, 2});
  CHECK(c.cycle.q == 2);
  CHECK(c.cycle.terms.size() == 2);
  CHECK(c.is_cycle);
  REQUIRE(c.quotient_class.has_value());
  CHECK(c.quotient_note.find("= 0") != std::string::npos);

  auto ctx = make_shift_context(2, 5, 0);
  for (unsigned a = 1; a < 5; ++a)
    for (unsigned b = 1; b < 5; ++b) {
      auto x = cross_product_class(ctx, {a, b});
      CHECK(x.is_cycle);
      CHECK_FALSE(x.quotient_class.has_value());
      CHECK(x.cycle.terms.size() == ((a == 1 || b == 1) ? 0u : 2u));
    }
  auto one = cross_product_class(1, 5, {2});
  CHECK(one.is_cycle);
  REQUIRE(one.quotient_class.has_value());
  CHECK_THROWS_AS(cross_product_class(ctx, {2}), Error);
  CHECK_THROWS_AS(cross_product_class(ctx, {2, 5}), NotAUnit);
}

TEST_CASE("round trip for GL_1") {
  for (unsigned p : {3u, 5u, 7u}) {
    auto r = roundtrip_check(1, p);
    CHECK(r.all_pass());
    CHECK(r.milnor == r.corner);
    CHECK(r.entries.size() == p - 1);
    CHECK(r.one_entry_survivors.empty());
    for (const auto& e : r.entries) {
      CHECK(e.error.empty());
      CHECK(e.reverse_equal);
      CHECK(e.image == e.original);
      CHECK(e.verdict == (e.alphas[0] == 1 ? RoundTripVerdict::degenerate_pass : RoundTripVerdict::pass));
    }
  }
}

TEST_CASE("round trip for GL_2 degenerates") {
  for (unsigned p : {3u, 5u}) {
    auto r = roundtrip_check(2, p);
    CHECK(r.all_pass());
    CHECK(r.milnor.is_zero());
    CHECK(r.corner == cyclic({2}));
    CHECK(r.entries.size() == (p - 1) * (p - 1));
    for (const auto& e : r.entries) {
      CHECK(e.error.empty());
      CHECK(e.verdict == RoundTripVerdict::degenerate_pass);
      CHECK(e.original.is_zero());
    }
    // Integrally, some symbols containing a 1 survive in E^2.
    CHECK_FALSE(r.one_entry_survivors.empty());
  }
  CHECK(to_string(RoundTripVerdict::pass) == "pass");
  CHECK(to_string(RoundTripVerdict::degenerate_pass) == "degenerate");
  CHECK(to_string(RoundTripVerdict::fail) == "fail");
}
