#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "gphom/errors.hpp"
#include "gphom/exactalg.hpp"
#include "gphom/glgroup.hpp"

using namespace gphom;

namespace {

// Brute force: all n x n matrices with nonzero determinant.
std::size_t brute_gl_count(unsigned n, unsigned p) {
  std::size_t total = 1;
  for (unsigned i = 0; i < n * n; ++i) total *= p;
  std::size_t count = 0;
  for (std::size_t code = 0; code < total; ++code) {
    std::vector<std::vector<long>> rows(n, std::vector<long>(n));
    std::size_t c = code;
    for (unsigned i = 0; i < n * n; ++i) {
      rows[i / n][i % n] = static_cast<long>(c % p);
      c /= p;
    }
    try {
      GroupElement::from_rows(rows, p);
      ++count;
    } catch (const NotAUnit&) {
    }
  }
  return count;
}

}  // namespace

TEST_CASE("enumerate GL_n(F_p)") {
  CHECK(MatrixGroup::general_linear(1, 3).order() == 2);
  CHECK(MatrixGroup::general_linear(2, 2).order() == 6);
  CHECK(MatrixGroup::general_linear(2, 3).order() == 48);
  CHECK(brute_gl_count(2, 2) == 6);
  CHECK(brute_gl_count(2, 3) == 48);
  CHECK(MatrixGroup::general_linear(3, 2).order() == 168);
  CHECK(gl_order(3, 5) == 1488000);
  CHECK_THROWS_AS(MatrixGroup::general_linear(3, 5), CapExceeded);
  auto g = MatrixGroup::general_linear(2, 5);
  std::set<std::string> seen;
  for (const auto& e : g.elements()) {
    CHECK_FALSE(e.det().is_zero());
    seen.insert(e.to_string());
  }
  CHECK(seen.size() == 480);
}

TEST_CASE("group element arithmetic") {
  auto a = GroupElement::from_rows({{1, 2}, {0, 1}}, 3);
  auto b = GroupElement::from_rows({{0, 1}, {1, 0}}, 3);
  CHECK((a * a.inverse()) == GroupElement::identity(2, 3));
  CHECK((a * b).entry(0, 0).value() == 2);
  CHECK(a.entry(0, 1).value() == 2);
  CHECK(b.det().value() == 2);
  auto v = FpVector::from_values({1, 1}, 3);
  CHECK(a.apply(v) == FpVector::from_values({0, 1}, 3));
  CHECK_THROWS_AS(GroupElement::from_rows({{1, 1}, {1, 1}}, 3), NotAUnit);
  auto g = MatrixGroup::general_linear(2, 3);
  for (std::uint32_t i = 0; i < g.order(); i += 5) {
    CHECK(g.multiply(i, g.inverse(i)) == g.identity_index());
    for (std::uint32_t j = 0; j < g.order(); j += 7) {
      CHECK(g.element(g.multiply(i, j)) == g.element(i) * g.element(j));
      for (std::uint32_t v2 = 0; v2 < 9; ++v2)
        CHECK(g.act(g.multiply(i, j), v2) == g.act(i, g.act(j, v2)));
    }
  }
}

TEST_CASE("generating set generates") {
  for (auto [n, p] : {std::pair{2u, 3u}, std::pair{3u, 2u}, std::pair{2u, 5u}}) {
    auto g = MatrixGroup::general_linear(n, p);
    CHECK(g.generators().size() <= 4);
    std::set<std::uint32_t> reach{g.identity_index()};
    std::vector<std::uint32_t> q{g.identity_index()};
    for (std::size_t i = 0; i < q.size(); ++i)
      for (auto s : g.generators()) {
        auto y = g.multiply(s, q[i]);
        if (reach.insert(y).second) q.push_back(y);
      }
    CHECK(reach.size() == g.order());
  }
}

TEST_CASE("diagonal_d") {
  CHECK(diagonal_d(1, FieldElement(1, 3), 2) == GroupElement::identity(2, 3));
  CHECK(diagonal_d(2, FieldElement(2, 3), 2) == GroupElement::from_rows({{1, 0}, {0, 2}}, 3));
  CHECK_THROWS_AS(diagonal_d(1, FieldElement(0, 5), 2), NotAUnit);
  for (auto& a : enumerate_units(5))
    for (auto& b : enumerate_units(5))
      CHECK(diagonal_d(1, a, 2) * diagonal_d(2, b, 2) == diagonal_d(2, b, 2) * diagonal_d(1, a, 2));
}

TEST_CASE("stabilizer of e_1 is affine") {
  auto g23 = MatrixGroup::general_linear(2, 3);
  auto s = stabilizer_of_e1(g23);
  CHECK(s.order() == 6);
  CHECK(is_affine(s, 1, 1));
  CHECK(stabilizer_of_e1(MatrixGroup::general_linear(2, 2)).order() == 2);
  auto s32 = stabilizer_of_e1(MatrixGroup::general_linear(3, 2));
  CHECK(s32.order() == 24);
  CHECK(is_affine(s32, 1, 2));
  CHECK_FALSE(is_affine(g23, 1, 1));
  auto diag = g23.subgroup([](const GroupElement& x) { return x.entry(0, 1).is_zero() && x.entry(1, 0).is_zero(); },
                           "diag");
  CHECK_FALSE(is_affine(diag, 1, 1));
}

TEST_CASE("orbit decomposition examples") {
  auto g = MatrixGroup::general_linear(2, 3);
  std::vector<ColumnTuple> nonzero;
  for (std::uint32_t v = 1; v < 9; ++v) nonzero.push_back(ColumnTuple{}.append(v));
  auto d = orbit_decompose(nonzero, g, false);
  REQUIRE(d.orbits.size() == 1);
  CHECK(d.orbits[0].stabilizer.size() == 6);
  CHECK(d.orbits[0].size == 8);

  std::vector<ColumnTuple> gp3;
  const VectorSpace& v = g.space();
  for (std::uint32_t a = 1; a < 9; ++a)
    for (std::uint32_t b = 1; b < 9; ++b)
      for (std::uint32_t c = 1; c < 9; ++c) {
        std::uint32_t ab[] = {a, b}, ac[] = {a, c}, bc[] = {b, c};
        if (v.independent(ab, 2) && v.independent(ac, 2) && v.independent(bc, 2))
          gp3.push_back(ColumnTuple{}.append(a).append(b).append(c));
      }
  CHECK(gp3.size() == 192);
  auto d3 = orbit_decompose(gp3, g, false);
  CHECK(d3.orbits.size() == 4);
  for (auto& o : d3.orbits) CHECK(o.stabilizer.size() == 1);
  for (std::uint32_t x = 0; x < gp3.size(); ++x) {
    auto rep = gp3[d3.orbits[d3.orbit_of[x]].representative];
    ColumnTuple img = rep;
    for (unsigned c = 0; c < 3; ++c) img.cols[c] = g.act(d3.transporter[x], rep.cols[c]);
    CHECK(img == gp3[x]);
  }

  auto trivial = g.subgroup([&](const GroupElement& x) { return x == GroupElement::identity(2, 3); }, "1");
  auto dt = orbit_decompose(std::vector<ColumnTuple>{ColumnTuple{}.append(4)}, trivial, false);
  CHECK(dt.orbits.size() == 1);
  CHECK(dt.orbits[0].stabilizer.size() == 1);

  // a fixed point under the whole group
  auto fixed = orbit_decompose(1, g, [](std::uint32_t, std::uint32_t) { return SignedIndex{0, 1}; });
  CHECK(fixed.orbits[0].stabilizer.size() == 48);

  CHECK_THROWS_AS(orbit_decompose(std::vector<ColumnTuple>{ColumnTuple{}.append(1)}, g, false),
                  ActionClosureError);
}

TEST_CASE("unordered bases carry sign twists") {
  auto g = MatrixGroup::general_linear(2, 3);
  const VectorSpace& v = g.space();
  std::vector<ColumnTuple> pairs;
  for (std::uint32_t a = 1; a < 9; ++a)
    for (std::uint32_t b = a + 1; b < 9; ++b) {
      std::uint32_t ab[] = {a, b};
      if (v.independent(ab, 2)) pairs.push_back(ColumnTuple{}.append(a).append(b));
    }
  CHECK(pairs.size() == 24);
  auto d = orbit_decompose(pairs, g, true);
  REQUIRE(d.orbits.size() == 1);
  CHECK(d.orbits[0].stabilizer.size() == 2);
  CHECK(d.orbits[0].sign_twist);
}

TEST_CASE("freeness on ordered tuples of length at least n") {
  auto g = MatrixGroup::general_linear(2, 3);
  const VectorSpace& v = g.space();
  std::vector<ColumnTuple> bases;
  for (std::uint32_t a = 1; a < 9; ++a)
    for (std::uint32_t b = 1; b < 9; ++b) {
      std::uint32_t ab[] = {a, b};
      if (v.independent(ab, 2)) bases.push_back(ColumnTuple{}.append(a).append(b));
    }
  auto d = orbit_decompose(bases, g, false);
  CHECK(d.orbits.size() == 1);
  CHECK(d.orbits[0].stabilizer.size() == 1);
}

TEST_CASE("conjugating permutation matrix realizes a column transposition") {
  // h swaps e_{n-1} and e_n, so h . (e_{n-1}, e_n) = (e_n, e_{n-1}).
  for (unsigned n : {2u, 3u}) {
    unsigned p = 3;
    std::vector<std::vector<long>> rows(n, std::vector<long>(n, 0));
    for (unsigned i = 0; i < n; ++i) rows[i][i] = 1;
    rows[n - 2][n - 2] = rows[n - 1][n - 1] = 0;
    rows[n - 2][n - 1] = rows[n - 1][n - 2] = 1;
    auto h = GroupElement::from_rows(rows, p);
    VectorSpace v(n, p);
    CHECK(h.apply(v.basis(n - 1)) == v.basis(n));
    CHECK(h.apply(v.basis(n)) == v.basis(n - 1));
  }
}
