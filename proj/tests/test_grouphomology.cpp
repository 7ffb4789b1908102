#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "gphom/errors.hpp"
#include "gphom/grouphomology.hpp"

using namespace gphom;

namespace {

HomologyResult cyclic(std::initializer_list<long> orders) {
  std::vector<Integer> v;
  for (long o : orders) v.emplace_back(o);
  return HomologyResult::from_cyclic_orders(v);
}

// Order of the subgroup generated by all commutators, by brute force.
std::size_t brute_commutator_order(const MatrixGroup& g) {
  std::set<std::uint32_t> c;
  for (std::uint32_t a = 0; a < g.order(); ++a)
    for (std::uint32_t b = 0; b < g.order(); ++b)
      c.insert(g.multiply(g.multiply(a, b), g.multiply(g.inverse(a), g.inverse(b))));
  std::vector<std::uint32_t> gens(c.begin(), c.end()), list(c.begin(), c.end());
  for (std::size_t i = 0; i < list.size(); ++i)
    for (auto s : gens)
      if (c.insert(g.multiply(list[i], s)).second) list.push_back(g.multiply(list[i], s));
  return c.size();
}

// Coinvariants by the definition: Z^rank / span(g b - b), signs included.
HomologyResult brute_coinvariants(const GModule& m) {
  std::vector<SparseVec> rel;
  for (std::uint32_t g = 0; g < m.group().order(); ++g)
    for (std::uint32_t b = 0; b < m.rank(); ++b) {
      SignedIndex r = m.act(g, b);
      SparseVec v{{r.index, Integer(r.sign)}};
      sparse_axpy(v, Integer(-1), SparseVec{{b, Integer(1)}});
      if (!v.empty()) rel.push_back(v);
    }
  for (std::uint32_t b = 0; b < m.rank(); ++b)
    if (m.is_torsion(b)) rel.push_back(SparseVec{{b, Integer(2)}});
  return kernel_cokernel(AbelianGroup(0, ExactMatrix(0, 0)),
                         AbelianGroup(m.rank(), ExactMatrix::from_columns(m.rank(), rel)),
                         ExactMatrix(m.rank(), 0))
      .cokernel;
}

}  // namespace

TEST_CASE("homology with trivial coefficients") {
  auto g15 = MatrixGroup::general_linear(1, 5);
  auto h = group_homology(GModule::trivial(g15), 3);
  CHECK(h.method == "direct");
  CHECK(h.groups[0] == cyclic({0}));
  CHECK(h.groups[1] == cyclic({4}));
  CHECK(h.groups[2].is_zero());
  CHECK(h.groups[3] == cyclic({4}));

  auto g23 = MatrixGroup::general_linear(2, 3);
  auto h23 = group_homology(GModule::trivial(g23), 1);
  CHECK(h23.groups[0] == cyclic({0}));
  CHECK(h23.groups[1] == cyclic({2}));

  // GL_2(F_2) is S_3: H_1 = Z/2, H_2 = 0, H_3 = Z/6
  auto g22 = MatrixGroup::general_linear(2, 2);
  auto h22 = group_homology(GModule::trivial(g22), 3);
  CHECK(h22.groups[1] == cyclic({2}));
  CHECK(h22.groups[2].is_zero());
  CHECK(h22.groups[3] == cyclic({6}));
}

TEST_CASE("bar complex differentials compose to zero") {
  auto g = MatrixGroup::general_linear(2, 2);
  auto c = build_complex(2, 2, 2, 2, true);
  auto m = GModule::from_complex(g, c, 2);
  auto bar = bar_complex(m, 2);
  REQUIRE(bar.d.size() == 4);
  for (unsigned q = 2; q <= 3; ++q) CHECK((bar.d[q - 1] * bar.d[q]).is_zero());
  CHECK(bar.ranks[2] == m.rank() * 25);
}

TEST_CASE("abelianization") {
  auto g23 = MatrixGroup::general_linear(2, 3);
  Abelianization a(g23);
  CHECK(a.commutator_order() == brute_commutator_order(g23));
  CHECK(a.commutator_order() == 24);
  CHECK(a.structure() == cyclic({2}));
  CHECK(a.structure() == group_homology(GModule::trivial(g23), 1).groups[1]);
  // the class of g is its determinant
  for (std::uint32_t x = 0; x < g23.order(); ++x)
    CHECK((a.canonical(x)[0] == 0) == (g23.element(x).det().value() == 1));

  auto g15 = MatrixGroup::general_linear(1, 5);
  CHECK(Abelianization(g15).structure() == cyclic({4}));
  auto g32 = MatrixGroup::general_linear(3, 2);
  CHECK(Abelianization(g32).structure().is_zero());

  // GL_1(F_3) -> GL_2(F_3), a -> diag(1, a), is an isomorphism on H_1
  auto g13 = MatrixGroup::general_linear(1, 3);
  Abelianization a13(g13);
  auto map = abelianization_map(g13, a, [&](std::uint32_t x) {
    long v = g13.element(x).entry(0, 0).value();
    return g23.index_of(GroupElement::from_rows({{1, 0}, {0, v}}, 3));
  });
  auto kc = kernel_cokernel(a13.group(), a.group(), map);
  CHECK(kc.kernel.is_zero());
  CHECK(kc.cokernel.is_zero());
}

TEST_CASE("module validation") {
  auto g = MatrixGroup::general_linear(2, 3);
  CHECK_NOTHROW(GModule::trivial(g).validate());
  GModule bad(g, 2, [&](std::uint32_t e, std::uint32_t b) {
    return SignedIndex{e == g.generators()[0] ? 1 - b : b, 1};
  });
  CHECK_THROWS_AS(bad.validate(), ActionClosureError);
  CHECK_THROWS_AS(GModule(g, 1, [](std::uint32_t, std::uint32_t) { return SignedIndex{3, 1}; }),
                  ActionClosureError);
  auto c = build_complex(2, 5, 2, 2);
  CHECK_THROWS_AS(GModule::from_complex(g, c, 1), FieldMismatch);
  auto c3 = build_complex(2, 3, 2, 3, true);
  for (unsigned k = 0; k <= 3; ++k) CHECK_NOTHROW(GModule::from_complex(g, c3, k).validate());
}

TEST_CASE("coinvariants") {
  auto g = MatrixGroup::general_linear(2, 3);
  auto oc = build_complex(2, 3, 2, 3);
  auto free = GModule::from_complex(g, oc, 3);
  auto co = coinvariants(free);
  CHECK(co.h0 == cyclic({0, 0, 0, 0}));
  CHECK(co.generators.size() == 4);

  auto triv = GModule(g, 5, [](std::uint32_t, std::uint32_t b) { return SignedIndex{b, 1}; });
  CHECK(coinvariants(triv).h0.free_rank == 5);

  auto uc = build_complex(2, 3, 2, 3, true);
  for (unsigned k = 1; k <= 3; ++k) {
    auto m = GModule::from_complex(g, uc, k);
    auto cv = coinvariants(m);
    CHECK(cv.h0 == brute_coinvariants(m));
    CHECK(cv.h0 == group_homology(m, 0).groups[0]);
  }
  // unordered triples: orbits of sizes 24 and 8, both with odd stabilizer elements
  auto m3 = GModule::from_complex(g, uc, 3);
  CHECK(coinvariants(m3).h0 == cyclic({2, 2}));
  CHECK(coinvariants(m3).generators.size() == 2);

  // Z/2 summands survive as Z/2
  auto tc = build_complex(2, 3, 1, 2, true);
  auto tm = GModule::from_complex(g, tc, 2);
  CHECK(coinvariants(tm).h0 == brute_coinvariants(tm));
}

TEST_CASE("Shapiro reduction") {
  auto g = MatrixGroup::general_linear(2, 3);
  auto uc = build_complex(2, 3, 2, 3, true);

  auto m1 = GModule::from_complex(g, uc, 1);
  auto s1 = shapiro_reduce(m1);
  REQUIRE(s1.size() == 1);
  CHECK(s1[0].stabilizer.size() == 6);
  CHECK_FALSE(s1[0].sign_twist());
  std::vector<GroupElement> els;
  for (auto e : s1[0].stabilizer) els.push_back(g.element(e));
  auto stab = MatrixGroup::from_elements(els, "stab");
  // conjugate by the swap to move the fixed vector to e_1
  auto w = GroupElement::from_rows({{0, 1}, {1, 0}}, 3);
  std::vector<GroupElement> conj;
  for (auto& e : els) conj.push_back(w * e * w);
  auto affine = MatrixGroup::from_elements(conj, "aff");
  CHECK((is_affine(stab, 1, 1) || is_affine(affine, 1, 1)));

  auto m2 = GModule::from_complex(g, uc, 2);
  auto s2 = shapiro_reduce(m2);
  REQUIRE(s2.size() == 1);
  CHECK(s2[0].stabilizer.size() == 2);
  CHECK(s2[0].sign_twist());

  auto free = GModule::from_complex(g, build_complex(2, 3, 2, 3), 3);
  auto sf = shapiro_reduce(free);
  REQUIRE(sf.size() == 1);
  CHECK(sf[0].stabilizer.size() == 1);
  CHECK(sf[0].multiplicity == 4);

  // direct bar vs Shapiro on every small module where both fit
  for (unsigned p : {2u, 3u}) {
    auto gp = MatrixGroup::general_linear(2, p);
    unsigned qm = p == 2 ? 3 : 1;
    for (bool un : {false, true}) {
      auto c = build_complex(2, p, 2, 2, un);
      for (unsigned k = 0; k <= 2; ++k) {
        auto m = GModule::from_complex(gp, c, k);
        if (p == 3 && k == 2 && !un) continue;
        auto a = group_homology(m, qm, HomologyMethod::direct);
        auto b = group_homology(m, qm, HomologyMethod::shapiro);
        CHECK(a.method == "direct");
        CHECK(b.method == "shapiro");
        for (unsigned q = 0; q <= qm; ++q) CHECK(a.groups[q] == b.groups[q]);
      }
    }
  }
  // with Z/2 summands
  auto g22 = MatrixGroup::general_linear(2, 2);
  auto tm = GModule::from_complex(g22, build_complex(2, 2, 1, 2, true), 2);
  REQUIRE(tm.has_torsion());
  auto a = group_homology(tm, 2, HomologyMethod::direct);
  auto b = group_homology(tm, 2, HomologyMethod::shapiro);
  for (unsigned q = 0; q <= 2; ++q) CHECK(a.groups[q] == b.groups[q]);
}

TEST_CASE("stabilizer consistency for the rank-one module") {
  auto g = MatrixGroup::general_linear(2, 3);
  auto m = GModule::from_complex(g, build_complex(2, 3, 2, 1, true), 1);
  auto direct = group_homology(m, 1, HomologyMethod::direct);
  auto aff = stabilizer_of_e1(g);
  auto stab = group_homology(GModule::trivial(aff), 1);
  CHECK(direct.groups[0] == stab.groups[0]);
  CHECK(direct.groups[1] == stab.groups[1]);
  CHECK(stab.groups[1] == cyclic({2}));
}

TEST_CASE("sign-twisted coefficients") {
  // Z/2 acting on Z by -1: H_0 = Z/2, H_1 = 0, H_2 = Z/2
  auto g22 = MatrixGroup::general_linear(2, 2);
  auto c = build_complex(2, 2, 2, 2, true);
  auto m = GModule::from_complex(g22, c, 2);
  auto s = shapiro_reduce(m);
  REQUIRE(s.size() == 1);
  CHECK(s[0].stabilizer.size() == 2);
  auto h = summand_homology(g22, s[0], 2);
  CHECK(h[0] == cyclic({2}));
  CHECK(h[1].is_zero());
  CHECK(h[2] == cyclic({2}));
}

TEST_CASE("phi and psi") {
  auto c = build_complex(2, 3, 2, 3);
  auto q = unordered_quotient(c);
  for (unsigned k = 2; k <= 3; ++k) {
    auto phi = phi_map(c, k);
    CHECK(phi.cols() == (k - 1) * c.rank(k));
    auto inv = smith_invariants(phi);
    std::size_t twos = 0;
    for (auto& d : inv) {
      CHECK((d == 1 || d == 2));
      twos += d == 2;
    }
    // coker(phi) = unordered quotient: free part plus Z/2 on repeated columns
    std::size_t tors = 0;
    for (char t : q.torsion[k]) tors += t;
    CHECK(c.rank(k) - inv.size() == q.rank(k) - tors);
    CHECK(twos == tors);
    auto psi = psi_map(c, k);
    CHECK(psi * phi == factorial(k) * phi);
  }
  CHECK(c.rank(2) - rank(phi_map(c, 2)) == 24);
  auto k2 = phi_map(c, 2);
  auto x = c.bases[2][0];
  auto y = apply_permutation(x, adjacent_transposition(2, 0)).tuple;
  SparseVec want{{c.index_of(2, x), 1}, {c.index_of(2, y), 1}};
  sparse_normalize(want);
  CHECK(k2.column(0) == want);
  CHECK_THROWS_AS(phi_map(c, 1), Error);
  CHECK_THROWS_AS(psi_map(q, 2), Error);
}

TEST_CASE("sigma acts trivially on homology") {
  auto g23 = MatrixGroup::general_linear(2, 3);
  auto c3 = build_complex(2, 3, 2, 2);
  auto r0 = sigma_action_on_homology(g23, c3, 2, adjacent_transposition(2, 0), 0);
  CHECK(r0.groups[0] == cyclic({0}));
  CHECK(r0.all_identity());
  CHECK(sigma_action_on_homology(g23, c3, 2, {0, 1}, 1).all_identity());
  // the signed action is the sign times the identity
  auto rs = sigma_action_on_homology(g23, c3, 2, adjacent_transposition(2, 0), 0, true);
  CHECK(rs.maps[0][0][0] == -1);

  auto g22 = MatrixGroup::general_linear(2, 2);
  auto c2 = build_complex(2, 2, 2, 2);
  auto d = sigma_action_on_homology(g22, c2, 2, adjacent_transposition(2, 0), 2, false, HomologyMethod::direct);
  auto s = sigma_action_on_homology(g22, c2, 2, adjacent_transposition(2, 0), 2, false, HomologyMethod::shapiro);
  CHECK(d.all_identity());
  CHECK(s.all_identity());
  for (unsigned q = 0; q <= 2; ++q) CHECK(d.groups[q] == s.groups[q]);

  // a module with nonzero higher homology: A^(1)_2 over F_2 (two orbits)
  auto c1 = build_complex(2, 2, 1, 2);
  auto m1 = GModule::from_complex(g22, c1, 2);
  auto hd = sigma_action_on_homology(g22, c1, 2, adjacent_transposition(2, 0), 2, false, HomologyMethod::direct);
  auto hs = sigma_action_on_homology(g22, c1, 2, adjacent_transposition(2, 0), 2, false, HomologyMethod::shapiro);
  for (unsigned q = 0; q <= 2; ++q) CHECK(hd.groups[q] == hs.groups[q]);
  CHECK(hd.all_identity() == hs.all_identity());
  CHECK_FALSE(hd.groups[1].is_zero());
}

TEST_CASE("conjugation acts trivially") {
  auto g22 = MatrixGroup::general_linear(2, 2);
  auto m = GModule::from_complex(g22, build_complex(2, 2, 1, 2), 2);
  auto triv = GModule::trivial(g22);
  for (std::uint32_t h = 0; h < g22.order(); ++h) {
    CHECK(conjugation_action(m, h, 2).all_identity());
    CHECK(conjugation_action(triv, h, 2).all_identity());
  }
  auto g23 = MatrixGroup::general_linear(2, 3);
  auto m3 = GModule::from_complex(g23, build_complex(2, 3, 2, 1, true), 1);
  for (std::uint32_t h : {1u, 7u, 20u}) CHECK(conjugation_action(m3, h, 1).all_identity());
}

TEST_CASE("localized vanishing instances") {
  for (unsigned p : {2u, 3u}) {
    auto g = MatrixGroup::general_linear(2, p);
    auto m = GModule::from_complex(g, build_complex(2, p, 2, 2, true), 2);
    auto h = group_homology(m, 2);
    for (auto& x : h.groups) CHECK(localize(x, factorial(2)).is_zero());
  }
  auto g = MatrixGroup::general_linear(2, 3);
  auto free = GModule::from_complex(g, build_complex(2, 3, 2, 3), 3);
  auto h = group_homology(free, 2);
  CHECK(h.method == "shapiro");
  CHECK(h.groups[0].free_rank == 4);
  CHECK(h.groups[1].is_zero());
  CHECK(h.groups[2].is_zero());
}

TEST_CASE("caps") {
  ResourceCaps small;
  small.max_basis = 1000;
  ScopedCaps guard(small);
  auto g = MatrixGroup::general_linear(2, 3);
  CHECK_THROWS_AS(bar_complex(GModule::trivial(g), 2), CapExceeded);
  CHECK_THROWS_AS(group_homology(GModule::trivial(g), 2, HomologyMethod::direct), CapExceeded);
}

TEST_CASE("torsion modules are rejected for induced maps") {
  auto g = MatrixGroup::general_linear(2, 2);
  auto tm = GModule::from_complex(g, build_complex(2, 2, 1, 2, true), 2);
  CHECK_THROWS_AS(induced_endomorphism(tm, [](std::uint32_t b) { return SignedIndex{b, 1}; }, 1), Unsupported);
  auto m = GModule::from_complex(g, build_complex(2, 2, 2, 2), 2);
  CHECK_THROWS_AS(induced_endomorphism(m, [](std::uint32_t b) { return SignedIndex{b < 2 ? 1 - b : b, 1}; }, 0),
                  ActionClosureError);
}
