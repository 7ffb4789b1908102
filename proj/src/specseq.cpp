#include "gphom/specseq.hpp"

#include <algorithm>
#include <random>

#include "gphom/errors.hpp"

namespace gphom {

// ---------------------------------------------------------------------------
// Coinvariant complex

SparseVec CoinvariantComplex::project(unsigned a, std::uint32_t x) const {
  const OrbitDecomposition& d = orbits.at(a);
  std::uint32_t o = d.orbit_of.at(x);
  int sign = orders[a][o] == 2 ? 1 : d.transporter_sign[x];
  return SparseVec{{o, Integer(sign)}};
}

SparseVec CoinvariantComplex::project(unsigned a, const SparseVec& chain) const {
  SparseVec out;
  for (const auto& [x, v] : chain) sparse_axpy(out, v, project(a, x));
  SparseVec reduced;
  for (auto& [o, v] : out) {
    if (orders[a][o] == 2) {
      Integer r = v % 2;
      if (r != 0) reduced.emplace_back(o, Integer(1));
    } else {
      reduced.emplace_back(o, v);
    }
  }
  return reduced;
}

HomologyResult CoinvariantComplex::homology(unsigned a) const {
  if (a >= orbits.size()) throw Error("CoinvariantComplex: degree out of range");
  std::size_t dim = orders[a].size();
  ExactMatrix d_in = a + 1 < orbits.size() ? d[a + 1] : ExactMatrix(dim, 0);
  ExactMatrix rel_out = a == 0 ? ExactMatrix(0, 0) : relations[a - 1];
  return module_homology(d_in, d[a], relations[a], rel_out);
}

AbelianGroup CoinvariantComplex::degree_group(unsigned a) const {
  return AbelianGroup(orders.at(a).size(), relations.at(a));
}

CoinvariantComplex coinvariant_complex(const MatrixGroup& g, const ChainComplex& c) {
  CoinvariantComplex out;
  for (unsigned a = 0; a <= c.k_max; ++a) {
    out.orbits.push_back(orbit_decompose(c.bases[a], g, c.unordered));
    std::vector<Integer> ord;
    std::vector<SparseVec> rel;
    for (const auto& o : out.orbits.back().orbits) {
      bool z2 = o.sign_twist || c.torsion[a][o.representative];
      if (z2) rel.push_back(SparseVec{{static_cast<std::uint32_t>(ord.size()), Integer(2)}});
      ord.emplace_back(z2 ? 2 : 0);
    }
    out.relations.push_back(ExactMatrix::from_columns(ord.size(), std::move(rel)));
    out.orders.push_back(std::move(ord));
  }
  out.d.emplace_back(0, out.orders[0].size());
  for (unsigned a = 1; a <= c.k_max; ++a) {
    std::vector<SparseVec> cols;
    for (const auto& o : out.orbits[a].orbits)
      cols.push_back(out.project(a - 1, c.d[a].column(o.representative)));
    out.d.push_back(ExactMatrix::from_columns(out.orders[a - 1].size(), std::move(cols)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// E^1 page

PageEntry SpectralPage::entry(long a, long q) const {
  if (a < 0 || q < 0) return PageEntry{true, {}, "zero"};
  if (a > static_cast<long>(p_max) || q > static_cast<long>(q_max))
    return PageEntry{false, {}, "beyond truncation"};
  return e1[a][q];
}

PageEntry SpectralPage::localized(long a, long q, const Integer& m) const {
  PageEntry e = entry(a, q);
  if (e.known) e.value = localize(e.value, m);
  return e;
}

bool SpectralPage::euler_check() const {
  long lhs = 0, rhs = 0;
  for (unsigned a = 0; a <= p_max; ++a) {
    if (!e1[a][0].known) return false;
    long sign = a % 2 ? -1 : 1;
    lhs += sign * static_cast<long>(e1[a][0].value.free_rank);
    rhs += sign * static_cast<long>(row0.homology(a).free_rank);
  }
  return lhs == rhs;
}

SpectralPage build_e1(unsigned n, unsigned p, unsigned gp_type, unsigned p_max, unsigned q_max) {
  SpectralPage page;
  page.n = n;
  page.p = p;
  page.gp_type = gp_type;
  page.p_max = p_max;
  page.q_max = q_max;
  page.e1.assign(p_max + 1, std::vector<PageEntry>(q_max + 1));
  auto mark_all = [&](const std::string& why) {
    for (auto& col : page.e1)
      for (auto& e : col) e = PageEntry{false, {}, why};
  };
  MatrixGroup g = [&] {
    try {
      return MatrixGroup::general_linear(n, p);
    } catch (const CapExceeded& e) {
      mark_all(e.what());
      throw;
    }
  }();
  ChainComplex c = build_complex(n, p, gp_type, p_max, true);
  for (unsigned a = 0; a <= p_max; ++a) {
    GModule m = GModule::from_complex(g, c, a);
    for (long qm = q_max; qm >= 0; --qm) {
      try {
        GroupHomology h = group_homology(m, static_cast<unsigned>(qm));
        for (unsigned q = 0; q <= static_cast<unsigned>(qm); ++q)
          page.e1[a][q] = PageEntry{true, h.groups[q], h.method};
        break;
      } catch (const CapExceeded& e) {
        page.e1[a][qm] = PageEntry{false, {}, e.what()};
      }
    }
  }
  page.row0 = coinvariant_complex(g, c);
  for (unsigned a = 0; a < p_max; ++a)
    page.e2_row0.push_back(PageEntry{true, page.row0.homology(a), "coinvariants"});
  return page;
}

// ---------------------------------------------------------------------------
// E^2 corner

namespace {

std::string symbol_name(const std::vector<unsigned>& a) {
  std::string s = "{";
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(a[i]);
  }
  return s + "}";
}

}  // namespace

std::uint32_t E2Corner::index_of(const std::vector<unsigned>& alpha) const {
  for (std::uint32_t i = 0; i < symbols.size(); ++i)
    if (symbols[i] == alpha) return i;
  throw NotFound("E2Corner: no symbol " + symbol_name(alpha));
}

SparseVec E2Corner::symbol(const std::vector<unsigned>& alpha) const {
  return SparseVec{{index_of(alpha), Integer(1)}};
}

E2Corner e2_corner(unsigned n, unsigned p, std::uint64_t shuffle_seed) {
  E2Corner e;
  e.n = n;
  e.p = p;
  MatrixGroup g = MatrixGroup::general_linear(n, p);
  ChainComplex c = build_complex(n, p, n, n + 2, true);
  CoinvariantComplex cc = coinvariant_complex(g, c);
  VectorSpace v(n, p);

  std::vector<unsigned> alpha(n, 1);
  for (;;) {
    e.symbols.push_back(alpha);
    unsigned j = n;
    while (j > 0 && alpha[j - 1] == p - 1) alpha[--j] = 1;
    if (j == 0) break;
    ++alpha[j - 1];
  }
  if (shuffle_seed != 0) {
    std::mt19937_64 rng(shuffle_seed);
    std::shuffle(e.symbols.begin(), e.symbols.end(), rng);
  }
  for (const auto& s : e.symbols) e.names.push_back(symbol_name(s));

  std::vector<SparseVec> proj;
  for (const auto& s : e.symbols) {
    ColumnTuple t;
    for (unsigned i = 1; i <= n; ++i) t = t.append(v.basis(i));
    std::vector<long> vals(s.begin(), s.end());
    t = t.append(v.encode(FpVector::from_values(vals, p)));
    int sign = sort_columns(t);
    SparseVec x = cc.project(n + 1, c.index_of(n + 1, t));
    for (auto& [o, val] : x) val *= sign;
    proj.push_back(std::move(x));
  }
  std::size_t orbits = cc.orders[n + 1].size();
  ExactMatrix pi = ExactMatrix::from_columns(orbits, std::move(proj));
  ExactMatrix all = hcat(hcat(pi, cc.d[n + 2]), cc.relations[n + 1]);
  e.relations = kernel_basis(all).row_range(0, e.symbols.size());
  e.group = AbelianGroup(e.symbols.size(), e.relations);
  e.e1_n0 = cc.degree_group(n).structure();
  e.bottom_row_homology = cc.homology(n + 1);
  return e;
}

SparseVec relation_family_one(const E2Corner& e, const std::vector<unsigned>& alpha,
                              const std::vector<unsigned>& beta) {
  unsigned n = e.n, p = e.p;
  if (alpha.size() != n || beta.size() != n) throw Error("relation_family_one: wrong arity");
  for (unsigned i = 0; i < n; ++i) {
    if (alpha[i] % p == 0 || beta[i] % p == 0) throw Error("relation_family_one: entries must be units");
    for (unsigned j = 0; j < i; ++j)
      if (beta[i] % p == beta[j] % p) throw Error("relation_family_one: the b_j must be distinct");
  }
  SparseVec r;
  for (unsigned i = 0; i < n; ++i) {
    std::vector<unsigned> gamma;
    for (unsigned j = 0; j < n; ++j)
      if (j != i) gamma.push_back(static_cast<unsigned>(mod_mul(alpha[j], mod_sub(beta[j], beta[i], p), p)));
    gamma.push_back(beta[i] % p);
    long sign = (i + 1 + n) % 2 ? -1 : 1;
    sparse_axpy(r, Integer(sign), e.symbol(gamma));
  }
  std::vector<unsigned> ab;
  for (unsigned j = 0; j < n; ++j) ab.push_back(static_cast<unsigned>(mod_mul(alpha[j], beta[j], p)));
  sparse_axpy(r, Integer(-1), e.symbol(ab));
  sparse_axpy(r, Integer(1), e.symbol(alpha));
  return r;
}

SparseVec relation_antisymmetry(const E2Corner& e, const std::vector<unsigned>& alpha,
                                const Permutation& sigma) {
  if (sigma.size() != e.n || alpha.size() != e.n) throw Error("relation_antisymmetry: wrong arity");
  Permutation inv = inverse(sigma);
  std::vector<unsigned> permuted(e.n);
  for (unsigned i = 0; i < e.n; ++i) permuted[i] = alpha[inv[i]];
  SparseVec r = e.symbol(alpha);
  sparse_axpy(r, Integer(-permutation_sign(sigma)), e.symbol(permuted));
  return r;
}

// ---------------------------------------------------------------------------
// Stability

StabilityReport stability_extract(unsigned n, unsigned p, const Integer& m, unsigned i_max) {
  if (n < 2) throw Error("stability_extract: requires n >= 2");
  StabilityReport r;
  r.n = n;
  r.p = p;
  r.m = m;
  MatrixGroup small = MatrixGroup::general_linear(n - 1, p);
  MatrixGroup big = MatrixGroup::general_linear(n, p);

  auto record = [&](unsigned i, const GroupMapSummary& s) {
    r.chi.push_back(s.cokernel);
    r.kappa.push_back(s.kernel);
    r.chi_localized.push_back(localize(s.cokernel, m));
    r.kappa_localized.push_back(localize(s.kernel, m));
    bool chi0 = r.chi_localized.back().is_zero(), kappa0 = r.kappa_localized.back().is_zero();
    std::string v;
    if (i + 2 <= n) {
      v = chi0 && kappa0 ? "chi and kappa vanish as predicted" : "predicted vanishing fails";
    } else if (i + 1 == n) {
      v = chi0 ? "chi vanishes as predicted" : "predicted vanishing of chi fails";
    } else {
      v = "no prediction";
    }
    r.verdicts.push_back(v + " (chi = " + s.cokernel.to_string() + ", kappa = " + s.kernel.to_string() + ")");
  };

  AbelianGroup z(1, ExactMatrix(1, 0));
  record(0, kernel_cokernel(z, z, ExactMatrix::identity(1)));
  if (i_max >= 1) {
    Abelianization a_small(small), a_big(big);
    ExactMatrix map = abelianization_map(small, a_big, [&](std::uint32_t x) {
      std::vector<std::vector<long>> rows(n, std::vector<long>(n, 0));
      for (unsigned i = 0; i + 1 < n; ++i)
        for (unsigned j = 0; j + 1 < n; ++j) rows[i][j] = small.element(x).entry(i, j).value();
      rows[n - 1][n - 1] = 1;
      return big.index_of(GroupElement::from_rows(rows, p));
    });
    record(1, kernel_cokernel(a_small.group(), a_big.group(), map));
  }
  for (unsigned i = 2; i <= i_max; ++i) r.verdicts.push_back("insufficient data");
  return r;
}

}  // namespace gphom
