#pragma once

// The E^1 page E^1_{a,q} = H_q(GL_n; Ã^(i)_a), its bottom row as a complex of
// coinvariants, the corner E^2_{n+1,0}, and the stability kernels/cokernels.

#include <cstdint>
#include <string>
#include <vector>

#include "gphom/exactalg.hpp"
#include "gphom/glgroup.hpp"
#include "gphom/gpcomplex.hpp"
#include "gphom/grouphomology.hpp"

namespace gphom {

struct PageEntry {
  bool known = false;
  HomologyResult value;
  std::string method;  // "direct", "shapiro", "coinvariants", "zero", or the cap message
};

// Coinvariants of an unordered complex degree by degree: generators are the
// orbits (Z, or Z/2 when a stabilizer element acts by -1 or the orbit is a
// Z/2 summand) and d[a] is the pushed-forward differential.
struct CoinvariantComplex {
  std::vector<OrbitDecomposition> orbits;
  std::vector<std::vector<Integer>> orders;  // per degree, per orbit: 0 or 2
  std::vector<ExactMatrix> d;                // d[a] : degree a -> degree a-1
  std::vector<ExactMatrix> relations;        // 2 e_o for Z/2 orbits

  // Class of basis element x of degree a, as a vector on orbit generators.
  SparseVec project(unsigned a, std::uint32_t x) const;
  SparseVec project(unsigned a, const SparseVec& chain) const;
  // Homology at degree a (a < number of degrees - 1).
  HomologyResult homology(unsigned a) const;
  AbelianGroup degree_group(unsigned a) const;
};

CoinvariantComplex coinvariant_complex(const MatrixGroup& g, const ChainComplex& c);

struct SpectralPage {
  unsigned n = 0, p = 0, gp_type = 0, p_max = 0, q_max = 0;
  std::vector<std::vector<PageEntry>> e1;  // e1[a][q]
  CoinvariantComplex row0;                  // d^1 on the bottom row
  std::vector<PageEntry> e2_row0;           // E^2_{a,0}, a < p_max

  // Zero outside the first quadrant; unknown beyond the truncation.
  PageEntry entry(long a, long q) const;
  PageEntry localized(long a, long q, const Integer& m) const;
  // Euler-Poincare bookkeeping on the bottom row: the alternating sum of the
  // free ranks of E^1_{a,0} (a <= p_max) equals that of the homology of the
  // truncated coinvariant complex (top degree counted as a kernel).
  bool euler_check() const;
};

// Entries beyond the caps are left unknown with the cap message.
SpectralPage build_e1(unsigned n, unsigned p, unsigned gp_type, unsigned p_max, unsigned q_max);

// E^2_{n+1,0} = coker(H_0(GL_n; Ã^(n)_{n+2}) -> H_0(GL_n; Ã^(n)_{n+1})), presented on the
// (p-1)^n symbols {a_1, ..., a_n} = class of (e_1, ..., e_n, (a_1, ..., a_n)^t).
struct E2Corner {
  unsigned n = 0, p = 0;
  std::vector<std::vector<unsigned>> symbols;  // enumeration order
  std::vector<std::string> names;
  ExactMatrix relations;                        // columns in Z^symbols
  AbelianGroup group;
  HomologyResult e1_n0;                         // H_0(GL_n; Ã^(n)_n)
  // ker/im at degree n+1 of the coinvariant complex; equals the cokernel once
  // E^1_{n,0} vanishes.
  HomologyResult bottom_row_homology;

  const HomologyResult& structure() const { return group.structure(); }
  // Throws NotFound unless every entry is a unit of F_p.
  std::uint32_t index_of(const std::vector<unsigned>& alpha) const;
  SparseVec symbol(const std::vector<unsigned>& alpha) const;
  bool reduces_to_zero(const SparseVec& x) const { return group.is_zero(x); }
};

// A nonzero seed shuffles the enumeration order of the symbols.
E2Corner e2_corner(unsigned n, unsigned p, std::uint64_t shuffle_seed = 0);

// sum_i (-1)^{i+n} {a_j(b_j - b_i) (j != i), b_i} - {a_j b_j} + {a_j}.
// Throws Error unless all a_j, b_j are units and the b_j are distinct.
SparseVec relation_family_one(const E2Corner& e, const std::vector<unsigned>& alpha,
                              const std::vector<unsigned>& beta);
// {a} - sign(sigma) {a_{sigma^-1(1)}, ..., a_{sigma^-1(n)}}.
SparseVec relation_antisymmetry(const E2Corner& e, const std::vector<unsigned>& alpha,
                                const Permutation& sigma);

// chi_i = coker, kappa_i = ker of H_i(GL_{n-1}) -> H_i(GL_n) for the embedding
// g -> diag(g, 1); i <= 1 (H_0 and abelianizations).
struct StabilityReport {
  unsigned n = 0, p = 0;
  Integer m;
  std::vector<HomologyResult> chi, kappa;
  std::vector<HomologyResult> chi_localized, kappa_localized;
  std::vector<std::string> verdicts;  // per degree
};

StabilityReport stability_extract(unsigned n, unsigned p, const Integer& m, unsigned i_max = 1);

}  // namespace gphom
