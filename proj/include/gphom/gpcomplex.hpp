#pragma once

// General-position complexes A^(i)_* over F_p^n and their unordered quotients.

#include <cstdint>
#include <string>
#include <vector>

#include "gphom/exactalg.hpp"
#include "gphom/field.hpp"
#include "gphom/glgroup.hpp"

namespace gphom {

// Every min(i, k)-subset of the k columns is linearly independent.
bool is_general_position(const std::vector<FpVector>& columns, unsigned i);
bool is_general_position(const VectorSpace& v, const ColumnTuple& columns, unsigned i);

// 0-based; sigma[j] is the image of j. compose(a, b) applies a first, then b.
using Permutation = std::vector<unsigned>;
int permutation_sign(const Permutation& sigma);
Permutation compose(const Permutation& a, const Permutation& b);
Permutation inverse(const Permutation& sigma);
// Adjacent transposition swapping positions j and j+1 (0-based) in S_k.
Permutation adjacent_transposition(unsigned k, unsigned j);
std::vector<Permutation> all_permutations(unsigned k);

struct SignedTuple {
  int sign;
  ColumnTuple tuple;
};

// [X] . sigma = sign(sigma) [X_{sigma^-1(1)}, ..., X_{sigma^-1(k)}], a right action.
SignedTuple apply_permutation(const ColumnTuple& x, const Permutation& sigma);

// Chain complex of general-position generators truncated at k_max. Degree 0
// is Z on the empty tuple. Unordered complexes use sorted representatives;
// representatives with a repeated column are Z/2 summands (torsion flag set)
// and differential rows of such targets are reduced mod 2.
struct ChainComplex {
  unsigned n = 0, p = 0, gp_type = 0, k_max = 0;
  bool unordered = false;
  std::vector<std::vector<ColumnTuple>> bases;  // sorted, degrees 0..k_max
  std::vector<std::vector<char>> torsion;       // parallel to bases
  std::vector<ExactMatrix> d;                   // d[k] : C_k -> C_{k-1}; d[0] is 0 x rank(0)

  std::size_t rank(unsigned k) const { return bases.at(k).size(); }
  // Throws NotFound.
  std::uint32_t index_of(unsigned k, const ColumnTuple& t) const;
  bool contains(unsigned k, const ColumnTuple& t) const;
  bool has_torsion() const;
  // Columns 2 e_t for torsion generators t in degree k.
  ExactMatrix torsion_relations(unsigned k) const;
  // H_k; requires k < k_max (the truncation degree is not a homology degree).
  HomologyResult homology(unsigned k) const;
  VectorSpace space() const { return VectorSpace(n, p); }
};

// Throws CapExceeded if a basis would exceed caps().max_basis.
ChainComplex build_complex(unsigned n, unsigned p, unsigned gp_type, unsigned k_max,
                           bool unordered = false);
ChainComplex unordered_quotient(const ChainComplex& c);

// Projection A_k -> Ã_k: [X] -> sign(sort) [sorted X] (mod 2 on torsion).
ExactMatrix quotient_map(const ChainComplex& ordered, const ChainComplex& unordered, unsigned k);

// Matrix of the right action of sigma on C_k (ordered complexes). With
// `signed_action` the coefficient sign(sigma) is included.
ExactMatrix permutation_matrix(const ChainComplex& c, unsigned k, const Permutation& sigma,
                               bool signed_action = true);
// Matrix of g acting columnwise on C_k; unordered complexes re-sort with sign.
ExactMatrix group_action_matrix(const ChainComplex& c, unsigned k, const GroupElement& g);

struct ConeResult {
  std::uint32_t vector;  // encoded a~
  SparseVec cone;        // in C_{k+1}
};

// Searches a~ in lexicographic order such that (a~, X) is a generator for every
// X in the support of the cycle; returns the cone with d(cone) = cycle.
// Throws NotFound if no vector works, CompositionError if `cycle` is not a cycle.
ConeResult cone_vector(const ChainComplex& c, unsigned k, const SparseVec& cycle);

// Well-formedness of A^(i)_* and its quotient for k <= k_max, checked per
// generator. Mode per degree: "matrices" (materialized, products checked),
// "exhaustive" (every generator streamed) or "orbit-representatives" (one
// reduced row echelon representative per GL_n-orbit; all checked properties
// are GL_n-invariant).
struct WellFormedness {
  unsigned n = 0, p = 0, gp_type = 0, k_max = 0;
  std::vector<std::string> modes;  // per degree 1..k_max
  std::size_t generators_checked = 0;
  bool boundary_squared_zero = true;
  bool permutation_equivariant = true;
  bool faces_closed = true;
  bool filtration = true;
  bool group_commutes = true;
  std::string witness;
  bool ok() const {
    return boundary_squared_zero && permutation_equivariant && faces_closed && filtration &&
           group_commutes;
  }
};

WellFormedness check_well_formed(unsigned n, unsigned p, unsigned gp_type, unsigned k_max,
                                 std::size_t exhaustive_limit = 2'000'000);

// All n x k matrices in reduced row echelon form whose columns satisfy GP(i):
// one representative per GL_n-orbit of generators of A^(i)_k.
std::vector<ColumnTuple> orbit_representatives(unsigned n, unsigned p, unsigned gp_type, unsigned k);

}  // namespace gphom
