#pragma once

// Exact sparse integer linear algebra: matrices over Z, Smith normal form,
// homology of integer complexes, finitely presented abelian groups.

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace gphom {

using Integer = mpz_class;

// Sorted by index, no zero values.
using SparseVec = std::vector<std::pair<std::uint32_t, Integer>>;

struct ResourceCaps {
  std::size_t max_nonzeros = 60'000'000;   // per matrix / per elimination
  std::size_t max_entry_bits = 4096;       // bit length of any intermediate
  std::size_t max_group_order = 200'000;   // explicit group enumeration
  std::size_t max_basis = 3'000'000;       // materialized basis elements
};

const ResourceCaps& caps();
void set_caps(const ResourceCaps& c);

// Installs caps for the lifetime of the object, restoring the previous ones.
class ScopedCaps {
 public:
  explicit ScopedCaps(const ResourceCaps& c);
  ~ScopedCaps();
  ScopedCaps(const ScopedCaps&) = delete;
  ScopedCaps& operator=(const ScopedCaps&) = delete;

 private:
  ResourceCaps saved_;
};

void sparse_normalize(SparseVec& v);
// a += coef * b
void sparse_axpy(SparseVec& a, const Integer& coef, const SparseVec& b);
SparseVec sparse_from_dense(const std::vector<Integer>& v);
std::vector<Integer> sparse_to_dense(const SparseVec& v, std::size_t n);

// Immutable sparse integer matrix, stored by columns.
class ExactMatrix {
 public:
  ExactMatrix() = default;
  ExactMatrix(std::size_t rows, std::size_t cols);

  static ExactMatrix identity(std::size_t n);
  static ExactMatrix from_dense(const std::vector<std::vector<long>>& rows);
  static ExactMatrix from_dense(const std::vector<std::vector<Integer>>& rows);
  // Columns are normalized (sorted, zeros removed); indices must be < rows.
  static ExactMatrix from_columns(std::size_t rows, std::vector<SparseVec> cols);
  static ExactMatrix diagonal(std::size_t rows, std::size_t cols,
                              const std::vector<Integer>& diag);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_.size(); }
  std::size_t nnz() const;

  Integer at(std::size_t r, std::size_t c) const;
  const SparseVec& column(std::size_t c) const { return cols_[c]; }
  const std::vector<SparseVec>& columns() const { return cols_; }

  bool is_zero() const;
  ExactMatrix transpose() const;
  SparseVec apply(const SparseVec& x) const;
  std::vector<Integer> apply(const std::vector<Integer>& x) const;

  ExactMatrix select_columns(const std::vector<std::size_t>& idx) const;
  ExactMatrix select_rows(const std::vector<std::size_t>& idx) const;
  ExactMatrix row_range(std::size_t begin, std::size_t end) const;
  ExactMatrix column_range(std::size_t begin, std::size_t end) const;
  std::vector<std::vector<Integer>> to_dense() const;

  friend ExactMatrix operator*(const ExactMatrix& a, const ExactMatrix& b);
  friend ExactMatrix operator+(const ExactMatrix& a, const ExactMatrix& b);
  friend ExactMatrix operator-(const ExactMatrix& a, const ExactMatrix& b);
  friend ExactMatrix operator*(const Integer& s, const ExactMatrix& a);
  friend bool operator==(const ExactMatrix& a, const ExactMatrix& b);

 private:
  std::size_t rows_ = 0;
  std::vector<SparseVec> cols_;
};

ExactMatrix hcat(const ExactMatrix& a, const ExactMatrix& b);
ExactMatrix vcat(const ExactMatrix& a, const ExactMatrix& b);

// Accumulates (row, col, value) triplets; duplicates are summed.
class MatrixBuilder {
 public:
  MatrixBuilder(std::size_t rows, std::size_t cols);
  void add(std::size_t r, std::size_t c, const Integer& v);
  void add(std::size_t r, std::size_t c, long v);
  ExactMatrix build() &&;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<std::pair<std::uint64_t, Integer>> items_;
};

// Coordinate triplet text format:
//   %%ExactMatrix <rows> <cols> <nnz>
//   <row> <col> <value>     (0-based, one nonzero per line, column-major order)
void write_coordinate(std::ostream& os, const ExactMatrix& m);
ExactMatrix read_coordinate(std::istream& is);
std::string to_coordinate_string(const ExactMatrix& m);
ExactMatrix from_coordinate_string(const std::string& s);

// ---------------------------------------------------------------------------
// Smith normal form

struct SmithOptions {
  bool left = true;
  bool right = true;
  bool left_inverse = false;
  bool right_inverse = false;
};

// left * m * right = diag(diag) with diag nonnegative, d_1 | d_2 | ..., zeros
// last. `diag` has min(rows, cols) entries. Transforms that were not requested
// are left empty (0 x 0).
struct SmithResult {
  std::vector<Integer> diag;
  std::size_t rank = 0;
  ExactMatrix left, right;
  ExactMatrix left_inverse, right_inverse;
};

SmithResult smith_normal_form(const ExactMatrix& m, const SmithOptions& opt = {});

// Nonzero invariant factors only (including 1s); no transforms are tracked.
std::vector<Integer> smith_invariants(const ExactMatrix& m);
std::size_t rank(const ExactMatrix& m);

// ---------------------------------------------------------------------------
// Homology

struct HomologyResult {
  std::size_t free_rank = 0;
  std::vector<Integer> invariant_factors;  // each >= 2, d_i | d_{i+1}

  bool is_zero() const { return free_rank == 0 && invariant_factors.empty(); }
  std::string to_string() const;
  friend bool operator==(const HomologyResult& a, const HomologyResult& b);

  // Invariant factors from an arbitrary list of cyclic orders (0 = Z).
  static HomologyResult from_cyclic_orders(const std::vector<Integer>& orders);
};

HomologyResult direct_sum(const HomologyResult& a, const HomologyResult& b);

// Tensor with Z[1/m]: torsion supported on primes dividing m disappears.
HomologyResult localize(const HomologyResult& h, const Integer& m);
Integer factorial(unsigned k);

// H = ker(d_out) / im(d_in), d_in : C_{k+1} -> C_k, d_out : C_k -> C_{k-1}.
HomologyResult homology_at(const ExactMatrix& d_in, const ExactMatrix& d_out);

// Homology of a complex of finitely presented modules C_j = Z^{b_j} / colspan(rel_j):
// d_in : C_{k+1} -> C_k, d_out : C_k -> C_{k-1}, rel_mid for C_k, rel_out for C_{k-1}.
// Throws WellDefinednessFailure if the differentials do not respect the relations.
HomologyResult module_homology(const ExactMatrix& d_in, const ExactMatrix& d_out,
                               const ExactMatrix& rel_mid, const ExactMatrix& rel_out);

// Columns form a Z-basis of ker(m) (a saturated sublattice).
ExactMatrix kernel_basis(const ExactMatrix& m);

// Finitely presented abelian group Z^g / colspan(relations), with canonical
// coordinates read off a Smith normal form of the relation matrix.
class AbelianGroup {
 public:
  AbelianGroup() = default;
  AbelianGroup(std::size_t generators, ExactMatrix relations);

  std::size_t generator_count() const { return gens_; }
  const ExactMatrix& relations() const { return relations_; }
  const HomologyResult& structure() const { return structure_; }

  // Canonical coordinates of x (length = number of nontrivial cyclic factors,
  // torsion factors first). Two elements are equal iff their canonical forms are.
  std::vector<Integer> canonical(const SparseVec& x) const;
  std::vector<Integer> canonical(const std::vector<Integer>& x) const;
  bool is_zero(const SparseVec& x) const;
  // Orders of the canonical coordinates: d >= 2 for torsion, 0 for free.
  const std::vector<Integer>& moduli() const { return moduli_; }
  // Element of Z^g representing the j-th canonical generator.
  SparseVec generator(std::size_t j) const;

 private:
  std::size_t gens_ = 0;
  ExactMatrix relations_;
  ExactMatrix left_;       // SNF left transform (g x g)
  ExactMatrix left_inv_;
  std::vector<std::size_t> slots_;  // SNF rows that survive (d != 1)
  std::vector<Integer> moduli_;
  HomologyResult structure_;
};

// A homomorphism Z^a/R_a -> Z^b/R_b given by an integer matrix (b x a).
struct GroupMapSummary {
  HomologyResult kernel;
  HomologyResult cokernel;
};
GroupMapSummary kernel_cokernel(const AbelianGroup& source, const AbelianGroup& target,
                                const ExactMatrix& map);

// Homology with canonical coordinates; used for induced-map matrices.
class HomologyPresentation {
 public:
  HomologyPresentation(const ExactMatrix& d_in, const ExactMatrix& d_out);

  const HomologyResult& result() const { return group_.structure(); }
  std::size_t chain_dimension() const { return dim_; }
  std::size_t generator_count() const { return group_.moduli().size(); }
  const std::vector<Integer>& moduli() const { return group_.moduli(); }

  bool is_cycle(const SparseVec& x) const;
  // Throws CompositionError if x is not a cycle.
  std::vector<Integer> coordinates(const SparseVec& x) const;
  // Representative cycle (in C_k) of the j-th canonical generator.
  SparseVec generator_cycle(std::size_t j) const;

 private:
  std::size_t dim_ = 0;
  ExactMatrix d_out_;
  ExactMatrix kernel_;      // dim x z
  ExactMatrix right_inv_;   // SNF of d_out: rows rank.. give kernel coordinates
  std::size_t out_rank_ = 0;
  AbelianGroup group_;      // Z^z / (image of d_in in kernel coordinates)
};

// Matrix of the map induced on homology by a chain map f : C_k -> C'_k, in the
// canonical generators of both sides; entries reduced modulo target orders.
std::vector<std::vector<Integer>> induced_map(const HomologyPresentation& source,
                                              const HomologyPresentation& target,
                                              const ExactMatrix& f);
bool is_identity(const std::vector<std::vector<Integer>>& m,
                 const std::vector<Integer>& moduli);

}  // namespace gphom
