#pragma once

// Dimension shifting along Ã^(n)_*: the modules t_i = ker(Ã_i -> Ã_{i-1}),
// connecting homomorphisms between H_*(GL_n; t_i), and the chain-level
// boundary formulas for cross-product cycles.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gphom/exactalg.hpp"
#include "gphom/glgroup.hpp"
#include "gphom/gpcomplex.hpp"
#include "gphom/specseq.hpp"

namespace gphom {

// GL_n(F_p) with the unordered complex Ã^(n)_* truncated at k_max.
struct ShiftContext {
  unsigned n = 0, p = 0;
  MatrixGroup group;
  ChainComplex complex;

  // g . x on a chain of degree k (columnwise action, re-sorted with sign).
  SparseVec act(std::uint32_t g, unsigned k, const SparseVec& x) const;
  // Some y in Ã_{k+1} with d(y) = x. Tries the cone over `preferred` first,
  // then every vector, then an exact lattice solve. Throws NotFound.
  SparseVec lift(unsigned k, const SparseVec& x,
                 std::optional<std::uint32_t> preferred = std::nullopt) const;
};

std::shared_ptr<const ShiftContext> make_shift_context(unsigned n, unsigned p, unsigned k_max);

// t_i as an explicit saturated sublattice of Ã_i with the induced action.
// t_0 is Ã_0 = Z (the kernel of the zero map out of degree 0).
class TiModule {
 public:
  TiModule(std::shared_ptr<const ShiftContext> ctx, unsigned i);

  unsigned degree() const { return i_; }
  const ShiftContext& context() const { return *ctx_; }
  std::shared_ptr<const ShiftContext> context_ptr() const { return ctx_; }
  std::size_t rank() const { return basis_.cols(); }
  // Columns in Ã_i coordinates.
  const ExactMatrix& basis() const { return basis_; }

  bool contains(const SparseVec& y) const;
  // Coordinates of y in the basis; throws NotFound if y is not in t_i.
  SparseVec coordinates(const SparseVec& y) const;
  SparseVec embed(const SparseVec& coords) const { return basis_.apply(coords); }
  // Matrix of g in basis coordinates (cached).
  const ExactMatrix& action(std::uint32_t g) const;

  // Throws ActionClosureError unless every g maps the lattice into itself.
  void validate() const;
  // Z^rank / span(g x - x) over the generators of G.
  AbelianGroup coinvariants() const;

  // ker(d_i) and coker(d_{i+2} : Ã_{i+2} -> Ã_{i+1}); they agree wherever Ã is
  // exact at degree i+1. Needs the complex through degree i+2.
  HomologyResult kernel_structure() const;
  HomologyResult cokernel_structure() const;

 private:
  std::shared_ptr<const ShiftContext> ctx_;
  unsigned i_;
  ExactMatrix basis_;
  ExactMatrix left_;   // SNF left transform of the basis
  ExactMatrix right_;  // SNF right transform of the basis
  mutable std::vector<std::optional<ExactMatrix>> action_;
};

// Builds Ã through degree i+2.
TiModule compute_t(unsigned i, unsigned n, unsigned p);

// A finite sum of [g_1|...|g_q] (x) m with m in Ã_j, tuples of group indices
// without the identity. The differential acts on the left,
//   d(m[g_1|...|g_q]) = g_1 m [g_2|...] + sum_{0<i<q} (-1)^i m [..|g_{i+1} g_i|..]
//                      + (-1)^q m [g_1|...|g_{q-1}],
// which the substitution g -> g^-1 identifies with the bar complex of
// `bar_complex`.
struct BarChain {
  unsigned q = 0, j = 0;
  std::map<std::vector<std::uint32_t>, SparseVec> terms;

  bool is_zero() const { return terms.empty(); }
  void add(const std::vector<std::uint32_t>& tuple, const Integer& c, const SparseVec& m);
  friend bool operator==(const BarChain& a, const BarChain& b) = default;
};

BarChain bar_boundary(const ShiftContext& ctx, const BarChain& x);
BarChain bar_difference(const BarChain& a, const BarChain& b);

// sum_sigma sign(sigma) [g_sigma(1)|...|g_sigma(n)] (x) m for pairwise commuting g.
BarChain cross_cycle(const ShiftContext& ctx, const std::vector<std::uint32_t>& g, unsigned j,
                     const SparseVec& m);
// D_1(a_1), ..., D_n(a_n) as group indices.
std::vector<std::uint32_t> diagonal_generators(const ShiftContext& ctx,
                                               const std::vector<unsigned>& alphas);

// Connecting homomorphism of t_{j+1} -> Ã_{j+1} -> t_j at chain level: lift
// every coefficient to Ã_{j+1}, then apply the bar differential.
BarChain connecting_step(const ShiftContext& ctx, const BarChain& z,
                         std::optional<std::uint32_t> preferred = std::nullopt);

// H_q(G; t_j) with canonical coordinates, from the bar complex.
class TiHomology {
 public:
  // Throws CapExceeded if (|G|-1)^{q+1} * rank exceeds `limit` or the caps.
  TiHomology(const TiModule& t, unsigned q, std::size_t limit);

  const HomologyResult& result() const { return pres_->result(); }
  const std::vector<Integer>& moduli() const { return pres_->moduli(); }
  std::size_t generator_count() const { return pres_->generator_count(); }
  // Throws CompositionError if z is not a cycle.
  std::vector<Integer> coordinates(const BarChain& z) const;
  bool is_zero(const BarChain& z) const;
  BarChain generator_cycle(std::size_t g) const;

 private:
  const TiModule* t_;
  unsigned q_;
  std::vector<std::uint32_t> nonid_;          // position -> group index
  std::vector<std::uint32_t> position_;       // group index -> position
  std::unique_ptr<HomologyPresentation> pres_;
};

inline constexpr std::size_t kDirectTiLimit = 300'000;

// Whether the cycle z in B_q (x) t_j is a boundary. Decided directly from the
// bar complex when small enough; otherwise z is pushed down by connecting maps,
// which is exact whenever H_{q-s}(G; Ã_{j+s+1}) = 0 along the way (checked).
// `zero` is empty when neither route applies.
struct ClassDecision {
  std::optional<bool> zero;
  std::string method;
};

ClassDecision class_is_zero(const TiModule& t, const BarChain& z,
                            std::size_t direct_limit = kDirectTiLimit);

struct ConnectingMap {
  unsigned j = 0;  // H_{n-j}(t_j) -> H_{n-j-1}(t_{j+1})
  HomologyResult source, target;
  std::vector<std::vector<Integer>> matrix;  // target generators x source generators
  HomologyResult kernel, cokernel;
  bool invertible_localized = false;         // at (n-1)!
};

struct ConnectingChain {
  unsigned n = 0, p = 0;
  std::vector<ConnectingMap> maps;
  bool truncated = false;
  std::string verdict;
};

ConnectingChain connecting_chain(unsigned n, unsigned p, std::size_t degree_cap = kDirectTiLimit);

// The boundary of c(D_1(a_1), ..., D_n(a_n)) (x) 1 computed by lifting 1 to e_n
// and applying the bar differential, against c(D_1, ..., D_{n-1}) (x)
// (-1)^n (e_n - D_n(a_n) e_n), as classes in H_{n-1}(G; t_1).
struct CrossBoundary {
  std::vector<unsigned> alphas;
  BarChain lhs, rhs;
  bool chain_equal = false;
  ClassDecision equal;
  ClassDecision lhs_zero;  // whether the common class vanishes
};

CrossBoundary boundary_of_cross_cycle(const std::shared_ptr<const ShiftContext>& ctx,
                                      const std::vector<unsigned>& alphas,
                                      std::size_t direct_limit = kDirectTiLimit);

// The lifts x_i, x~_i: x~_0 = e_n, x_i = (-1)^{n-i+1} (x~_{i-1} - D_{n-i+1} x~_{i-1}),
// x~_i = e_{n-i} prepended to each summand of x_i; x_n is lifted to Ã_{n+1} by
// adjoining (a_1, ..., a_n)^t on the right and read off as symbols.
struct IteratedBoundary {
  std::vector<unsigned> alphas;
  std::vector<SparseVec> x;        // x_0 .. x_n in Ã_i coordinates
  SparseVec lift;                  // in Ã_{n+1}
  SparseVec symbols;               // over the corner symbols
  SparseVec formula;               // sum_S (-1)^|S| {.. 1 at S ..}
  bool literal_equal = false;      // symbols == formula as vectors
  bool class_equal = false;        // equal in E^2_{n+1,0}
  bool class_equal_up_to_sign = false;
  bool lifts_fixed = true;         // D_j(a_j) fixes x~_i for j < n-i
};

// Throws NotFound (with the offending tuple) if a prescribed lift leaves
// general position.
IteratedBoundary iterated_boundary(const ShiftContext& ctx, const E2Corner& e,
                                   const std::vector<unsigned>& alphas);
IteratedBoundary iterated_boundary(unsigned n, unsigned p, const std::vector<unsigned>& alphas);

// Class in E^2 (corner symbols) of an element of t_n: lift to Ã_{n+1} and read
// each generator (v_1, ..., v_{n+1}) as {[v_1 ... v_n]^-1 v_{n+1}}.
SparseVec corner_class(const ShiftContext& ctx, const E2Corner& e, const SparseVec& x_n);
SparseVec symbols_of_chain(const ShiftContext& ctx, const E2Corner& e, const SparseVec& y);

// H_n(GL_n) / im H_n(GL_{n-1}) for the embedding g -> diag(g, 1), from bar
// complexes with trivial coefficients (t_0 = Z).
class StableQuotient {
 public:
  // Throws CapExceeded if a bar complex exceeds `limit` columns.
  StableQuotient(std::shared_ptr<const ShiftContext> ctx, std::size_t limit = kDirectTiLimit);

  const HomologyResult& h_n() const { return hn_->result(); }
  const HomologyResult& structure() const { return group_.structure(); }
  const AbelianGroup& group() const { return group_; }
  const TiHomology& homology() const { return *hn_; }
  // Coordinates on the generators of H_n(GL_n) of a cycle z in B_n (x) Ã_0.
  std::vector<Integer> coordinates(const BarChain& z) const { return hn_->coordinates(z); }
  std::vector<Integer> canonical(const BarChain& z) const;
  bool is_zero(const BarChain& z) const;

 private:
  std::shared_ptr<const ShiftContext> ctx_, small_;
  std::unique_ptr<TiModule> t0_, s0_;
  std::unique_ptr<TiHomology> hn_, hs_;
  AbelianGroup group_;
};

// The factored boundary H_n(GL_n) / im H_n(GL_{n-1}) -> H_{n-1}(GL_n; t_1).
struct FactoredBoundary {
  unsigned n = 0, p = 0;
  HomologyResult h_n, quotient;
  HomologyResult kernel, kernel_localized;
  bool injective_localized = false;
};

FactoredBoundary factored_boundary(unsigned n, unsigned p, std::size_t limit = kDirectTiLimit);

}  // namespace gphom
