#pragma once

// Milnor K-groups of F_p by generators and relations, the symbol map out of
// the E^2 corner, cross-product classes, and the round-trip checks.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gphom/dimshift.hpp"
#include "gphom/exactalg.hpp"
#include "gphom/specseq.hpp"

namespace gphom {

// Integer combination of symbols {a_1, ..., a_n} of units of F_p.
class SymbolicElement {
 public:
  SymbolicElement(unsigned n, unsigned p) : n_(n), p_(p) {}
  // Throws NotAUnit for a zero or out-of-range entry.
  static SymbolicElement symbol(const std::vector<unsigned>& alpha, unsigned p);

  unsigned n() const { return n_; }
  unsigned p() const { return p_; }
  const std::map<std::vector<unsigned>, Integer>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add(const std::vector<unsigned>& alpha, const Integer& c);
  SymbolicElement operator+(const SymbolicElement& o) const;
  SymbolicElement operator-(const SymbolicElement& o) const;
  friend bool operator==(const SymbolicElement& a, const SymbolicElement& b) = default;

  // "{2,3} - {1,3} + 2{1,1}", or "0".
  std::string to_string() const;

 private:
  unsigned n_, p_;
  std::map<std::vector<unsigned>, Integer> terms_;
};

std::string symbol_text(const std::vector<unsigned>& alpha);

// Z^{(p-1)^n} modulo multilinearity in every slot and {.., a, 1-a, ..} = 0 in
// adjacent slots.
struct MilnorPresentation {
  unsigned n = 0, p = 0;
  std::vector<std::vector<unsigned>> symbols;  // lexicographic
  ExactMatrix relations;                        // multilinearity columns first
  std::size_t multilinearity_count = 0, steinberg_count = 0;
  AbelianGroup group;

  const HomologyResult& structure() const { return group.structure(); }
  std::size_t index_of(const std::vector<unsigned>& alpha) const;
  SparseVec vector(const SymbolicElement& x) const;
  std::vector<Integer> canonical(const SymbolicElement& x) const;
  bool is_zero(const SymbolicElement& x) const;
  // Canonical representative: sum over canonical coordinates of the
  // corresponding generator, as symbols. Equal classes give equal results.
  SymbolicElement reduce(const SymbolicElement& x) const;
};

// Throws CapExceeded if (p-1)^n exceeds caps().max_basis.
MilnorPresentation milnor_group(unsigned n, unsigned p);

// |K^M_2(F_p)| counted as the number of bimultiplicative maps
// F_p^* x F_p^* -> Z/(p-1) killing every {a, 1-a}; independent of the SNF.
std::size_t milnor_k2_order_bruteforce(unsigned p);

// Element of the corner presentation <-> formal symbols.
SymbolicElement from_corner(const E2Corner& e, const SparseVec& x);
SparseVec to_corner(const E2Corner& e, const SymbolicElement& x);

// Throws WellDefinednessFailure (naming the first relation that survives)
// unless every relation of the corner vanishes in K^M_n.
void check_symbol_map(const E2Corner& e, const MilnorPresentation& k);
// Generator to generator, reduced in K^M_n; checks well-definedness first.
SymbolicElement e2_to_milnor(const SymbolicElement& x, const E2Corner& e, const MilnorPresentation& k);

// c(D_1(a_1), ..., D_n(a_n)) (x) 1 in the bar complex of GL_n(F_p), and its
// class in H_n(GL_n) / H_n(GL_{n-1}) when that quotient is computable.
struct CrossProductClass {
  std::vector<unsigned> alphas;
  BarChain cycle;
  bool is_cycle = false;
  std::optional<std::vector<Integer>> quotient_class;
  std::string quotient_note;
};

CrossProductClass cross_product_class(const std::shared_ptr<const ShiftContext>& ctx,
                                      const std::vector<unsigned>& alphas,
                                      const StableQuotient* quotient = nullptr);
CrossProductClass cross_product_class(unsigned n, unsigned p, const std::vector<unsigned>& alphas);

enum class RoundTripVerdict { pass, degenerate_pass, fail };
std::string to_string(RoundTripVerdict v);

struct RoundTripEntry {
  std::vector<unsigned> alphas;
  SymbolicElement original, image;  // reduced in K^M_n
  SparseVec corner;                 // class reached in E^2
  bool reverse_equal = false;       // E^2 -> K -> ... -> E^2 returns {alphas}
  RoundTripVerdict verdict = RoundTripVerdict::fail;
  std::string error;

  RoundTripEntry(unsigned n, unsigned p) : original(n, p), image(n, p) {}
};

struct RoundTripReport {
  unsigned n = 0, p = 0;
  HomologyResult milnor, corner;
  std::vector<RoundTripEntry> entries;
  // Symbols with an entry 1 that do not vanish in E^2 (finite-field artifacts).
  std::vector<std::vector<unsigned>> one_entry_survivors;

  bool all_pass() const;  // pass or degenerate pass everywhere
};

// For every unit tuple: cross product cycle -> connecting maps down to t_n
// (lifting by e_{n-j} first) -> E^2 -> K^M_n, compared with the symbol.
RoundTripReport roundtrip_check(unsigned n, unsigned p);

}  // namespace gphom
