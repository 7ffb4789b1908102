#pragma once

// Homology of finite matrix groups with coefficients in signed permutation
// modules: normalized bar complexes, Shapiro reduction over orbits,
// coinvariants, abelianization, and the maps used on the A^(n)_k modules.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gphom/exactalg.hpp"
#include "gphom/glgroup.hpp"
#include "gphom/gpcomplex.hpp"

namespace gphom {

// Z-basis (or Z/2 for torsion entries) permuted with signs by a group.
// The group must outlive the module.
class GModule {
 public:
  // Throws CapExceeded if |G| * rank exceeds caps().max_nonzeros.
  GModule(const MatrixGroup& g, std::size_t rank, const SignedAction& act,
          std::vector<char> torsion = {}, std::vector<std::string> labels = {});
  static GModule trivial(const MatrixGroup& g);
  // C_k of a complex over the same F_p^n; throws FieldMismatch otherwise.
  static GModule from_complex(const MatrixGroup& g, const ChainComplex& c, unsigned k);

  const MatrixGroup& group() const { return *group_; }
  std::size_t rank() const { return rank_; }
  SignedIndex act(std::uint32_t g, std::uint32_t b) const {
    std::size_t i = static_cast<std::size_t>(g) * rank_ + b;
    return {image_[i], sign_[i]};
  }
  bool is_torsion(std::uint32_t b) const { return !torsion_.empty() && torsion_[b]; }
  bool has_torsion() const;
  std::string label(std::uint32_t b) const;

  // Throws ActionClosureError unless g -> (action of g) is a homomorphism
  // into signed permutations preserving the torsion summands.
  void validate() const;

 private:
  const MatrixGroup* group_;
  std::size_t rank_;
  std::vector<std::uint32_t> image_;
  std::vector<signed char> sign_;
  std::vector<char> torsion_;
  std::vector<std::string> labels_;
};

// M tensored over ZG with the normalized bar resolution, degrees 0..q_max+1.
// Degree q has basis (tuple of q non-identity elements, basis index b) at
// position tuple_index * rank + b, tuples read in base |G|-1 with g_1 most
// significant. d(m [g_1|...|g_q]) = g_1^-1 m [g_2|...] + sum (-1)^i m [..|g_i g_{i+1}|..]
// + (-1)^q m [g_1|...|g_{q-1}].
struct BarComplexSlice {
  unsigned q_max = 0;
  std::vector<std::size_t> ranks;
  std::vector<ExactMatrix> d;          // d[q] : C_q -> C_{q-1}; d[0] is 0 x ranks[0]
  std::vector<ExactMatrix> relations;  // 2 e_x for torsion basis elements
  bool has_torsion = false;

  HomologyResult homology(unsigned q) const;
};

// Throws CapExceeded if a degree exceeds caps().max_basis.
BarComplexSlice bar_complex(const GModule& m, unsigned q_max);

enum class HomologyMethod { automatic, direct, shapiro };

// Columns in the top bar degree above which `automatic` switches to Shapiro.
inline constexpr std::size_t kDirectBarLimit = 300'000;

struct GroupHomology {
  std::vector<HomologyResult> groups;  // H_0 .. H_{q_max}
  std::string method;                  // "direct" or "shapiro"
};

GroupHomology group_homology(const GModule& m, unsigned q_max,
                             HomologyMethod method = HomologyMethod::automatic);

// One term of M = sum Ind_H^G (Z twisted by character, or Z/2).
struct ShapiroSummand {
  std::vector<std::uint32_t> stabilizer;  // group indices, sorted
  std::vector<int> character;             // parallel to stabilizer
  bool torsion = false;
  std::size_t multiplicity = 0;
  std::uint32_t representative = 0;       // basis index of the first orbit met

  bool sign_twist() const;
};

std::vector<ShapiroSummand> shapiro_reduce(const GModule& m);

// H_q(H; Z_chi) (or Z/2) of one summand, q <= q_max.
std::vector<HomologyResult> summand_homology(const MatrixGroup& g, const ShapiroSummand& s,
                                             unsigned q_max);

struct Coinvariants {
  HomologyResult h0;
  std::vector<std::string> generators;  // one per orbit, label of its representative
  std::vector<Integer> orders;          // 0 (free) or 2, parallel to generators
};

Coinvariants coinvariants(const GModule& m);

// Induced endomorphisms of H_q(G; M), q <= q_max, for a signed permutation f of
// the basis commuting with the action. Matrices are in canonical homology
// coordinates. Throws ActionClosureError if f does not commute with G,
// Unsupported for modules with torsion.
struct InducedMaps {
  std::vector<HomologyResult> groups;
  std::vector<std::vector<std::vector<Integer>>> maps;
  std::string method;

  bool all_identity() const;
};

InducedMaps induced_endomorphism(const GModule& m,
                                 const std::function<SignedIndex(std::uint32_t)>& f,
                                 unsigned q_max,
                                 HomologyMethod method = HomologyMethod::automatic);

// The right action of sigma on A_k (ordered complex). The plain action permutes
// columns; `signed_action` multiplies by sign(sigma).
InducedMaps sigma_action_on_homology(const MatrixGroup& g, const ChainComplex& c, unsigned k,
                                     const Permutation& sigma, unsigned q_max,
                                     bool signed_action = false,
                                     HomologyMethod method = HomologyMethod::automatic);

// The map induced by (x -> h x h^-1, m -> h m), direct bar complex only.
InducedMaps conjugation_action(const GModule& m, std::uint32_t h, unsigned q_max);

// phi : (A_k)^{k-1} -> A_k, block i = id + sigma_i (plain right action).
ExactMatrix phi_map(const ChainComplex& c, unsigned k);
// psi = sum over S_k of (id - sign(sigma) sigma) = k! id - Alt, as an endomorphism of A_k.
ExactMatrix psi_map(const ChainComplex& c, unsigned k);

// G / [G, G] presented on the generators of G.
class Abelianization {
 public:
  explicit Abelianization(const MatrixGroup& g);

  const HomologyResult& structure() const { return group_.structure(); }
  const AbelianGroup& group() const { return group_; }
  std::size_t commutator_order() const { return commutator_order_; }
  // Exponent vector over the generators of a word for the coset of g.
  const SparseVec& word(std::uint32_t g) const { return words_[coset_[g]]; }
  std::vector<Integer> canonical(std::uint32_t g) const { return group_.canonical(word(g)); }

 private:
  std::size_t commutator_order_ = 0;
  std::vector<std::uint32_t> coset_;
  std::vector<SparseVec> words_;
  AbelianGroup group_;
};

// Map H_1(H) -> H_1(G) for a homomorphism given on elements, as a matrix from
// the generators of H to the generators of G.
ExactMatrix abelianization_map(const MatrixGroup& h, const Abelianization& target,
                               const std::function<std::uint32_t(std::uint32_t)>& hom);

}  // namespace gphom
