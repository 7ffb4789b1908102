#pragma once

// GL_n(F_p), its subgroups, and orbit/stabilizer machinery for signed
// permutation actions.

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "gphom/field.hpp"

namespace gphom {

// Invertible n x n matrix over F_p, stored by its columns (the images of e_j).
class GroupElement {
 public:
  GroupElement(unsigned n, unsigned p, const ColumnTuple& columns);
  static GroupElement identity(unsigned n, unsigned p);
  // Throws NotAUnit if the matrix is singular.
  static GroupElement from_rows(const std::vector<std::vector<long>>& rows, unsigned p);

  unsigned n() const { return n_; }
  unsigned p() const { return p_; }
  const ColumnTuple& columns() const { return cols_; }
  // 0-based row and column.
  FieldElement entry(unsigned r, unsigned c) const;
  FieldElement det() const;

  std::uint32_t apply(std::uint32_t code) const;
  FpVector apply(const FpVector& v) const;
  GroupElement operator*(const GroupElement& o) const;
  GroupElement inverse() const;

  std::string to_string() const;
  friend bool operator==(const GroupElement& a, const GroupElement& b) {
    return a.n_ == b.n_ && a.p_ == b.p_ && a.cols_ == b.cols_;
  }

 private:
  unsigned n_, p_;
  ColumnTuple cols_;
};

std::uint64_t gl_order(unsigned n, unsigned p);

// D_i(a): diagonal with a in slot i (1-based), 1 elsewhere.
GroupElement diagonal_d(unsigned i, const FieldElement& a, unsigned n);

// A finite group of n x n matrices held as a sorted element list.
class MatrixGroup {
 public:
  // Throws CapExceeded above caps().max_group_order.
  static MatrixGroup general_linear(unsigned n, unsigned p);
  // Throws ActionClosureError unless the list is closed under products and
  // contains the identity.
  static MatrixGroup from_elements(std::vector<GroupElement> elements, std::string name);

  const std::string& name() const { return name_; }
  unsigned n() const { return n_; }
  unsigned p() const { return p_; }
  std::size_t order() const { return elements_.size(); }
  const GroupElement& element(std::size_t i) const { return elements_[i]; }
  const std::vector<GroupElement>& elements() const { return elements_; }
  const VectorSpace& space() const { return *space_; }

  bool contains(const GroupElement& g) const;
  // Throws NotFound.
  std::uint32_t index_of(const GroupElement& g) const;
  std::uint32_t identity_index() const { return identity_; }
  std::uint32_t multiply(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t inverse(std::uint32_t a) const { return inverse_[a]; }
  // g . v on encoded vectors.
  std::uint32_t act(std::uint32_t g, std::uint32_t v) const {
    return action_[static_cast<std::size_t>(g) * space_->size() + v];
  }

  MatrixGroup subgroup(const std::function<bool(const GroupElement&)>& pred,
                       std::string name) const;
  // Deterministic small generating set (greedy over the element order).
  const std::vector<std::uint32_t>& generators() const { return generators_; }

 private:
  MatrixGroup() = default;
  void finish();

  std::string name_;
  unsigned n_ = 0, p_ = 0;
  std::vector<GroupElement> elements_;
  std::shared_ptr<VectorSpace> space_;
  std::vector<std::uint32_t> action_;
  std::vector<std::uint32_t> inverse_;
  std::vector<std::uint32_t> table_;  // multiplication table for small groups
  std::vector<std::uint32_t> generators_;
  std::uint32_t identity_ = 0;
};

MatrixGroup stabilizer_of_e1(const MatrixGroup& g);
// True iff h equals Aff_{a,b}: top-left a x a identity, bottom-left zero.
bool is_affine(const MatrixGroup& h, unsigned a, unsigned b);

struct SignedIndex {
  std::uint32_t index;
  int sign;  // +1 or -1
};

// Action of group element g (by index) on basis element x.
using SignedAction = std::function<SignedIndex(std::uint32_t g, std::uint32_t x)>;

struct Orbit {
  std::uint32_t representative;
  std::vector<std::uint32_t> stabilizer;  // group element indices, sorted
  std::size_t size = 0;
  bool sign_twist = false;  // some stabilizer element acts by -1
};

struct OrbitDecomposition {
  std::vector<Orbit> orbits;
  std::vector<std::uint32_t> orbit_of;
  // transporter[x] . representative = transporter_sign[x] * x
  std::vector<std::uint32_t> transporter;
  std::vector<int> transporter_sign;
};

OrbitDecomposition orbit_decompose(std::size_t basis_size, const MatrixGroup& g,
                                   const SignedAction& act);

// The group acting columnwise on tuples; with `unordered` the image is
// re-sorted and carries the sign of the sorting permutation.
// Throws ActionClosureError if an image leaves the basis.
OrbitDecomposition orbit_decompose(const std::vector<ColumnTuple>& basis, const MatrixGroup& g,
                                   bool unordered);

// Sorts columns ascending; returns the sign of the sorting permutation, or 0
// if two columns coincide.
int sort_columns(ColumnTuple& t);

}  // namespace gphom
