#pragma once

// Prime fields F_p, vectors in F_p^n, and tuples of column vectors.

#include <array>
#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace gphom {

bool is_prime(std::uint64_t p);

class FieldElement {
 public:
  // Throws NotPrime if p is not prime. `value` is reduced mod p.
  FieldElement(long value, unsigned p);

  unsigned value() const { return value_; }
  unsigned modulus() const { return p_; }
  bool is_zero() const { return value_ == 0; }

  FieldElement operator+(const FieldElement& o) const;
  FieldElement operator-(const FieldElement& o) const;
  FieldElement operator*(const FieldElement& o) const;
  FieldElement operator/(const FieldElement& o) const;
  FieldElement operator-() const;
  // Throws DivisionByZero on 0.
  FieldElement inv() const;
  FieldElement pow(unsigned long e) const;

  friend bool operator==(const FieldElement& a, const FieldElement& b) = default;

 private:
  FieldElement(unsigned value, unsigned p, bool) : value_(value), p_(p) {}
  void check(const FieldElement& o) const;

  unsigned value_;
  unsigned p_;
};

// Units of F_p in ascending order.
std::vector<FieldElement> enumerate_units(unsigned p);

// Modular helpers on raw residues, used by the hot loops.
inline unsigned mod_add(unsigned a, unsigned b, unsigned p) { return (a + b) % p; }
inline unsigned mod_sub(unsigned a, unsigned b, unsigned p) { return (a + p - b) % p; }
inline unsigned mod_mul(unsigned a, unsigned b, unsigned p) { return (a * b) % p; }
unsigned mod_inv(unsigned a, unsigned p);

class FpVector {
 public:
  FpVector(std::vector<FieldElement> coords);
  static FpVector zero(unsigned n, unsigned p);
  // e_i, 1-based.
  static FpVector basis(unsigned i, unsigned n, unsigned p);
  static FpVector from_values(const std::vector<long>& values, unsigned p);

  unsigned dimension() const { return static_cast<unsigned>(coords_.size()); }
  unsigned modulus() const { return p_; }
  const FieldElement& operator[](unsigned i) const { return coords_.at(i); }
  const std::vector<FieldElement>& coords() const { return coords_; }
  bool is_zero() const;

  FpVector operator+(const FpVector& o) const;
  FpVector operator-(const FpVector& o) const;
  FpVector scaled(const FieldElement& a) const;

  std::string to_string() const;
  friend bool operator==(const FpVector& a, const FpVector& b) = default;

 private:
  std::vector<FieldElement> coords_;
  unsigned p_;
};

// F_p^n with vectors encoded as integers in base p, coordinate 0 most
// significant, so that code order is lexicographic order of coordinates.
class VectorSpace {
 public:
  VectorSpace(unsigned n, unsigned p);

  unsigned n() const { return n_; }
  unsigned p() const { return p_; }
  std::uint32_t size() const { return size_; }

  std::uint32_t encode(const FpVector& v) const;
  FpVector decode(std::uint32_t code) const;
  std::vector<unsigned> digits(std::uint32_t code) const;
  std::uint32_t from_digits(const std::vector<unsigned>& d) const;
  // e_i, 1-based.
  std::uint32_t basis(unsigned i) const;

  std::uint32_t add(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t scale(unsigned c, std::uint32_t a) const;

  // Rank over F_p of a list of encoded vectors.
  unsigned rank(const std::uint32_t* codes, unsigned count) const;
  bool independent(const std::uint32_t* codes, unsigned count) const;

 private:
  unsigned n_, p_;
  std::uint32_t size_;
  std::vector<std::uint32_t> pow_;
  std::vector<std::uint32_t> add_table_;  // present when size_ is small
};

// An ordered tuple of at most kMaxColumns encoded column vectors. Comparison
// is lexicographic on the codes, i.e. on the column-major flattening.
struct ColumnTuple {
  static constexpr unsigned kMaxColumns = 8;
  std::uint8_t k = 0;
  std::array<std::uint32_t, kMaxColumns> cols{};

  std::uint32_t operator[](unsigned i) const { return cols[i]; }
  std::uint32_t& operator[](unsigned i) { return cols[i]; }
  unsigned size() const { return k; }

  ColumnTuple without(unsigned j) const;
  ColumnTuple prepend(std::uint32_t v) const;
  ColumnTuple append(std::uint32_t v) const;

  friend bool operator==(const ColumnTuple& a, const ColumnTuple& b);
  friend std::strong_ordering operator<=>(const ColumnTuple& a, const ColumnTuple& b);
};

struct ColumnTupleHash {
  std::size_t operator()(const ColumnTuple& t) const;
};

std::string tuple_to_string(const ColumnTuple& t, const VectorSpace& v);

}  // namespace gphom
