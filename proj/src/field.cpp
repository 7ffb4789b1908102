#include "gphom/field.hpp"

#include <sstream>

#include "gphom/errors.hpp"

namespace gphom {

bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

unsigned mod_inv(unsigned a, unsigned p) {
  a %= p;
  if (a == 0) throw DivisionByZero("inverse of 0 in F_" + std::to_string(p));
  long t = 0, nt = 1, r = p, nr = a;
  while (nr != 0) {
    long q = r / nr;
    long tmp = t - q * nt;
    t = nt;
    nt = tmp;
    tmp = r - q * nr;
    r = nr;
    nr = tmp;
  }
  if (t < 0) t += p;
  return static_cast<unsigned>(t);
}

FieldElement::FieldElement(long value, unsigned p) : p_(p) {
  if (!is_prime(p)) throw NotPrime(std::to_string(p) + " is not prime");
  long v = value % static_cast<long>(p);
  if (v < 0) v += p;
  value_ = static_cast<unsigned>(v);
}

void FieldElement::check(const FieldElement& o) const {
  if (o.p_ != p_)
    throw FieldMismatch("F_" + std::to_string(p_) + " vs F_" + std::to_string(o.p_));
}

FieldElement FieldElement::operator+(const FieldElement& o) const {
  check(o);
  return {mod_add(value_, o.value_, p_), p_, true};
}

FieldElement FieldElement::operator-(const FieldElement& o) const {
  check(o);
  return {mod_sub(value_, o.value_, p_), p_, true};
}

FieldElement FieldElement::operator*(const FieldElement& o) const {
  check(o);
  return {mod_mul(value_, o.value_, p_), p_, true};
}

FieldElement FieldElement::operator/(const FieldElement& o) const {
  check(o);
  return *this * o.inv();
}

FieldElement FieldElement::operator-() const { return {mod_sub(0, value_, p_), p_, true}; }

FieldElement FieldElement::inv() const { return {mod_inv(value_, p_), p_, true}; }

FieldElement FieldElement::pow(unsigned long e) const {
  FieldElement r(1u, p_, true), b = *this;
  while (e) {
    if (e & 1) r = r * b;
    b = b * b;
    e >>= 1;
  }
  return r;
}

std::vector<FieldElement> enumerate_units(unsigned p) {
  if (!is_prime(p)) throw NotPrime(std::to_string(p) + " is not prime");
  std::vector<FieldElement> out;
  for (unsigned a = 1; a < p; ++a) out.emplace_back(static_cast<long>(a), p);
  return out;
}

FpVector::FpVector(std::vector<FieldElement> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw Error("FpVector: empty coordinate list");
  p_ = coords_[0].modulus();
  for (const auto& c : coords_)
    if (c.modulus() != p_) throw FieldMismatch("FpVector: mixed moduli");
}

FpVector FpVector::zero(unsigned n, unsigned p) {
  return FpVector(std::vector<FieldElement>(n, FieldElement(0, p)));
}

FpVector FpVector::basis(unsigned i, unsigned n, unsigned p) {
  if (i < 1 || i > n) throw Error("FpVector::basis: index out of range");
  std::vector<FieldElement> c(n, FieldElement(0, p));
  c[i - 1] = FieldElement(1, p);
  return FpVector(std::move(c));
}

FpVector FpVector::from_values(const std::vector<long>& values, unsigned p) {
  std::vector<FieldElement> c;
  for (long v : values) c.emplace_back(v, p);
  return FpVector(std::move(c));
}

bool FpVector::is_zero() const {
  for (const auto& c : coords_)
    if (!c.is_zero()) return false;
  return true;
}

FpVector FpVector::operator+(const FpVector& o) const {
  if (o.dimension() != dimension()) throw Error("FpVector: dimension mismatch");
  std::vector<FieldElement> c;
  for (unsigned i = 0; i < dimension(); ++i) c.push_back(coords_[i] + o.coords_[i]);
  return FpVector(std::move(c));
}

FpVector FpVector::operator-(const FpVector& o) const { return *this + o.scaled(FieldElement(-1, p_)); }

FpVector FpVector::scaled(const FieldElement& a) const {
  std::vector<FieldElement> c;
  for (const auto& x : coords_) c.push_back(a * x);
  return FpVector(std::move(c));
}

std::string FpVector::to_string() const {
  std::ostringstream os;
  os << '(';
  for (unsigned i = 0; i < dimension(); ++i) os << (i ? "," : "") << coords_[i].value();
  os << ')';
  return os.str();
}

VectorSpace::VectorSpace(unsigned n, unsigned p) : n_(n), p_(p) {
  if (!is_prime(p)) throw NotPrime(std::to_string(p) + " is not prime");
  if (n == 0) throw Error("VectorSpace: dimension must be positive");
  std::uint64_t s = 1;
  pow_.assign(n, 0);
  for (unsigned i = 0; i < n; ++i) {
    pow_[n - 1 - i] = static_cast<std::uint32_t>(s);
    s *= p;
    if (s > (1u << 24)) throw Error("VectorSpace: p^n too large");
  }
  size_ = static_cast<std::uint32_t>(s);
  if (size_ <= 1024) {
    add_table_.resize(static_cast<std::size_t>(size_) * size_);
    for (std::uint32_t a = 0; a < size_; ++a) {
      auto da = digits(a);
      for (std::uint32_t b = 0; b < size_; ++b) {
        auto db = digits(b);
        for (unsigned i = 0; i < n_; ++i) db[i] = mod_add(da[i], db[i], p_);
        add_table_[static_cast<std::size_t>(a) * size_ + b] = from_digits(db);
      }
    }
  }
}

std::vector<unsigned> VectorSpace::digits(std::uint32_t code) const {
  std::vector<unsigned> d(n_);
  for (unsigned i = 0; i < n_; ++i) {
    d[n_ - 1 - i] = code % p_;
    code /= p_;
  }
  return d;
}

std::uint32_t VectorSpace::from_digits(const std::vector<unsigned>& d) const {
  std::uint32_t c = 0;
  for (unsigned i = 0; i < n_; ++i) c = c * p_ + d[i];
  return c;
}

std::uint32_t VectorSpace::encode(const FpVector& v) const {
  if (v.dimension() != n_) throw Error("VectorSpace::encode: dimension mismatch");
  if (v.modulus() != p_) throw FieldMismatch("VectorSpace::encode: modulus mismatch");
  std::vector<unsigned> d(n_);
  for (unsigned i = 0; i < n_; ++i) d[i] = v[i].value();
  return from_digits(d);
}

FpVector VectorSpace::decode(std::uint32_t code) const {
  std::vector<FieldElement> c;
  for (unsigned x : digits(code)) c.emplace_back(static_cast<long>(x), p_);
  return FpVector(std::move(c));
}

std::uint32_t VectorSpace::basis(unsigned i) const {
  if (i < 1 || i > n_) throw Error("VectorSpace::basis: index out of range");
  return pow_[i - 1];
}

std::uint32_t VectorSpace::add(std::uint32_t a, std::uint32_t b) const {
  if (!add_table_.empty()) return add_table_[static_cast<std::size_t>(a) * size_ + b];
  std::uint32_t c = 0;
  for (unsigned i = 0; i < n_; ++i) {
    unsigned x = (a / pow_[i]) % p_, y = (b / pow_[i]) % p_;
    c += mod_add(x, y, p_) * pow_[i];
  }
  return c;
}

std::uint32_t VectorSpace::scale(unsigned s, std::uint32_t a) const {
  s %= p_;
  std::uint32_t c = 0;
  for (unsigned i = 0; i < n_; ++i) c += mod_mul((a / pow_[i]) % p_, s, p_) * pow_[i];
  return c;
}

std::uint32_t VectorSpace::sub(std::uint32_t a, std::uint32_t b) const {
  return add(a, scale(p_ - 1, b));
}

unsigned VectorSpace::rank(const std::uint32_t* codes, unsigned count) const {
  std::vector<std::vector<unsigned>> rows;
  for (unsigned i = 0; i < count; ++i) rows.push_back(digits(codes[i]));
  unsigned r = 0;
  for (unsigned col = 0; col < n_ && r < rows.size(); ++col) {
    unsigned piv = r;
    while (piv < rows.size() && rows[piv][col] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[r]);
    unsigned inv = mod_inv(rows[r][col], p_);
    for (unsigned i = r + 1; i < rows.size(); ++i) {
      unsigned f = mod_mul(rows[i][col], inv, p_);
      if (f == 0) continue;
      for (unsigned j = col; j < n_; ++j)
        rows[i][j] = mod_sub(rows[i][j], mod_mul(f, rows[r][j], p_), p_);
    }
    ++r;
  }
  return r;
}

bool VectorSpace::independent(const std::uint32_t* codes, unsigned count) const {
  if (count > n_) return false;
  return rank(codes, count) == count;
}

ColumnTuple ColumnTuple::without(unsigned j) const {
  ColumnTuple t;
  for (unsigned i = 0; i < k; ++i)
    if (i != j) t.cols[t.k++] = cols[i];
  return t;
}

ColumnTuple ColumnTuple::prepend(std::uint32_t v) const {
  if (k >= kMaxColumns) throw Error("ColumnTuple: too many columns");
  ColumnTuple t;
  t.k = static_cast<std::uint8_t>(k + 1);
  t.cols[0] = v;
  for (unsigned i = 0; i < k; ++i) t.cols[i + 1] = cols[i];
  return t;
}

ColumnTuple ColumnTuple::append(std::uint32_t v) const {
  if (k >= kMaxColumns) throw Error("ColumnTuple: too many columns");
  ColumnTuple t = *this;
  t.cols[t.k++] = v;
  return t;
}

bool operator==(const ColumnTuple& a, const ColumnTuple& b) {
  if (a.k != b.k) return false;
  for (unsigned i = 0; i < a.k; ++i)
    if (a.cols[i] != b.cols[i]) return false;
  return true;
}

std::strong_ordering operator<=>(const ColumnTuple& a, const ColumnTuple& b) {
  for (unsigned i = 0; i < a.k && i < b.k; ++i)
    if (auto c = a.cols[i] <=> b.cols[i]; c != 0) return c;
  return a.k <=> b.k;
}

std::size_t ColumnTupleHash::operator()(const ColumnTuple& t) const {
  std::uint64_t h = 1469598103934665603ull ^ t.k;
  for (unsigned i = 0; i < t.k; ++i) {
    h ^= t.cols[i];
    h *= 1099511628211ull;
  }
  return static_cast<std::size_t>(h ^ (h >> 29));
}

std::string tuple_to_string(const ColumnTuple& t, const VectorSpace& v) {
  std::string s = "[";
  for (unsigned i = 0; i < t.k; ++i) {
    if (i) s += ",";
    s += v.decode(t.cols[i]).to_string();
  }
  return s + "]";
}

}  // namespace gphom
