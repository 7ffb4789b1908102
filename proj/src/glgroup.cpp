#include "gphom/glgroup.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

#include "gphom/errors.hpp"
#include "gphom/exactalg.hpp"

namespace gphom {
namespace {

std::vector<unsigned> code_digits(std::uint32_t code, unsigned n, unsigned p) {
  std::vector<unsigned> d(n);
  for (unsigned i = 0; i < n; ++i) {
    d[n - 1 - i] = code % p;
    code /= p;
  }
  return d;
}

std::uint32_t digits_code(const std::vector<unsigned>& d, unsigned p) {
  std::uint32_t c = 0;
  for (unsigned x : d) c = c * p + x;
  return c;
}

// Row-major entries.
std::vector<std::vector<unsigned>> entries(const GroupElement& g) {
  unsigned n = g.n();
  std::vector<std::vector<unsigned>> m(n, std::vector<unsigned>(n));
  for (unsigned c = 0; c < n; ++c) {
    auto d = code_digits(g.columns()[c], n, g.p());
    for (unsigned r = 0; r < n; ++r) m[r][c] = d[r];
  }
  return m;
}

}  // namespace

GroupElement::GroupElement(unsigned n, unsigned p, const ColumnTuple& columns)
    : n_(n), p_(p), cols_(columns) {
  if (columns.k != n) throw Error("GroupElement: need n columns");
}

GroupElement GroupElement::identity(unsigned n, unsigned p) {
  ColumnTuple t;
  t.k = static_cast<std::uint8_t>(n);
  std::uint32_t pw = 1;
  for (unsigned i = 0; i < n; ++i) {
    t.cols[n - 1 - i] = pw;
    pw *= p;
  }
  return GroupElement(n, p, t);
}

GroupElement GroupElement::from_rows(const std::vector<std::vector<long>>& rows, unsigned p) {
  if (!is_prime(p)) throw NotPrime(std::to_string(p) + " is not prime");
  unsigned n = static_cast<unsigned>(rows.size());
  if (n == 0 || n > ColumnTuple::kMaxColumns) throw Error("GroupElement: bad size");
  ColumnTuple t;
  t.k = static_cast<std::uint8_t>(n);
  for (unsigned c = 0; c < n; ++c) {
    std::vector<unsigned> d(n);
    for (unsigned r = 0; r < n; ++r) {
      if (rows[r].size() != n) throw Error("GroupElement: matrix must be square");
      d[r] = FieldElement(rows[r][c], p).value();
    }
    t.cols[c] = digits_code(d, p);
  }
  GroupElement g(n, p, t);
  if (g.det().is_zero()) throw NotAUnit("GroupElement: singular matrix");
  return g;
}

FieldElement GroupElement::entry(unsigned r, unsigned c) const {
  if (r >= n_ || c >= n_) throw Error("GroupElement::entry: index out of range");
  return FieldElement(static_cast<long>(code_digits(cols_[c], n_, p_)[r]), p_);
}

FieldElement GroupElement::det() const {
  auto m = entries(*this);
  unsigned d = 1;
  for (unsigned c = 0; c < n_; ++c) {
    unsigned piv = c;
    while (piv < n_ && m[piv][c] == 0) ++piv;
    if (piv == n_) return FieldElement(0, p_);
    if (piv != c) {
      std::swap(m[piv], m[c]);
      d = mod_sub(0, d, p_);
    }
    d = mod_mul(d, m[c][c], p_);
    unsigned inv = mod_inv(m[c][c], p_);
    for (unsigned r = c + 1; r < n_; ++r) {
      unsigned f = mod_mul(m[r][c], inv, p_);
      for (unsigned j = c; j < n_; ++j) m[r][j] = mod_sub(m[r][j], mod_mul(f, m[c][j], p_), p_);
    }
  }
  return FieldElement(static_cast<long>(d), p_);
}

std::uint32_t GroupElement::apply(std::uint32_t code) const {
  auto v = code_digits(code, n_, p_);
  std::vector<unsigned> out(n_, 0);
  for (unsigned j = 0; j < n_; ++j) {
    if (v[j] == 0) continue;
    auto col = code_digits(cols_[j], n_, p_);
    for (unsigned r = 0; r < n_; ++r) out[r] = mod_add(out[r], mod_mul(v[j], col[r], p_), p_);
  }
  return digits_code(out, p_);
}

FpVector GroupElement::apply(const FpVector& v) const {
  if (v.dimension() != n_) throw Error("GroupElement::apply: dimension mismatch");
  if (v.modulus() != p_) throw FieldMismatch("GroupElement::apply: modulus mismatch");
  std::vector<unsigned> d(n_);
  for (unsigned i = 0; i < n_; ++i) d[i] = v[i].value();
  auto out = code_digits(apply(digits_code(d, p_)), n_, p_);
  std::vector<long> vals(out.begin(), out.end());
  return FpVector::from_values(vals, p_);
}

GroupElement GroupElement::operator*(const GroupElement& o) const {
  if (o.n_ != n_) throw CompositionError("GroupElement: size mismatch");
  if (o.p_ != p_) throw FieldMismatch("GroupElement: modulus mismatch");
  ColumnTuple t;
  t.k = static_cast<std::uint8_t>(n_);
  for (unsigned c = 0; c < n_; ++c) t.cols[c] = apply(o.cols_[c]);
  return GroupElement(n_, p_, t);
}

GroupElement GroupElement::inverse() const {
  auto m = entries(*this);
  std::vector<std::vector<unsigned>> inv(n_, std::vector<unsigned>(n_, 0));
  for (unsigned i = 0; i < n_; ++i) inv[i][i] = 1;
  for (unsigned c = 0; c < n_; ++c) {
    unsigned piv = c;
    while (piv < n_ && m[piv][c] == 0) ++piv;
    if (piv == n_) throw NotAUnit("GroupElement: singular matrix");
    std::swap(m[piv], m[c]);
    std::swap(inv[piv], inv[c]);
    unsigned s = mod_inv(m[c][c], p_);
    for (unsigned j = 0; j < n_; ++j) {
      m[c][j] = mod_mul(m[c][j], s, p_);
      inv[c][j] = mod_mul(inv[c][j], s, p_);
    }
    for (unsigned r = 0; r < n_; ++r) {
      if (r == c || m[r][c] == 0) continue;
      unsigned f = m[r][c];
      for (unsigned j = 0; j < n_; ++j) {
        m[r][j] = mod_sub(m[r][j], mod_mul(f, m[c][j], p_), p_);
        inv[r][j] = mod_sub(inv[r][j], mod_mul(f, inv[c][j], p_), p_);
      }
    }
  }
  ColumnTuple t;
  t.k = static_cast<std::uint8_t>(n_);
  for (unsigned c = 0; c < n_; ++c) {
    std::vector<unsigned> d(n_);
    for (unsigned r = 0; r < n_; ++r) d[r] = inv[r][c];
    t.cols[c] = digits_code(d, p_);
  }
  return GroupElement(n_, p_, t);
}

std::string GroupElement::to_string() const {
  auto m = entries(*this);
  std::ostringstream os;
  os << '[';
  for (unsigned r = 0; r < n_; ++r) {
    if (r) os << ';';
    for (unsigned c = 0; c < n_; ++c) os << (c ? "," : "") << m[r][c];
  }
  os << ']';
  return os.str();
}

std::uint64_t gl_order(unsigned n, unsigned p) {
  std::uint64_t pn = 1;
  for (unsigned i = 0; i < n; ++i) pn *= p;
  std::uint64_t order = 1, pi = 1;
  for (unsigned i = 0; i < n; ++i) {
    order *= pn - pi;
    pi *= p;
  }
  return order;
}

GroupElement diagonal_d(unsigned i, const FieldElement& a, unsigned n) {
  if (a.is_zero()) throw NotAUnit("diagonal_d: entry must be a unit");
  if (i < 1 || i > n) throw Error("diagonal_d: index out of range");
  std::vector<std::vector<long>> rows(n, std::vector<long>(n, 0));
  for (unsigned r = 0; r < n; ++r) rows[r][r] = 1;
  rows[i - 1][i - 1] = a.value();
  return GroupElement::from_rows(rows, a.modulus());
}

MatrixGroup MatrixGroup::general_linear(unsigned n, unsigned p) {
  if (!is_prime(p)) throw NotPrime(std::to_string(p) + " is not prime");
  if (n == 0 || n > ColumnTuple::kMaxColumns) throw Error("general_linear: unsupported n");
  std::uint64_t order = gl_order(n, p);
  if (order > caps().max_group_order)
    throw CapExceeded("|GL_" + std::to_string(n) + "(F_" + std::to_string(p) +
                          ")| = " + std::to_string(order),
                      "group order cap " + std::to_string(caps().max_group_order));
  MatrixGroup g;
  g.name_ = "GL_" + std::to_string(n) + "(F_" + std::to_string(p) + ")";
  g.n_ = n;
  g.p_ = p;
  g.space_ = std::make_shared<VectorSpace>(n, p);
  g.elements_.reserve(order);
  ColumnTuple cur;
  auto rec = [&](auto&& self) -> void {
    if (cur.k == n) {
      g.elements_.emplace_back(n, p, cur);
      return;
    }
    for (std::uint32_t v = 1; v < g.space_->size(); ++v) {
      cur.cols[cur.k] = v;
      if (!g.space_->independent(cur.cols.data(), cur.k + 1u)) continue;
      ++cur.k;
      self(self);
      --cur.k;
    }
  };
  rec(rec);
  if (g.elements_.size() != order) throw Error("general_linear: enumeration count mismatch");
  g.finish();
  return g;
}

MatrixGroup MatrixGroup::from_elements(std::vector<GroupElement> elements, std::string name) {
  if (elements.empty()) throw ActionClosureError("from_elements: empty element list");
  MatrixGroup g;
  g.name_ = std::move(name);
  g.n_ = elements[0].n();
  g.p_ = elements[0].p();
  if (elements.size() > caps().max_group_order)
    throw CapExceeded("group of order " + std::to_string(elements.size()));
  g.space_ = std::make_shared<VectorSpace>(g.n_, g.p_);
  std::sort(elements.begin(), elements.end(),
            [](const GroupElement& a, const GroupElement& b) { return a.columns() < b.columns(); });
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  g.elements_ = std::move(elements);
  if (!g.contains(GroupElement::identity(g.n_, g.p_)))
    throw ActionClosureError("from_elements: identity missing");
  g.finish();
  return g;
}

void MatrixGroup::finish() {
  identity_ = index_of(GroupElement::identity(n_, p_));
  std::size_t order = elements_.size(), vs = space_->size();
  action_.resize(order * vs);
  for (std::size_t i = 0; i < order; ++i) {
    const auto& cols = elements_[i].columns();
    for (std::uint32_t v = 0; v < vs; ++v) {
      std::uint32_t acc = 0;
      std::uint32_t rest = v;
      for (unsigned j = n_; j-- > 0;) {
        unsigned d = rest % p_;
        rest /= p_;
        if (d) acc = space_->add(acc, space_->scale(d, cols[j]));
      }
      action_[i * vs + v] = acc;
    }
  }
  auto product = [&](std::uint32_t a, std::uint32_t b) -> std::uint32_t {
    ColumnTuple t;
    t.k = static_cast<std::uint8_t>(n_);
    for (unsigned c = 0; c < n_; ++c) t.cols[c] = act(a, elements_[b].columns()[c]);
    auto it = std::lower_bound(elements_.begin(), elements_.end(), t,
                               [](const GroupElement& e, const ColumnTuple& x) { return e.columns() < x; });
    if (it == elements_.end() || !(it->columns() == t))
      throw ActionClosureError(name_ + ": not closed under multiplication");
    return static_cast<std::uint32_t>(it - elements_.begin());
  };
  if (order <= 2048) {
    table_.resize(order * order);
    for (std::uint32_t a = 0; a < order; ++a)
      for (std::uint32_t b = 0; b < order; ++b) table_[a * order + b] = product(a, b);
  }
  inverse_.resize(order);
  for (std::uint32_t a = 0; a < order; ++a) {
    auto inv = elements_[a].inverse();
    if (!contains(inv)) throw ActionClosureError(name_ + ": not closed under inverses");
    inverse_[a] = index_of(inv);
  }
  std::vector<char> in(order, 0);
  std::vector<std::uint32_t> members{identity_};
  in[identity_] = 1;
  for (std::uint32_t cand = 0; cand < order && members.size() < order; ++cand) {
    if (in[cand]) continue;
    generators_.push_back(cand);
    std::vector<std::uint32_t> queue = members;
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      for (auto s : generators_) {
        std::uint32_t y = multiply(s, queue[qi]);
        if (!in[y]) {
          in[y] = 1;
          members.push_back(y);
          queue.push_back(y);
        }
      }
    }
  }
}

bool MatrixGroup::contains(const GroupElement& g) const {
  if (g.n() != n_ || g.p() != p_) return false;
  return std::binary_search(elements_.begin(), elements_.end(), g,
                            [](const GroupElement& a, const GroupElement& b) {
                              return a.columns() < b.columns();
                            });
}

std::uint32_t MatrixGroup::index_of(const GroupElement& g) const {
  auto it = std::lower_bound(elements_.begin(), elements_.end(), g,
                             [](const GroupElement& a, const GroupElement& b) {
                               return a.columns() < b.columns();
                             });
  if (it == elements_.end() || !(*it == g)) throw NotFound(g.to_string() + " not in " + name_);
  return static_cast<std::uint32_t>(it - elements_.begin());
}

std::uint32_t MatrixGroup::multiply(std::uint32_t a, std::uint32_t b) const {
  std::size_t order = elements_.size();
  if (!table_.empty()) return table_[a * order + b];
  ColumnTuple t;
  t.k = static_cast<std::uint8_t>(n_);
  for (unsigned c = 0; c < n_; ++c) t.cols[c] = act(a, elements_[b].columns()[c]);
  auto it = std::lower_bound(elements_.begin(), elements_.end(), t,
                             [](const GroupElement& e, const ColumnTuple& x) { return e.columns() < x; });
  if (it == elements_.end() || !(it->columns() == t))
    throw ActionClosureError(name_ + ": not closed under multiplication");
  return static_cast<std::uint32_t>(it - elements_.begin());
}

MatrixGroup MatrixGroup::subgroup(const std::function<bool(const GroupElement&)>& pred,
                                  std::string name) const {
  std::vector<GroupElement> els;
  for (const auto& g : elements_)
    if (pred(g)) els.push_back(g);
  return from_elements(std::move(els), std::move(name));
}

MatrixGroup stabilizer_of_e1(const MatrixGroup& g) {
  std::uint32_t e1 = g.space().basis(1);
  return g.subgroup([e1](const GroupElement& x) { return x.columns()[0] == e1; },
                    "Stab_" + g.name() + "(e_1)");
}

bool is_affine(const MatrixGroup& h, unsigned a, unsigned b) {
  if (a + b != h.n()) return false;
  const VectorSpace& v = h.space();
  for (const auto& g : h.elements())
    for (unsigned c = 0; c < a; ++c)
      if (g.columns()[c] != v.basis(c + 1)) return false;
  std::uint64_t expect = gl_order(b, h.p());
  for (unsigned i = 0; i < a * b; ++i) expect *= h.p();
  return h.order() == expect;
}

int sort_columns(ColumnTuple& t) {
  int sign = 1;
  for (unsigned i = 1; i < t.k; ++i) {
    for (unsigned j = i; j > 0 && t.cols[j - 1] > t.cols[j]; --j) {
      std::swap(t.cols[j - 1], t.cols[j]);
      sign = -sign;
    }
  }
  for (unsigned i = 1; i < t.k; ++i)
    if (t.cols[i - 1] == t.cols[i]) return 0;
  return sign;
}

OrbitDecomposition orbit_decompose(std::size_t basis_size, const MatrixGroup& g,
                                   const SignedAction& act) {
  constexpr std::uint32_t unset = UINT32_MAX;
  OrbitDecomposition d;
  d.orbit_of.assign(basis_size, unset);
  d.transporter.assign(basis_size, g.identity_index());
  d.transporter_sign.assign(basis_size, 1);
  for (std::uint32_t x0 = 0; x0 < basis_size; ++x0) {
    if (d.orbit_of[x0] != unset) continue;
    auto id = static_cast<std::uint32_t>(d.orbits.size());
    Orbit o;
    o.representative = x0;
    d.orbit_of[x0] = id;
    std::vector<std::uint32_t> queue{x0};
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      std::uint32_t x = queue[qi];
      for (auto s : g.generators()) {
        SignedIndex r = act(s, x);
        if (r.index >= basis_size) throw ActionClosureError("orbit_decompose: image leaves the basis");
        if (d.orbit_of[r.index] != unset) continue;
        d.orbit_of[r.index] = id;
        d.transporter[r.index] = g.multiply(s, d.transporter[x]);
        d.transporter_sign[r.index] = d.transporter_sign[x] * r.sign;
        queue.push_back(r.index);
      }
    }
    o.size = queue.size();
    for (std::uint32_t e = 0; e < g.order(); ++e) {
      SignedIndex r = act(e, x0);
      if (r.index != x0) continue;
      o.stabilizer.push_back(e);
      if (r.sign < 0) o.sign_twist = true;
    }
    if (o.size * o.stabilizer.size() != g.order())
      throw ActionClosureError("orbit_decompose: orbit-stabilizer identity fails; not a group action");
    d.orbits.push_back(std::move(o));
  }
  return d;
}

OrbitDecomposition orbit_decompose(const std::vector<ColumnTuple>& basis, const MatrixGroup& g,
                                   bool unordered) {
  std::unordered_map<ColumnTuple, std::uint32_t, ColumnTupleHash> index;
  index.reserve(basis.size() * 2);
  for (std::uint32_t i = 0; i < basis.size(); ++i) index.emplace(basis[i], i);
  auto act = [&](std::uint32_t e, std::uint32_t x) -> SignedIndex {
    ColumnTuple t = basis[x];
    for (unsigned c = 0; c < t.k; ++c) t.cols[c] = g.act(e, t.cols[c]);
    int sign = 1;
    if (unordered) {
      sign = sort_columns(t);
      if (sign == 0) sign = 1;
    }
    auto it = index.find(t);
    if (it == index.end()) throw ActionClosureError("orbit_decompose: image leaves the basis");
    return {it->second, sign};
  };
  return orbit_decompose(basis.size(), g, act);
}

}  // namespace gphom
