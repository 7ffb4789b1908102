#include "gphom/gpcomplex.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <random>

#include "gphom/errors.hpp"

namespace gphom {
namespace {

// Can v join `prefix` (length j) without breaking GP with subset size m?
bool extends(const VectorSpace& v, const ColumnTuple& prefix, unsigned j, std::uint32_t code,
             unsigned m) {
  if (m == 0) return true;
  if (m == 1) return code != 0;
  std::uint32_t buf[ColumnTuple::kMaxColumns + 1];
  if (j < m - 1) {
    for (unsigned t = 0; t < j; ++t) buf[t] = prefix.cols[t];
    buf[j] = code;
    return v.independent(buf, j + 1);
  }
  // every (m-1)-subset of the prefix together with v
  std::vector<unsigned> idx(m - 1);
  std::iota(idx.begin(), idx.end(), 0u);
  for (;;) {
    for (unsigned t = 0; t + 1 < m; ++t) buf[t] = prefix.cols[idx[t]];
    buf[m - 1] = code;
    if (!v.independent(buf, m)) return false;
    int t = static_cast<int>(m) - 2;
    while (t >= 0 && idx[t] == j - (m - 1) + static_cast<unsigned>(t)) --t;
    if (t < 0) break;
    ++idx[t];
    for (unsigned u = static_cast<unsigned>(t) + 1; u + 1 < m; ++u) idx[u] = idx[u - 1] + 1;
  }
  return true;
}

void for_each_generator(const VectorSpace& v, unsigned gp, unsigned k, bool unordered,
                        const std::function<void(const ColumnTuple&)>& fn) {
  unsigned m = std::min(gp, k);
  ColumnTuple cur;
  auto rec = [&](auto&& self) -> void {
    if (cur.k == k) {
      fn(cur);
      return;
    }
    std::uint32_t start = unordered && cur.k > 0 ? cur.cols[cur.k - 1] : 0;
    for (std::uint32_t c = start; c < v.size(); ++c) {
      if (!extends(v, cur, cur.k, c, m)) continue;
      cur.cols[cur.k++] = c;
      self(self);
      --cur.k;
    }
  };
  rec(rec);
}

bool has_repeat(const ColumnTuple& t) {
  for (unsigned a = 0; a < t.k; ++a)
    for (unsigned b = a + 1; b < t.k; ++b)
      if (t.cols[a] == t.cols[b]) return true;
  return false;
}

ExactMatrix reduce_torsion_rows(const ExactMatrix& m, const std::vector<char>& torsion) {
  std::vector<SparseVec> cols = m.columns();
  for (auto& col : cols) {
    SparseVec out;
    for (auto& [r, v] : col) {
      if (!torsion[r]) {
        out.emplace_back(r, v);
      } else if (v % 2 != 0) {
        out.emplace_back(r, Integer(1));
      }
    }
    col = std::move(out);
  }
  return ExactMatrix::from_columns(m.rows(), std::move(cols));
}

// A chain as an unsorted list of (tuple, coefficient) terms.
using Terms = std::vector<std::pair<ColumnTuple, long>>;

void collect(Terms& t) {
  std::sort(t.begin(), t.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  Terms out;
  for (auto& e : t) {
    if (!out.empty() && out.back().first == e.first) {
      out.back().second += e.second;
    } else {
      out.push_back(e);
    }
  }
  out.erase(std::remove_if(out.begin(), out.end(), [](const auto& e) { return e.second == 0; }),
            out.end());
  t = std::move(out);
}

Terms faces(const ColumnTuple& x, long coef) {
  Terms out;
  if (x.k == 0) return out;
  for (unsigned j = 0; j < x.k; ++j) out.emplace_back(x.without(j), (j % 2 ? -coef : coef));
  return out;
}

// Image in the unordered quotient; torsion coefficients reduced mod 2.
Terms project(const Terms& t) {
  Terms out;
  for (const auto& [x, c] : t) {
    ColumnTuple s = x;
    int sign = sort_columns(s);
    out.emplace_back(s, sign == 0 ? c : sign * c);
  }
  collect(out);
  for (auto& e : out)
    if (has_repeat(e.first)) e.second = ((e.second % 2) + 2) % 2;
  out.erase(std::remove_if(out.begin(), out.end(), [](const auto& e) { return e.second == 0; }),
            out.end());
  return out;
}

void mod2(Terms& t) {
  for (auto& e : t) e.second = ((e.second % 2) + 2) % 2;
  t.erase(std::remove_if(t.begin(), t.end(), [](const auto& e) { return e.second == 0; }), t.end());
}

}  // namespace

bool is_general_position(const VectorSpace& v, const ColumnTuple& x, unsigned i) {
  unsigned m = std::min<unsigned>(i, x.k);
  if (m == 0) return true;
  ColumnTuple prefix;
  for (unsigned j = 0; j < x.k; ++j) {
    if (!extends(v, prefix, j, x.cols[j], m)) return false;
    prefix.cols[j] = x.cols[j];
    prefix.k = static_cast<std::uint8_t>(j + 1);
  }
  return true;
}

bool is_general_position(const std::vector<FpVector>& columns, unsigned i) {
  if (columns.empty()) throw Error("is_general_position: no columns");
  if (columns.size() > ColumnTuple::kMaxColumns) throw Error("is_general_position: too many columns");
  VectorSpace v(columns[0].dimension(), columns[0].modulus());
  ColumnTuple t;
  for (const auto& c : columns) t = t.append(v.encode(c));
  return is_general_position(v, t, i);
}

int permutation_sign(const Permutation& sigma) {
  int sign = 1;
  std::vector<char> seen(sigma.size(), 0);
  for (std::size_t s = 0; s < sigma.size(); ++s) {
    if (seen[s]) continue;
    std::size_t len = 0;
    for (std::size_t j = s; !seen[j]; j = sigma[j]) {
      seen[j] = 1;
      ++len;
    }
    if (len % 2 == 0) sign = -sign;
  }
  return sign;
}

Permutation compose(const Permutation& a, const Permutation& b) {
  if (a.size() != b.size()) throw Error("compose: size mismatch");
  Permutation c(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) c[j] = b[a[j]];
  return c;
}

Permutation inverse(const Permutation& sigma) {
  Permutation inv(sigma.size());
  for (std::size_t j = 0; j < sigma.size(); ++j) inv[sigma[j]] = static_cast<unsigned>(j);
  return inv;
}

Permutation adjacent_transposition(unsigned k, unsigned j) {
  if (j + 1 >= k) throw Error("adjacent_transposition: index out of range");
  Permutation s(k);
  std::iota(s.begin(), s.end(), 0u);
  std::swap(s[j], s[j + 1]);
  return s;
}

std::vector<Permutation> all_permutations(unsigned k) {
  Permutation s(k);
  std::iota(s.begin(), s.end(), 0u);
  std::vector<Permutation> out;
  do out.push_back(s);
  while (std::next_permutation(s.begin(), s.end()));
  return out;
}

SignedTuple apply_permutation(const ColumnTuple& x, const Permutation& sigma) {
  if (sigma.size() != x.k) throw Error("apply_permutation: size mismatch");
  SignedTuple out{permutation_sign(sigma), x};
  // column j of the result is X_{sigma^-1(j)}, i.e. X_i moves to position sigma(i)
  for (unsigned i = 0; i < x.k; ++i) out.tuple.cols[sigma[i]] = x.cols[i];
  return out;
}

std::uint32_t ChainComplex::index_of(unsigned k, const ColumnTuple& t) const {
  const auto& b = bases.at(k);
  auto it = std::lower_bound(b.begin(), b.end(), t);
  if (it == b.end() || !(*it == t)) throw NotFound("generator not in degree " + std::to_string(k));
  return static_cast<std::uint32_t>(it - b.begin());
}

bool ChainComplex::contains(unsigned k, const ColumnTuple& t) const {
  if (k >= bases.size()) return false;
  return std::binary_search(bases[k].begin(), bases[k].end(), t);
}

bool ChainComplex::has_torsion() const {
  for (const auto& t : torsion)
    for (char c : t)
      if (c) return true;
  return false;
}

ExactMatrix ChainComplex::torsion_relations(unsigned k) const {
  MatrixBuilder b(rank(k), rank(k));
  std::size_t col = 0;
  for (std::size_t j = 0; j < rank(k); ++j)
    if (torsion[k][j]) b.add(j, col++, 2L);
  ExactMatrix m = std::move(b).build();
  return m.column_range(0, col);
}

HomologyResult ChainComplex::homology(unsigned k) const {
  if (k >= k_max) throw Error("homology: degree " + std::to_string(k) + " is at or beyond the truncation");
  if (!has_torsion()) return homology_at(d[k + 1], d[k]);
  ExactMatrix rel_out = k == 0 ? ExactMatrix(0, 0) : torsion_relations(k - 1);
  return module_homology(d[k + 1], d[k], torsion_relations(k), rel_out);
}

ChainComplex build_complex(unsigned n, unsigned p, unsigned gp_type, unsigned k_max, bool unordered) {
  if (k_max + 1 > ColumnTuple::kMaxColumns) throw Error("build_complex: k_max too large");
  ChainComplex c;
  c.n = n;
  c.p = p;
  c.gp_type = gp_type;
  c.k_max = k_max;
  c.unordered = unordered;
  VectorSpace v(n, p);
  c.bases.resize(k_max + 1);
  c.torsion.resize(k_max + 1);
  c.bases[0].push_back(ColumnTuple{});
  c.torsion[0].push_back(0);
  for (unsigned k = 1; k <= k_max; ++k) {
    auto& basis = c.bases[k];
    for_each_generator(v, gp_type, k, unordered, [&](const ColumnTuple& t) {
      if (basis.size() >= caps().max_basis)
        throw CapExceeded("basis of degree " + std::to_string(k) + " exceeds " +
                              std::to_string(caps().max_basis),
                          "degrees completed: " + std::to_string(k - 1));
      basis.push_back(t);
    });
    c.torsion[k].resize(basis.size(), 0);
    if (unordered)
      for (std::size_t j = 0; j < basis.size(); ++j) c.torsion[k][j] = has_repeat(basis[j]);
  }
  c.d.resize(k_max + 1);
  c.d[0] = ExactMatrix(0, 1);
  for (unsigned k = 1; k <= k_max; ++k) {
    MatrixBuilder b(c.rank(k - 1), c.rank(k));
    for (std::size_t j = 0; j < c.rank(k); ++j) {
      const auto& x = c.bases[k][j];
      for (unsigned f = 0; f < x.k; ++f) b.add(c.index_of(k - 1, x.without(f)), j, f % 2 ? -1L : 1L);
    }
    c.d[k] = reduce_torsion_rows(std::move(b).build(), c.torsion[k - 1]);
  }
  return c;
}

ChainComplex unordered_quotient(const ChainComplex& c) {
  if (c.unordered) return c;
  ChainComplex q;
  q.n = c.n;
  q.p = c.p;
  q.gp_type = c.gp_type;
  q.k_max = c.k_max;
  q.unordered = true;
  q.bases.resize(c.k_max + 1);
  q.torsion.resize(c.k_max + 1);
  for (unsigned k = 0; k <= c.k_max; ++k) {
    std::vector<ColumnTuple> reps;
    for (const auto& x : c.bases[k]) {
      ColumnTuple s = x;
      sort_columns(s);
      reps.push_back(s);
    }
    std::sort(reps.begin(), reps.end());
    reps.erase(std::unique(reps.begin(), reps.end()), reps.end());
    q.torsion[k].resize(reps.size());
    for (std::size_t j = 0; j < reps.size(); ++j) q.torsion[k][j] = has_repeat(reps[j]);
    q.bases[k] = std::move(reps);
  }
  q.d.resize(c.k_max + 1);
  q.d[0] = ExactMatrix(0, 1);
  for (unsigned k = 1; k <= c.k_max; ++k) {
    MatrixBuilder b(q.rank(k - 1), q.rank(k));
    for (std::size_t j = 0; j < q.rank(k); ++j) {
      const auto& x = q.bases[k][j];
      for (unsigned f = 0; f < x.k; ++f) b.add(q.index_of(k - 1, x.without(f)), j, f % 2 ? -1L : 1L);
    }
    q.d[k] = reduce_torsion_rows(std::move(b).build(), q.torsion[k - 1]);
  }
  return q;
}

ExactMatrix quotient_map(const ChainComplex& ordered, const ChainComplex& unordered, unsigned k) {
  MatrixBuilder b(unordered.rank(k), ordered.rank(k));
  for (std::size_t j = 0; j < ordered.rank(k); ++j) {
    ColumnTuple s = ordered.bases[k][j];
    int sign = sort_columns(s);
    b.add(unordered.index_of(k, s), j, static_cast<long>(sign == 0 ? 1 : sign));
  }
  return reduce_torsion_rows(std::move(b).build(), unordered.torsion[k]);
}

ExactMatrix permutation_matrix(const ChainComplex& c, unsigned k, const Permutation& sigma,
                               bool signed_action) {
  if (c.unordered) throw Error("permutation_matrix: complex is already unordered");
  MatrixBuilder b(c.rank(k), c.rank(k));
  for (std::size_t j = 0; j < c.rank(k); ++j) {
    SignedTuple y = apply_permutation(c.bases[k][j], sigma);
    b.add(c.index_of(k, y.tuple), j, static_cast<long>(signed_action ? y.sign : 1));
  }
  return std::move(b).build();
}

ExactMatrix group_action_matrix(const ChainComplex& c, unsigned k, const GroupElement& g) {
  if (g.n() != c.n || g.p() != c.p) throw FieldMismatch("group_action_matrix: wrong group");
  VectorSpace v(c.n, c.p);
  std::vector<std::uint32_t> table(v.size());
  for (std::uint32_t x = 0; x < v.size(); ++x) table[x] = g.apply(x);
  MatrixBuilder b(c.rank(k), c.rank(k));
  for (std::size_t j = 0; j < c.rank(k); ++j) {
    ColumnTuple y = c.bases[k][j];
    for (unsigned t = 0; t < y.k; ++t) y.cols[t] = table[y.cols[t]];
    int sign = 1;
    if (c.unordered) {
      sign = sort_columns(y);
      if (sign == 0) sign = 1;
    }
    b.add(c.index_of(k, y), j, static_cast<long>(sign));
  }
  return reduce_torsion_rows(std::move(b).build(), c.torsion[k]);
}

ConeResult cone_vector(const ChainComplex& c, unsigned k, const SparseVec& cycle) {
  if (k + 1 > c.k_max) throw Error("cone_vector: degree k+1 exceeds the truncation");
  if (c.has_torsion()) throw Unsupported("cone_vector: complexes with Z/2 summands");
  if (!c.d[k].apply(cycle).empty()) throw CompositionError("cone_vector: input is not a cycle");
  VectorSpace v(c.n, c.p);
  for (std::uint32_t a = 0; a < v.size(); ++a) {
    SparseVec cone;
    bool ok = true;
    for (const auto& [idx, coef] : cycle) {
      ColumnTuple t = c.bases[k][idx].prepend(a);
      int sign = 1;
      if (c.unordered) sign = sort_columns(t);
      if (sign == 0 || !c.contains(k + 1, t)) {
        ok = false;
        break;
      }
      cone.emplace_back(c.index_of(k + 1, t), sign * coef);
    }
    if (!ok) continue;
    sparse_normalize(cone);
    SparseVec back = c.d[k + 1].apply(cone);
    SparseVec want = cycle;
    sparse_normalize(want);
    if (back != want) throw Error("cone_vector: cone does not reproduce the cycle");
    return {a, cone};
  }
  throw NotFound("cone_vector: no vector in F_" + std::to_string(c.p) + "^" + std::to_string(c.n) +
                 " is in general position with the cycle");
}

std::vector<ColumnTuple> orbit_representatives(unsigned n, unsigned p, unsigned gp_type, unsigned k) {
  VectorSpace v(n, p);
  std::vector<ColumnTuple> out;
  unsigned rmax = std::min(n, k);
  for (unsigned r = 0; r <= rmax; ++r) {
    // pivot columns c_0 < ... < c_{r-1}
    std::vector<unsigned> piv(r);
    std::iota(piv.begin(), piv.end(), 0u);
    for (;;) {
      // free slots: (row t, column j) with j > piv[t], j not a pivot column
      std::vector<std::pair<unsigned, unsigned>> slots;
      std::vector<char> is_piv(k, 0);
      for (unsigned t = 0; t < r; ++t) is_piv[piv[t]] = 1;
      for (unsigned t = 0; t < r; ++t)
        for (unsigned j = piv[t] + 1; j < k; ++j)
          if (!is_piv[j]) slots.emplace_back(t, j);
      std::vector<unsigned> val(slots.size(), 0);
      for (;;) {
        std::vector<std::vector<unsigned>> colv(k, std::vector<unsigned>(n, 0));
        for (unsigned t = 0; t < r; ++t) colv[piv[t]][t] = 1;
        for (std::size_t s = 0; s < slots.size(); ++s) colv[slots[s].second][slots[s].first] = val[s];
        ColumnTuple x;
        for (unsigned j = 0; j < k; ++j) x = x.append(v.from_digits(colv[j]));
        if (is_general_position(v, x, gp_type)) {
          if (out.size() >= caps().max_basis) throw CapExceeded("orbit representatives");
          out.push_back(x);
        }
        std::size_t s = 0;
        while (s < val.size() && ++val[s] == p) val[s++] = 0;
        if (s == val.size()) break;
      }
      int t = static_cast<int>(r) - 1;
      while (t >= 0 && piv[t] == k - r + static_cast<unsigned>(t)) --t;
      if (t < 0) break;
      ++piv[t];
      for (unsigned u = static_cast<unsigned>(t) + 1; u < r; ++u) piv[u] = piv[u - 1] + 1;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

WellFormedness check_well_formed(unsigned n, unsigned p, unsigned gp_type, unsigned k_max,
                                 std::size_t exhaustive_limit) {
  WellFormedness w;
  w.n = n;
  w.p = p;
  w.gp_type = gp_type;
  w.k_max = k_max;
  VectorSpace v(n, p);

  auto fail = [&](bool& flag, const std::string& what) {
    if (flag && w.witness.empty()) w.witness = what;
    flag = false;
  };

  // Deterministic random invertible matrices for the GL/S_k compatibility check.
  std::mt19937 rng(n * 1000 + p * 10 + gp_type);
  std::vector<std::vector<std::uint32_t>> gtables;
  while (gtables.size() < 3) {
    ColumnTuple cols;
    for (unsigned j = 0; j < n; ++j) cols = cols.append(rng() % v.size());
    if (!v.independent(cols.cols.data(), n)) continue;
    GroupElement g(n, p, cols);
    std::vector<std::uint32_t> t(v.size());
    for (std::uint32_t x = 0; x < v.size(); ++x) t[x] = g.apply(x);
    gtables.push_back(std::move(t));
  }

  auto local = [&](const ColumnTuple& x) {
    ++w.generators_checked;
    unsigned k = x.k;
    std::string name = tuple_to_string(x, v);
    if (!is_general_position(v, x, gp_type)) fail(w.faces_closed, name + " is not a generator");
    for (unsigned j = gp_type; j < n; ++j)
      if (is_general_position(v, x, j + 1) && !is_general_position(v, x, j))
        fail(w.filtration, name + " in A^(" + std::to_string(j + 1) + ") but not A^(" +
                               std::to_string(j) + ")");
    Terms f = faces(x, 1);
    for (const auto& [y, c] : f)
      if (!is_general_position(v, y, gp_type)) fail(w.faces_closed, "face of " + name + " leaves the complex");
    Terms ff;
    for (const auto& [y, c] : f)
      for (auto& e : faces(y, c)) ff.push_back(e);
    collect(ff);
    if (k >= 2 && !ff.empty()) fail(w.boundary_squared_zero, "d d " + name + " != 0");

    Terms pd = project(f);
    // quotient differential on the sorted representative
    ColumnTuple s = x;
    int sign = sort_columns(s);
    Terms qd;
    for (auto& [y, c] : faces(s, sign == 0 ? 1 : sign)) qd.emplace_back(y, c);
    qd = project(qd);
    if (sign == 0) {
      // torsion source: only classes mod 2 can be compared
      mod2(pd);
      mod2(qd);
    }
    if (pd != qd) fail(w.permutation_equivariant, "quotient differential differs on " + name);
    for (unsigned j = 0; j + 1 < k; ++j) {
      SignedTuple y = apply_permutation(x, adjacent_transposition(k, j));
      Terms fy = project(faces(y.tuple, y.sign));
      if (sign == 0) mod2(fy);
      if (fy != pd) fail(w.permutation_equivariant, "d(x tau) != d(x) in the quotient for " + name);
      for (const auto& t : gtables) {
        ColumnTuple gx = x, gy = y.tuple;
        for (unsigned c = 0; c < k; ++c) {
          gx.cols[c] = t[gx.cols[c]];
          gy.cols[c] = t[gy.cols[c]];
        }
        if (!(apply_permutation(gx, adjacent_transposition(k, j)).tuple == gy))
          fail(w.group_commutes, "g(x tau) != (g x) tau for " + name);
      }
    }
    for (const auto& t : gtables) {
      ColumnTuple gx = x;
      for (unsigned c = 0; c < k; ++c) gx.cols[c] = t[gx.cols[c]];
      if (!is_general_position(v, gx, gp_type)) fail(w.group_commutes, "g " + name + " leaves the complex");
      Terms a = faces(gx, 1), b;
      for (auto& [y, c] : faces(x, 1)) {
        ColumnTuple gy = y;
        for (unsigned q = 0; q < gy.k; ++q) gy.cols[q] = t[gy.cols[q]];
        b.emplace_back(gy, c);
      }
      collect(a);
      collect(b);
      if (a != b) fail(w.group_commutes, "d(g x) != g d(x) for " + name);
    }
  };

  double total = 0;
  for (unsigned k = 1; k <= k_max; ++k) total += std::pow(static_cast<double>(v.size()), k);
  bool materialize = total <= 300000;
  if (materialize) {
    ChainComplex c = build_complex(n, p, gp_type, k_max);
    ChainComplex q = unordered_quotient(c);
    ChainComplex qd = build_complex(n, p, gp_type, k_max, true);
    if (!(q.bases == qd.bases)) fail(w.permutation_equivariant, "quotient basis differs from direct construction");
    for (unsigned k = 1; k <= k_max; ++k) {
      w.modes.push_back("matrices");
      for (const auto& x : c.bases[k]) local(x);
      if (k >= 2 && !(c.d[k - 1] * c.d[k]).is_zero())
        fail(w.boundary_squared_zero, "d_" + std::to_string(k - 1) + " d_" + std::to_string(k) + " != 0");
      if (k >= 2) {
        ExactMatrix prod = q.d[k - 1] * q.d[k];
        for (std::size_t col = 0; col < prod.cols(); ++col)
          for (const auto& [r, val] : prod.column(col))
            if (!q.torsion[k - 2][r] || val % 2 != 0)
              fail(w.boundary_squared_zero, "quotient d_" + std::to_string(k - 1) + " d_" + std::to_string(k) + " != 0");
      }
      ExactMatrix lhs = quotient_map(c, q, k - 1) * c.d[k];
      ExactMatrix rhs = q.d[k] * quotient_map(c, q, k);
      ExactMatrix diff = lhs - rhs;
      for (std::size_t col = 0; col < diff.cols(); ++col)
        for (const auto& [r, val] : diff.column(col))
          if (!q.torsion[k - 1][r] || val % 2 != 0)
            fail(w.permutation_equivariant, "projection does not commute with d_" + std::to_string(k));
    }
    return w;
  }
  for (unsigned k = 1; k <= k_max; ++k) {
    double count = std::pow(static_cast<double>(v.size()), k);
    if (count <= static_cast<double>(exhaustive_limit)) {
      w.modes.push_back("exhaustive");
      for_each_generator(v, gp_type, k, false, local);
    } else {
      w.modes.push_back("orbit-representatives");
      for (const auto& x : orbit_representatives(n, p, gp_type, k)) local(x);
    }
  }
  return w;
}

}  // namespace gphom
