#include <algorithm>
#include <climits>
#include <cstdint>
#include <cstdlib>
#include <queue>
#include <string>

#include "gphom/errors.hpp"
#include "gphom/exactalg.hpp"

namespace gphom {
namespace {

// Thrown by the machine-word engine; the caller restarts with GMP integers.
struct Overflow {};

inline bool is_unit(std::int64_t v) { return v == 1 || v == -1; }
inline bool is_unit(const Integer& v) { return v == 1 || v == -1; }

inline std::int64_t addmul(std::int64_t a, std::int64_t q, std::int64_t b) {
  std::int64_t p = 0, s = 0;
  if (__builtin_mul_overflow(q, b, &p) || __builtin_add_overflow(a, p, &s) || s == INT64_MIN)
    throw Overflow{};
  return s;
}

inline Integer addmul(const Integer& a, const Integer& q, const Integer& b) {
  Integer s = a + q * b;
  if (mpz_sizeinbase(s.get_mpz_t(), 2) > caps().max_entry_bits)
    throw CapExceeded("Smith normal form entry exceeds " + std::to_string(caps().max_entry_bits) +
                      " bits");
  return s;
}

template <class T>
inline T mul(const T& a, const T& b) {
  return addmul(T(0), a, b);
}

inline std::int64_t neg(std::int64_t v) { return -v; }
inline Integer neg(const Integer& v) { return -v; }

inline std::int64_t quot(std::int64_t a, std::int64_t b) { return a / b; }
inline Integer quot(const Integer& a, const Integer& b) { return a / b; }

inline bool abs_less(std::int64_t a, std::int64_t b) { return std::llabs(a) < std::llabs(b); }
inline bool abs_less(const Integer& a, const Integer& b) { return mpz_cmpabs(a.get_mpz_t(), b.get_mpz_t()) < 0; }

inline bool negative(std::int64_t v) { return v < 0; }
inline bool negative(const Integer& v) { return sgn(v) < 0; }

void gcdext(std::int64_t a, std::int64_t b, std::int64_t& g, std::int64_t& s, std::int64_t& t) {
  // a, b > 0 here; Bezout coefficients stay bounded by the inputs.
  std::int64_t r0 = a, r1 = b, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
  while (r1 != 0) {
    std::int64_t q = r0 / r1;
    std::int64_t r2 = r0 - q * r1;
    std::int64_t s2 = s0 - q * s1;
    std::int64_t t2 = t0 - q * t1;
    r0 = r1;
    r1 = r2;
    s0 = s1;
    s1 = s2;
    t0 = t1;
    t1 = t2;
  }
  g = r0;
  s = s0;
  t = t0;
}

void gcdext(const Integer& a, const Integer& b, Integer& g, Integer& s, Integer& t) {
  mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
}

inline std::int64_t convert(const Integer& v, std::int64_t*) {
  if (!v.fits_slong_p()) throw Overflow{};
  long x = v.get_si();
  if (x == LONG_MIN) throw Overflow{};
  return x;
}
inline Integer convert(const Integer& v, Integer*) { return v; }

inline Integer to_integer(std::int64_t v) { return Integer(static_cast<long>(v)); }
inline Integer to_integer(const Integer& v) { return v; }

template <class T>
using Line = std::vector<std::pair<std::uint32_t, T>>;

template <class T>
const T* find(const Line<T>& line, std::uint32_t idx) {
  auto it = std::lower_bound(line.begin(), line.end(), idx,
                             [](const auto& e, std::uint32_t v) { return e.first < v; });
  if (it != line.end() && it->first == idx) return &it->second;
  return nullptr;
}

// a += q * b. Indices of b that were absent from a are appended to `created`.
template <class T>
void line_axpy(Line<T>& a, const T& q, const Line<T>& b, Line<T>& scratch,
               std::vector<std::uint32_t>* created = nullptr) {
  if (q == 0 || b.empty()) return;
  scratch.clear();
  scratch.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      scratch.push_back(std::move(a[i++]));
    } else if (i == a.size() || b[j].first < a[i].first) {
      scratch.emplace_back(b[j].first, mul(q, b[j].second));
      if (created) created->push_back(b[j].first);
      ++j;
    } else {
      T s = addmul(a[i].second, q, b[j].second);
      if (s != 0) scratch.emplace_back(a[i].first, std::move(s));
      ++i;
      ++j;
    }
  }
  a.swap(scratch);
}

template <class T>
Line<T> line_scale(const Line<T>& a, const T& s) {
  Line<T> out;
  if (s == 0) return out;
  out.reserve(a.size());
  for (const auto& [i, v] : a) out.emplace_back(i, mul(s, v));
  return out;
}

// (a, b) <- (s a + t b, x a + y b)
template <class T>
void line_mix(Line<T>& a, Line<T>& b, const T& s, const T& t, const T& x, const T& y,
              Line<T>& scratch) {
  Line<T> na = line_scale(a, s);
  line_axpy(na, t, b, scratch);
  Line<T> nb = line_scale(a, x);
  line_axpy(nb, y, b, scratch);
  a.swap(na);
  b.swap(nb);
}

template <class T>
std::vector<Line<T>> identity_lines(std::size_t n) {
  std::vector<Line<T>> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i].emplace_back(static_cast<std::uint32_t>(i), T(1));
  return out;
}

template <class T>
SparseVec to_sparse(const Line<T>& line) {
  SparseVec out;
  out.reserve(line.size());
  for (const auto& [i, v] : line) out.emplace_back(i, to_integer(v));
  return out;
}

template <class T>
class Engine {
 public:
  Engine(const ExactMatrix& m, const SmithOptions& opt)
      : m_(m.rows()), n_(m.cols()), opt_(opt), rows_(m.rows()), col_rows_(m.cols()),
        active_(m.rows(), 1) {
    for (std::size_t c = 0; c < n_; ++c) {
      for (const auto& [r, v] : m.column(c)) {
        rows_[r].emplace_back(static_cast<std::uint32_t>(c), convert(v, static_cast<T*>(nullptr)));
        col_rows_[c].push_back(r);
      }
    }
    nnz_ = m.nnz();
    check_nnz();
    if (opt_.left) left_ = identity_lines<T>(m_);
    if (opt_.left_inverse) left_inv_ = identity_lines<T>(m_);
    if (opt_.right) right_ = identity_lines<T>(n_);
    if (opt_.right_inverse) right_inv_ = identity_lines<T>(n_);
  }

  SmithResult run() {
    unit_phase();
    general_phase();
    return finish();
  }

 private:
  struct Pivot {
    std::uint32_t row, col;
    T value;
  };

  std::string progress() const {
    return "pivots=" + std::to_string(pivots_.size()) + " rows=" + std::to_string(m_) +
           " cols=" + std::to_string(n_) + " nnz=" + std::to_string(nnz_);
  }

  void check_nnz() const {
    if (nnz_ > caps().max_nonzeros)
      throw CapExceeded("Smith normal form fill exceeds " + std::to_string(caps().max_nonzeros) +
                            " nonzeros",
                        progress());
  }

  // rows[dst] += q * rows[src]
  void row_op(std::uint32_t dst, const T& q, std::uint32_t src) {
    created_.clear();
    std::size_t before = rows_[dst].size();
    line_axpy(rows_[dst], q, rows_[src], scratch_, &created_);
    for (auto c : created_) col_rows_[c].push_back(dst);
    nnz_ = nnz_ + rows_[dst].size() - before;
    check_nnz();
    if (in_unit_phase_) heap_.emplace(rows_[dst].size(), dst);
    if (opt_.left) line_axpy(left_[dst], q, left_[src], scratch_);
    if (opt_.left_inverse) line_axpy(left_inv_[src], neg(q), left_inv_[dst], scratch_);
  }

  // col[dst] += q * col[src], transforms only.
  void col_op(std::uint32_t dst, const T& q, std::uint32_t src) {
    if (opt_.right) line_axpy(right_[dst], q, right_[src], scratch_);
    if (opt_.right_inverse) line_axpy(right_inv_[src], neg(q), right_inv_[dst], scratch_);
  }

  // Active rows other than `r` with a nonzero entry in column c; compacts the index.
  std::vector<std::uint32_t> rows_with(std::uint32_t c, std::uint32_t r) {
    auto& lst = col_rows_[c];
    std::sort(lst.begin(), lst.end());
    lst.erase(std::unique(lst.begin(), lst.end()), lst.end());
    std::vector<std::uint32_t> out;
    std::size_t keep = 0;
    for (auto x : lst) {
      if (!active_[x] || !find(rows_[x], c)) continue;
      lst[keep++] = x;
      if (x != r) out.push_back(x);
    }
    lst.resize(keep);
    return out;
  }

  void pivot_at(std::uint32_t r, std::uint32_t c) {
    for (;;) {
      bool moved = false;
      for (auto r2 : rows_with(c, r)) {
        const T* a = find(rows_[r2], c);
        if (!a) continue;
        T p = *find(rows_[r], c);
        T q = neg(quot(*a, p));
        row_op(r2, q, r);
        if (find(rows_[r2], c)) {
          r = r2;
          moved = true;
          break;
        }
      }
      if (moved) continue;

      // Column c now meets only row r, so column operations touch row r alone.
      Line<T>& row = rows_[r];
      T p = *find(row, c);
      Line<T> kept;
      std::size_t before = row.size();
      for (auto& [c2, b] : row) {
        if (c2 == c) {
          kept.emplace_back(c2, b);
          continue;
        }
        T q = neg(quot(b, p));
        if (q != 0) col_op(c2, q, c);
        T rem = addmul(b, q, p);
        if (rem != 0) kept.emplace_back(c2, std::move(rem));
      }
      row.swap(kept);
      nnz_ = nnz_ + row.size() - before;
      if (row.size() == 1) {
        pivots_.push_back({r, c, p});
        active_[r] = 0;
        row.clear();
        nnz_ -= 1;
        col_rows_[c].clear();
        col_rows_[c].shrink_to_fit();
        return;
      }
      std::uint32_t best = c;
      const T* best_v = nullptr;
      for (const auto& [c2, v] : row) {
        if (c2 == c) continue;
        if (!best_v || abs_less(v, *best_v)) {
          best = c2;
          best_v = &v;
        }
      }
      c = best;
    }
  }

  void unit_phase() {
    in_unit_phase_ = true;
    for (std::uint32_t r = 0; r < m_; ++r)
      if (!rows_[r].empty()) heap_.emplace(rows_[r].size(), r);
    while (!heap_.empty()) {
      auto [len, r] = heap_.top();
      heap_.pop();
      if (!active_[r] || len == 0 || rows_[r].size() != len) continue;
      std::uint32_t best = 0;
      std::size_t best_cost = SIZE_MAX;
      for (const auto& [c, v] : rows_[r]) {
        if (!is_unit(v)) continue;
        std::size_t cost = col_rows_[c].size();
        if (cost < best_cost) {
          best_cost = cost;
          best = c;
        }
      }
      if (best_cost == SIZE_MAX) continue;
      pivot_at(r, best);
    }
    in_unit_phase_ = false;
  }

  void general_phase() {
    for (;;) {
      std::uint32_t br = 0, bc = 0;
      const T* bv = nullptr;
      for (std::uint32_t r = 0; r < m_ && !(bv && is_unit(*bv)); ++r) {
        if (!active_[r]) continue;
        for (const auto& [c, v] : rows_[r]) {
          if (!bv || abs_less(v, *bv)) {
            br = r;
            bc = c;
            bv = &v;
            if (is_unit(v)) break;
          }
        }
      }
      if (!bv) return;
      pivot_at(br, bc);
    }
  }

  SmithResult finish() {
    for (auto& pv : pivots_) {
      if (!negative(pv.value)) continue;
      pv.value = neg(pv.value);
      if (opt_.left) left_[pv.row] = line_scale(left_[pv.row], T(-1));
      if (opt_.left_inverse) left_inv_[pv.row] = line_scale(left_inv_[pv.row], T(-1));
    }
    std::stable_partition(pivots_.begin(), pivots_.end(),
                          [](const Pivot& p) { return is_unit(p.value); });
    std::size_t units = 0;
    while (units < pivots_.size() && is_unit(pivots_[units].value)) ++units;

    for (std::size_t i = units; i < pivots_.size(); ++i) {
      for (std::size_t j = i + 1; j < pivots_.size(); ++j) {
        T a = pivots_[i].value, b = pivots_[j].value;
        if (quot(b, a) * a == b) continue;
        T g, s, t;
        gcdext(a, b, g, s, t);
        T bg = quot(b, g), ag = quot(a, g);
        auto ri = pivots_[i].row, rj = pivots_[j].row;
        auto ci = pivots_[i].col, cj = pivots_[j].col;
        if (opt_.left) line_mix(left_[ri], left_[rj], s, t, neg(bg), ag, scratch_);
        if (opt_.left_inverse) line_mix(left_inv_[ri], left_inv_[rj], ag, bg, neg(t), s, scratch_);
        if (opt_.right)
          line_mix(right_[ci], right_[cj], T(1), T(1), neg(mul(t, bg)), mul(s, ag), scratch_);
        if (opt_.right_inverse)
          line_mix(right_inv_[ci], right_inv_[cj], mul(s, ag), mul(t, bg), T(-1), T(1), scratch_);
        pivots_[i].value = g;
        pivots_[j].value = mul(ag, b);
      }
    }

    SmithResult res;
    res.rank = pivots_.size();
    std::size_t d = std::min(m_, n_);
    res.diag.assign(d, Integer(0));
    for (std::size_t k = 0; k < pivots_.size(); ++k) res.diag[k] = to_integer(pivots_[k].value);

    std::vector<std::uint32_t> row_order, col_order;
    std::vector<char> row_used(m_, 0), col_used(n_, 0);
    for (const auto& pv : pivots_) {
      row_order.push_back(pv.row);
      col_order.push_back(pv.col);
      row_used[pv.row] = 1;
      col_used[pv.col] = 1;
    }
    for (std::uint32_t r = 0; r < m_; ++r)
      if (!row_used[r]) row_order.push_back(r);
    for (std::uint32_t c = 0; c < n_; ++c)
      if (!col_used[c]) col_order.push_back(c);

    auto gather = [](std::vector<Line<T>>& lines, const std::vector<std::uint32_t>& order) {
      std::vector<SparseVec> out;
      out.reserve(order.size());
      for (auto i : order) {
        out.push_back(to_sparse(lines[i]));
        Line<T>().swap(lines[i]);
      }
      return out;
    };
    if (opt_.left) res.left = ExactMatrix::from_columns(m_, gather(left_, row_order)).transpose();
    if (opt_.left_inverse) res.left_inverse = ExactMatrix::from_columns(m_, gather(left_inv_, row_order));
    if (opt_.right) res.right = ExactMatrix::from_columns(n_, gather(right_, col_order));
    if (opt_.right_inverse)
      res.right_inverse = ExactMatrix::from_columns(n_, gather(right_inv_, col_order)).transpose();
    return res;
  }

  std::size_t m_, n_;
  SmithOptions opt_;
  std::vector<Line<T>> rows_;
  std::vector<std::vector<std::uint32_t>> col_rows_;
  std::vector<char> active_;
  std::vector<Pivot> pivots_;
  std::vector<Line<T>> left_, left_inv_, right_, right_inv_;
  std::size_t nnz_ = 0;
  bool in_unit_phase_ = false;
  std::priority_queue<std::pair<std::size_t, std::uint32_t>,
                      std::vector<std::pair<std::size_t, std::uint32_t>>, std::greater<>>
      heap_;
  Line<T> scratch_;
  std::vector<std::uint32_t> created_;
};

}  // namespace

SmithResult smith_normal_form(const ExactMatrix& m, const SmithOptions& opt) {
  try {
    Engine<std::int64_t> e(m, opt);
    return e.run();
  } catch (const Overflow&) {
  }
  Engine<Integer> e(m, opt);
  return e.run();
}

std::vector<Integer> smith_invariants(const ExactMatrix& m) {
  SmithOptions opt{false, false, false, false};
  SmithResult r = smith_normal_form(m, opt);
  r.diag.resize(r.rank);
  return r.diag;
}

std::size_t rank(const ExactMatrix& m) { return smith_invariants(m).size(); }

}  // namespace gphom
