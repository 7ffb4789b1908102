#include <algorithm>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>

#include "gphom/errors.hpp"
#include "gphom/exactalg.hpp"

namespace gphom {

namespace {
std::mutex caps_mutex;
ResourceCaps global_caps;
}  // namespace

const ResourceCaps& caps() { return global_caps; }

void set_caps(const ResourceCaps& c) {
  std::lock_guard<std::mutex> lock(caps_mutex);
  global_caps = c;
}

ScopedCaps::ScopedCaps(const ResourceCaps& c) : saved_(caps()) { set_caps(c); }
ScopedCaps::~ScopedCaps() { set_caps(saved_); }

void sparse_normalize(SparseVec& v) {
  std::sort(v.begin(), v.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::size_t out = 0;
  for (std::size_t i = 0; i < v.size();) {
    std::size_t j = i;
    Integer sum = 0;
    while (j < v.size() && v[j].first == v[i].first) sum += v[j++].second;
    if (sum != 0) {
      v[out].first = v[i].first;
      v[out].second = std::move(sum);
      ++out;
    }
    i = j;
  }
  v.resize(out);
}

void sparse_axpy(SparseVec& a, const Integer& coef, const SparseVec& b) {
  if (coef == 0 || b.empty()) return;
  SparseVec out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(std::move(a[i++]));
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.emplace_back(b[j].first, coef * b[j].second);
      ++j;
    } else {
      Integer s = a[i].second + coef * b[j].second;
      if (s != 0) out.emplace_back(a[i].first, std::move(s));
      ++i;
      ++j;
    }
  }
  a = std::move(out);
}

SparseVec sparse_from_dense(const std::vector<Integer>& v) {
  SparseVec out;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) out.emplace_back(static_cast<std::uint32_t>(i), v[i]);
  return out;
}

std::vector<Integer> sparse_to_dense(const SparseVec& v, std::size_t n) {
  std::vector<Integer> out(n, 0);
  for (const auto& [i, x] : v) out.at(i) = x;
  return out;
}

ExactMatrix::ExactMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}

ExactMatrix ExactMatrix::identity(std::size_t n) {
  ExactMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    m.cols_[i].emplace_back(static_cast<std::uint32_t>(i), Integer(1));
  return m;
}

ExactMatrix ExactMatrix::from_dense(const std::vector<std::vector<long>>& rows) {
  std::vector<std::vector<Integer>> big;
  for (const auto& r : rows) big.emplace_back(r.begin(), r.end());
  return from_dense(big);
}

ExactMatrix ExactMatrix::from_dense(const std::vector<std::vector<Integer>>& rows) {
  std::size_t nc = rows.empty() ? 0 : rows[0].size();
  ExactMatrix m(rows.size(), nc);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != nc) throw Error("from_dense: ragged rows");
    for (std::size_t c = 0; c < nc; ++c)
      if (rows[r][c] != 0) m.cols_[c].emplace_back(static_cast<std::uint32_t>(r), rows[r][c]);
  }
  return m;
}

ExactMatrix ExactMatrix::from_columns(std::size_t rows, std::vector<SparseVec> cols) {
  ExactMatrix m;
  m.rows_ = rows;
  for (auto& c : cols) {
    sparse_normalize(c);
    if (!c.empty() && c.back().first >= rows) throw Error("from_columns: row index out of range");
  }
  m.cols_ = std::move(cols);
  return m;
}

ExactMatrix ExactMatrix::diagonal(std::size_t rows, std::size_t cols,
                                  const std::vector<Integer>& diag) {
  ExactMatrix m(rows, cols);
  for (std::size_t i = 0; i < diag.size() && i < rows && i < cols; ++i)
    if (diag[i] != 0) m.cols_[i].emplace_back(static_cast<std::uint32_t>(i), diag[i]);
  return m;
}

std::size_t ExactMatrix::nnz() const {
  std::size_t n = 0;
  for (const auto& c : cols_) n += c.size();
  return n;
}

Integer ExactMatrix::at(std::size_t r, std::size_t c) const {
  const auto& col = cols_.at(c);
  auto it = std::lower_bound(col.begin(), col.end(), r,
                             [](const auto& e, std::size_t v) { return e.first < v; });
  if (it != col.end() && it->first == r) return it->second;
  return 0;
}

bool ExactMatrix::is_zero() const {
  return std::all_of(cols_.begin(), cols_.end(), [](const auto& c) { return c.empty(); });
}

ExactMatrix ExactMatrix::transpose() const {
  ExactMatrix t(cols(), rows_);
  for (std::size_t c = 0; c < cols_.size(); ++c)
    for (const auto& [r, v] : cols_[c]) t.cols_[r].emplace_back(static_cast<std::uint32_t>(c), v);
  return t;
}

SparseVec ExactMatrix::apply(const SparseVec& x) const {
  SparseVec out;
  for (const auto& [c, v] : x) {
    if (c >= cols_.size()) throw Error("apply: index out of range");
    for (const auto& [r, a] : cols_[c]) out.emplace_back(r, a * v);
  }
  sparse_normalize(out);
  return out;
}

std::vector<Integer> ExactMatrix::apply(const std::vector<Integer>& x) const {
  if (x.size() != cols_.size()) throw Error("apply: dimension mismatch");
  std::vector<Integer> out(rows_, 0);
  for (std::size_t c = 0; c < cols_.size(); ++c) {
    if (x[c] == 0) continue;
    for (const auto& [r, a] : cols_[c]) out[r] += a * x[c];
  }
  return out;
}

ExactMatrix ExactMatrix::select_columns(const std::vector<std::size_t>& idx) const {
  ExactMatrix m(rows_, 0);
  m.cols_.reserve(idx.size());
  for (auto c : idx) m.cols_.push_back(cols_.at(c));
  return m;
}

ExactMatrix ExactMatrix::select_rows(const std::vector<std::size_t>& idx) const {
  std::vector<std::int64_t> where(rows_, -1);
  for (std::size_t i = 0; i < idx.size(); ++i) where.at(idx[i]) = static_cast<std::int64_t>(i);
  ExactMatrix m(idx.size(), cols());
  for (std::size_t c = 0; c < cols_.size(); ++c) {
    for (const auto& [r, v] : cols_[c])
      if (where[r] >= 0) m.cols_[c].emplace_back(static_cast<std::uint32_t>(where[r]), v);
    sparse_normalize(m.cols_[c]);
  }
  return m;
}

ExactMatrix ExactMatrix::row_range(std::size_t begin, std::size_t end) const {
  ExactMatrix m(end - begin, cols());
  for (std::size_t c = 0; c < cols_.size(); ++c)
    for (const auto& [r, v] : cols_[c])
      if (r >= begin && r < end) m.cols_[c].emplace_back(static_cast<std::uint32_t>(r - begin), v);
  return m;
}

ExactMatrix ExactMatrix::column_range(std::size_t begin, std::size_t end) const {
  ExactMatrix m(rows_, 0);
  m.cols_.assign(cols_.begin() + static_cast<std::ptrdiff_t>(begin),
                 cols_.begin() + static_cast<std::ptrdiff_t>(end));
  return m;
}

std::vector<std::vector<Integer>> ExactMatrix::to_dense() const {
  std::vector<std::vector<Integer>> d(rows_, std::vector<Integer>(cols(), 0));
  for (std::size_t c = 0; c < cols_.size(); ++c)
    for (const auto& [r, v] : cols_[c]) d[r][c] = v;
  return d;
}

ExactMatrix operator*(const ExactMatrix& a, const ExactMatrix& b) {
  if (a.cols() != b.rows()) throw CompositionError("matrix product: dimension mismatch");
  ExactMatrix m(a.rows(), b.cols());
  for (std::size_t c = 0; c < b.cols(); ++c) m.cols_[c] = a.apply(b.cols_[c]);
  return m;
}

ExactMatrix operator+(const ExactMatrix& a, const ExactMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw Error("matrix sum: dimension mismatch");
  ExactMatrix m = a;
  for (std::size_t c = 0; c < a.cols(); ++c) sparse_axpy(m.cols_[c], 1, b.cols_[c]);
  return m;
}

ExactMatrix operator-(const ExactMatrix& a, const ExactMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw Error("matrix difference: dimension mismatch");
  ExactMatrix m = a;
  for (std::size_t c = 0; c < a.cols(); ++c) sparse_axpy(m.cols_[c], -1, b.cols_[c]);
  return m;
}

ExactMatrix operator*(const Integer& s, const ExactMatrix& a) {
  ExactMatrix m(a.rows(), a.cols());
  if (s == 0) return m;
  m.cols_ = a.cols_;
  for (auto& c : m.cols_)
    for (auto& e : c) e.second *= s;
  return m;
}

bool operator==(const ExactMatrix& a, const ExactMatrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_;
}

ExactMatrix hcat(const ExactMatrix& a, const ExactMatrix& b) {
  if (a.rows() != b.rows()) throw Error("hcat: row mismatch");
  std::vector<SparseVec> cols = a.columns();
  cols.insert(cols.end(), b.columns().begin(), b.columns().end());
  return ExactMatrix::from_columns(a.rows(), std::move(cols));
}

ExactMatrix vcat(const ExactMatrix& a, const ExactMatrix& b) {
  if (a.cols() != b.cols()) throw Error("vcat: column mismatch");
  std::vector<SparseVec> cols = a.columns();
  for (std::size_t c = 0; c < cols.size(); ++c)
    for (const auto& [r, v] : b.column(c))
      cols[c].emplace_back(static_cast<std::uint32_t>(r + a.rows()), v);
  return ExactMatrix::from_columns(a.rows() + b.rows(), std::move(cols));
}

MatrixBuilder::MatrixBuilder(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}

void MatrixBuilder::add(std::size_t r, std::size_t c, const Integer& v) {
  if (r >= rows_ || c >= cols_) throw Error("MatrixBuilder: index out of range");
  if (v == 0) return;
  items_.emplace_back((static_cast<std::uint64_t>(c) << 32) | r, v);
}

void MatrixBuilder::add(std::size_t r, std::size_t c, long v) { add(r, c, Integer(v)); }

ExactMatrix MatrixBuilder::build() && {
  if (items_.size() > caps().max_nonzeros)
    throw CapExceeded("matrix assembly with " + std::to_string(items_.size()) + " entries");
  std::sort(items_.begin(), items_.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<SparseVec> cols(cols_);
  for (std::size_t i = 0; i < items_.size();) {
    std::size_t j = i;
    Integer sum = 0;
    while (j < items_.size() && items_[j].first == items_[i].first) sum += items_[j++].second;
    if (sum != 0) {
      auto c = static_cast<std::size_t>(items_[i].first >> 32);
      auto r = static_cast<std::uint32_t>(items_[i].first & 0xffffffffu);
      cols[c].emplace_back(r, std::move(sum));
    }
    i = j;
  }
  items_.clear();
  return ExactMatrix::from_columns(rows_, std::move(cols));
}

void write_coordinate(std::ostream& os, const ExactMatrix& m) {
  os << "%%ExactMatrix " << m.rows() << ' ' << m.cols() << ' ' << m.nnz() << '\n';
  for (std::size_t c = 0; c < m.cols(); ++c)
    for (const auto& [r, v] : m.column(c)) os << r << ' ' << c << ' ' << v.get_str() << '\n';
}

ExactMatrix read_coordinate(std::istream& is) {
  std::string tag;
  std::size_t rows = 0, cols = 0, nnz = 0;
  if (!(is >> tag >> rows >> cols >> nnz) || tag != "%%ExactMatrix")
    throw Error("read_coordinate: bad header");
  MatrixBuilder b(rows, cols);
  for (std::size_t i = 0; i < nnz; ++i) {
    std::size_t r = 0, c = 0;
    std::string v;
    if (!(is >> r >> c >> v)) throw Error("read_coordinate: truncated body");
    b.add(r, c, Integer(v));
  }
  return std::move(b).build();
}

std::string to_coordinate_string(const ExactMatrix& m) {
  std::ostringstream os;
  write_coordinate(os, m);
  return os.str();
}

ExactMatrix from_coordinate_string(const std::string& s) {
  std::istringstream is(s);
  return read_coordinate(is);
}

}  // namespace gphom
