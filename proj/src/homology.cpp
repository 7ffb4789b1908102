#include <algorithm>
#include <sstream>

#include "gphom/errors.hpp"
#include "gphom/exactalg.hpp"

namespace gphom {

std::string HomologyResult::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  if (free_rank > 0) {
    os << "Z";
    if (free_rank > 1) os << "^" << free_rank;
    first = false;
  }
  for (const auto& d : invariant_factors) {
    if (!first) os << " + ";
    os << "Z/" << d.get_str();
    first = false;
  }
  return os.str();
}

bool operator==(const HomologyResult& a, const HomologyResult& b) {
  return a.free_rank == b.free_rank && a.invariant_factors == b.invariant_factors;
}

HomologyResult HomologyResult::from_cyclic_orders(const std::vector<Integer>& orders) {
  HomologyResult h;
  std::vector<Integer> torsion;
  for (const auto& d : orders) {
    if (d == 0) {
      ++h.free_rank;
    } else if (abs(d) != 1) {
      torsion.push_back(abs(d));
    }
  }
  ExactMatrix diag = ExactMatrix::diagonal(torsion.size(), torsion.size(), torsion);
  for (auto& d : smith_invariants(diag))
    if (d != 1) h.invariant_factors.push_back(d);
  return h;
}

HomologyResult direct_sum(const HomologyResult& a, const HomologyResult& b) {
  std::vector<Integer> orders(a.free_rank + b.free_rank, Integer(0));
  orders.insert(orders.end(), a.invariant_factors.begin(), a.invariant_factors.end());
  orders.insert(orders.end(), b.invariant_factors.begin(), b.invariant_factors.end());
  return HomologyResult::from_cyclic_orders(orders);
}

HomologyResult localize(const HomologyResult& h, const Integer& m) {
  if (m == 0) throw Error("localize: cannot invert 0");
  std::vector<Integer> orders(h.free_rank, Integer(0));
  for (Integer d : h.invariant_factors) {
    for (;;) {
      Integer g = gcd(d, m);
      if (g == 1) break;
      d /= g;
    }
    orders.push_back(d);
  }
  return HomologyResult::from_cyclic_orders(orders);
}

Integer factorial(unsigned k) {
  Integer f;
  mpz_fac_ui(f.get_mpz_t(), k);
  return f;
}

HomologyResult homology_at(const ExactMatrix& d_in, const ExactMatrix& d_out) {
  if (d_in.rows() != d_out.cols())
    throw CompositionError("homology_at: d_in has " + std::to_string(d_in.rows()) +
                           " rows but d_out has " + std::to_string(d_out.cols()) + " columns");
  if (!d_in.is_zero() && !d_out.is_zero() && !(d_out * d_in).is_zero())
    throw CompositionError("homology_at: d_out * d_in != 0");
  std::size_t dim = d_out.cols();
  std::size_t r_out = rank(d_out);
  auto inv_in = smith_invariants(d_in);
  HomologyResult h;
  h.free_rank = dim - r_out - inv_in.size();
  for (auto& d : inv_in)
    if (d != 1) h.invariant_factors.push_back(d);
  return h;
}

ExactMatrix kernel_basis(const ExactMatrix& m) {
  SmithOptions opt{false, true, false, false};
  SmithResult s = smith_normal_form(m, opt);
  return s.right.column_range(s.rank, m.cols());
}

AbelianGroup::AbelianGroup(std::size_t generators, ExactMatrix relations)
    : gens_(generators), relations_(std::move(relations)) {
  if (relations_.rows() != gens_)
    throw CompositionError("AbelianGroup: relation matrix has wrong number of rows");
  SmithOptions opt{true, false, true, false};
  SmithResult s = smith_normal_form(relations_, opt);
  left_ = std::move(s.left);
  left_inv_ = std::move(s.left_inverse);
  std::vector<Integer> orders;
  for (std::size_t i = 0; i < gens_; ++i) {
    Integer d = i < s.rank ? s.diag[i] : Integer(0);
    if (d == 1) continue;
    slots_.push_back(i);
    moduli_.push_back(d);
    orders.push_back(d);
  }
  structure_ = HomologyResult::from_cyclic_orders(orders);
}

std::vector<Integer> AbelianGroup::canonical(const SparseVec& x) const {
  SparseVec w = left_.apply(x);
  std::vector<Integer> out(slots_.size(), Integer(0));
  std::size_t k = 0;
  for (std::size_t j = 0; j < slots_.size(); ++j) {
    while (k < w.size() && w[k].first < slots_[j]) ++k;
    if (k < w.size() && w[k].first == slots_[j]) out[j] = w[k].second;
    if (moduli_[j] != 0) {
      out[j] %= moduli_[j];
      if (out[j] < 0) out[j] += moduli_[j];
    }
  }
  return out;
}

std::vector<Integer> AbelianGroup::canonical(const std::vector<Integer>& x) const {
  return canonical(sparse_from_dense(x));
}

bool AbelianGroup::is_zero(const SparseVec& x) const {
  auto c = canonical(x);
  return std::all_of(c.begin(), c.end(), [](const Integer& v) { return v == 0; });
}

SparseVec AbelianGroup::generator(std::size_t j) const { return left_inv_.column(slots_.at(j)); }

namespace {

// {x in Z^a : f x in colspan(target_rel)} / colspan(quotient).
HomologyResult preimage_quotient(const ExactMatrix& f, const ExactMatrix& target_rel,
                                 const ExactMatrix& quotient, std::size_t a) {
  ExactMatrix pre = kernel_basis(hcat(f, target_rel)).row_range(0, a);
  SmithResult s = smith_normal_form(pre, SmithOptions{true, false, false, false});
  ExactMatrix lr = s.left * quotient;
  MatrixBuilder coords(s.rank, lr.cols());
  for (std::size_t c = 0; c < lr.cols(); ++c) {
    for (const auto& [r, v] : lr.column(c)) {
      if (r >= s.rank || v % s.diag[r] != 0)
        throw WellDefinednessFailure("map does not respect the source relations");
      coords.add(r, c, Integer(v / s.diag[r]));
    }
  }
  ExactMatrix rel = std::move(coords).build();
  auto inv = smith_invariants(rel);
  HomologyResult h;
  h.free_rank = s.rank - inv.size();
  for (auto& d : inv)
    if (d != 1) h.invariant_factors.push_back(d);
  return h;
}

}  // namespace

HomologyResult module_homology(const ExactMatrix& d_in, const ExactMatrix& d_out,
                               const ExactMatrix& rel_mid, const ExactMatrix& rel_out) {
  std::size_t b = d_out.cols();
  if (d_in.rows() != b || rel_mid.rows() != b || rel_out.rows() != d_out.rows())
    throw CompositionError("module_homology: dimension mismatch");
  return preimage_quotient(d_out, rel_out, hcat(rel_mid, d_in), b);
}

GroupMapSummary kernel_cokernel(const AbelianGroup& source, const AbelianGroup& target,
                                const ExactMatrix& map) {
  std::size_t a = source.generator_count(), b = target.generator_count();
  if (map.rows() != b || map.cols() != a)
    throw CompositionError("kernel_cokernel: map has the wrong shape");
  GroupMapSummary out;

  ExactMatrix both = hcat(target.relations(), map);
  auto inv = smith_invariants(both);
  out.cokernel.free_rank = b - inv.size();
  for (auto& d : inv)
    if (d != 1) out.cokernel.invariant_factors.push_back(d);

  out.kernel = preimage_quotient(map, target.relations(), source.relations(), a);
  return out;
}

HomologyPresentation::HomologyPresentation(const ExactMatrix& d_in, const ExactMatrix& d_out)
    : dim_(d_out.cols()), d_out_(d_out) {
  if (d_in.rows() != dim_) throw CompositionError("HomologyPresentation: dimension mismatch");
  SmithResult s = smith_normal_form(d_out, SmithOptions{false, true, false, true});
  out_rank_ = s.rank;
  kernel_ = s.right.column_range(s.rank, dim_);
  right_inv_ = std::move(s.right_inverse);
  ExactMatrix img = right_inv_ * d_in;
  for (std::size_t c = 0; c < img.cols(); ++c)
    for (const auto& e : img.column(c))
      if (e.first < out_rank_) throw CompositionError("HomologyPresentation: d_out * d_in != 0");
  group_ = AbelianGroup(dim_ - out_rank_, img.row_range(out_rank_, dim_));
}

bool HomologyPresentation::is_cycle(const SparseVec& x) const { return d_out_.apply(x).empty(); }

std::vector<Integer> HomologyPresentation::coordinates(const SparseVec& x) const {
  if (!is_cycle(x)) throw CompositionError("coordinates: chain is not a cycle");
  SparseVec y = right_inv_.apply(x);
  SparseVec z;
  for (auto& [i, v] : y)
    if (i >= out_rank_) z.emplace_back(static_cast<std::uint32_t>(i - out_rank_), v);
  return group_.canonical(z);
}

SparseVec HomologyPresentation::generator_cycle(std::size_t j) const {
  return kernel_.apply(group_.generator(j));
}

std::vector<std::vector<Integer>> induced_map(const HomologyPresentation& source,
                                              const HomologyPresentation& target,
                                              const ExactMatrix& f) {
  if (f.cols() != source.chain_dimension() || f.rows() != target.chain_dimension())
    throw CompositionError("induced_map: chain map has the wrong shape");
  std::size_t gs = source.generator_count(), gt = target.generator_count();
  std::vector<std::vector<Integer>> m(gt, std::vector<Integer>(gs, Integer(0)));
  for (std::size_t j = 0; j < gs; ++j) {
    auto c = target.coordinates(f.apply(source.generator_cycle(j)));
    for (std::size_t i = 0; i < gt; ++i) m[i][j] = c[i];
  }
  return m;
}

bool is_identity(const std::vector<std::vector<Integer>>& m, const std::vector<Integer>& moduli) {
  if (m.size() != moduli.size()) return false;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i].size() != m.size()) return false;
    for (std::size_t j = 0; j < m.size(); ++j) {
      Integer d = m[i][j] - (i == j ? 1 : 0);
      if (moduli[i] == 0 ? d != 0 : d % moduli[i] != 0) return false;
    }
  }
  return true;
}

}  // namespace gphom
