#include "gphom/dimshift.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

#include "gphom/errors.hpp"
#include "gphom/grouphomology.hpp"

namespace gphom {

namespace {

int parity_sign(std::size_t k) { return k % 2 == 0 ? 1 : -1; }

SparseVec negated(SparseVec v) {
  for (auto& e : v) e.second = -e.second;
  return v;
}

SparseVec difference(const SparseVec& a, const SparseVec& b) {
  SparseVec out = a;
  sparse_axpy(out, Integer(-1), b);
  return out;
}

void check_units(const std::vector<unsigned>& alphas, unsigned n, unsigned p) {
  if (alphas.size() != n)
    throw Error("expected " + std::to_string(n) + " units, got " + std::to_string(alphas.size()));
  for (unsigned a : alphas)
    if (a == 0 || a >= p) throw NotAUnit(std::to_string(a) + " is not a unit of F_" + std::to_string(p));
}

std::uint32_t encode_values(const VectorSpace& v, const std::vector<unsigned>& vals) {
  std::vector<long> l(vals.begin(), vals.end());
  return v.encode(FpVector::from_values(l, v.p()));
}

}  // namespace

// ---------------------------------------------------------------------------

SparseVec ShiftContext::act(std::uint32_t g, unsigned k, const SparseVec& x) const {
  SparseVec out;
  out.reserve(x.size());
  for (const auto& [idx, coef] : x) {
    ColumnTuple t = complex.bases.at(k)[idx];
    for (unsigned c = 0; c < t.k; ++c) t.cols[c] = group.act(g, t.cols[c]);
    int sign = 1;
    if (complex.unordered) {
      sign = sort_columns(t);
      if (sign == 0) sign = 1;
    }
    out.emplace_back(complex.index_of(k, t), sign * coef);
  }
  sparse_normalize(out);
  return out;
}

SparseVec ShiftContext::lift(unsigned k, const SparseVec& x,
                             std::optional<std::uint32_t> preferred) const {
  if (k + 1 > complex.k_max) throw CapExceeded("lift: degree beyond the truncation");
  SparseVec want = x;
  sparse_normalize(want);
  if (want.empty()) return {};
  auto try_cone = [&](std::uint32_t a) -> std::optional<SparseVec> {
    SparseVec cone;
    for (const auto& [idx, coef] : want) {
      ColumnTuple t = complex.bases[k][idx].prepend(a);
      int sign = 1;
      if (complex.unordered) sign = sort_columns(t);
      if (!complex.contains(k + 1, t)) return std::nullopt;
      if (sign == 0) sign = 1;
      cone.emplace_back(complex.index_of(k + 1, t), sign * coef);
    }
    sparse_normalize(cone);
    if (complex.d[k + 1].apply(cone) != want) return std::nullopt;
    return cone;
  };
  if (preferred)
    if (auto c = try_cone(*preferred)) return *c;
  VectorSpace v(n, p);
  for (std::uint32_t a = 0; a < v.size(); ++a)
    if (auto c = try_cone(a)) return *c;

  const ExactMatrix& d = complex.d[k + 1];
  SmithResult s = smith_normal_form(d, SmithOptions{true, true, false, false});
  SparseVec lx = s.left.apply(want);
  SparseVec z;
  for (const auto& [r, val] : lx) {
    if (r >= s.rank || val % s.diag[r] != 0)
      throw NotFound("lift: chain is not a boundary in degree " + std::to_string(k));
    z.emplace_back(r, val / s.diag[r]);
  }
  return s.right.apply(z);
}

std::shared_ptr<const ShiftContext> make_shift_context(unsigned n, unsigned p, unsigned k_max) {
  return std::make_shared<const ShiftContext>(
      ShiftContext{n, p, MatrixGroup::general_linear(n, p), build_complex(n, p, n, k_max, true)});
}

// ---------------------------------------------------------------------------

TiModule::TiModule(std::shared_ptr<const ShiftContext> ctx, unsigned i) : ctx_(std::move(ctx)), i_(i) {
  const ChainComplex& c = ctx_->complex;
  if (i > c.k_max) throw CapExceeded("t_" + std::to_string(i) + ": complex truncated below degree i");
  auto torsion_in = [&](unsigned k) {
    return std::any_of(c.torsion[k].begin(), c.torsion[k].end(), [](char t) { return t != 0; });
  };
  if (torsion_in(i) || (i > 0 && torsion_in(i - 1)))
    throw Unsupported("t_" + std::to_string(i) + ": degrees with Z/2 summands");
  basis_ = kernel_basis(c.d[i]);
  SmithResult s = smith_normal_form(basis_, SmithOptions{true, true, false, false});
  for (std::size_t r = 0; r < s.rank; ++r)
    if (s.diag[r] != 1) throw Error("t_i: kernel lattice is not saturated");
  left_ = std::move(s.left);
  right_ = std::move(s.right);
  action_.resize(ctx_->group.order());
}

bool TiModule::contains(const SparseVec& y) const {
  SparseVec w = left_.apply(y);
  return std::all_of(w.begin(), w.end(), [&](const auto& e) { return e.first < rank(); });
}

SparseVec TiModule::coordinates(const SparseVec& y) const {
  SparseVec w = left_.apply(y);
  for (const auto& e : w)
    if (e.first >= rank()) throw NotFound("t_" + std::to_string(i_) + ": vector is not in the kernel");
  return right_.apply(w);
}

const ExactMatrix& TiModule::action(std::uint32_t g) const {
  auto& slot = action_.at(g);
  if (!slot) {
    std::vector<SparseVec> cols;
    cols.reserve(rank());
    for (std::size_t b = 0; b < rank(); ++b) {
      SparseVec y = ctx_->act(g, i_, basis_.column(b));
      try {
        cols.push_back(coordinates(y));
      } catch (const NotFound&) {
        throw ActionClosureError("t_" + std::to_string(i_) + ": " +
                                 ctx_->group.element(g).to_string() + " moves basis vector " +
                                 std::to_string(b) + " out of the lattice");
      }
    }
    slot = ExactMatrix::from_columns(rank(), std::move(cols));
  }
  return *slot;
}

void TiModule::validate() const {
  for (std::uint32_t g = 0; g < ctx_->group.order(); ++g) action(g);
}

AbelianGroup TiModule::coinvariants() const {
  std::vector<SparseVec> rel;
  for (std::uint32_t g : ctx_->group.generators()) {
    const ExactMatrix& a = action(g);
    for (std::size_t b = 0; b < rank(); ++b) {
      SparseVec col = a.column(b);
      sparse_axpy(col, Integer(-1), SparseVec{{static_cast<std::uint32_t>(b), Integer(1)}});
      if (!col.empty()) rel.push_back(std::move(col));
    }
  }
  return AbelianGroup(rank(), ExactMatrix::from_columns(rank(), std::move(rel)));
}

HomologyResult TiModule::kernel_structure() const {
  HomologyResult h;
  h.free_rank = rank();
  return h;
}

HomologyResult TiModule::cokernel_structure() const {
  const ChainComplex& c = ctx_->complex;
  if (i_ + 2 > c.k_max)
    throw CapExceeded("t_" + std::to_string(i_) + ": cokernel needs the complex through degree " +
                      std::to_string(i_ + 2));
  const ExactMatrix& d = c.d[i_ + 2];
  auto inv = smith_invariants(d);
  HomologyResult h;
  h.free_rank = d.rows() - inv.size();
  for (auto& x : inv)
    if (x != 1) h.invariant_factors.push_back(x);
  return h;
}

TiModule compute_t(unsigned i, unsigned n, unsigned p) {
  return TiModule(make_shift_context(n, p, i + 2), i);
}

// ---------------------------------------------------------------------------

void BarChain::add(const std::vector<std::uint32_t>& tuple, const Integer& c, const SparseVec& m) {
  if (c == 0 || m.empty()) return;
  auto it = terms.find(tuple);
  if (it == terms.end()) {
    SparseVec v;
    sparse_axpy(v, c, m);
    if (!v.empty()) terms.emplace(tuple, std::move(v));
    return;
  }
  sparse_axpy(it->second, c, m);
  if (it->second.empty()) terms.erase(it);
}

BarChain bar_boundary(const ShiftContext& ctx, const BarChain& x) {
  if (x.q == 0) throw Error("bar_boundary: degree 0 has no boundary");
  const MatrixGroup& g = ctx.group;
  std::uint32_t id = g.identity_index();
  BarChain out;
  out.q = x.q - 1;
  out.j = x.j;
  unsigned q = x.q;
  for (const auto& [t, m] : x.terms) {
    out.add(std::vector<std::uint32_t>(t.begin() + 1, t.end()), Integer(1), ctx.act(t[0], x.j, m));
    for (unsigned i = 1; i < q; ++i) {
      std::uint32_t merged = g.multiply(t[i], t[i - 1]);
      if (merged == id) continue;
      std::vector<std::uint32_t> u;
      u.reserve(q - 1);
      u.insert(u.end(), t.begin(), t.begin() + (i - 1));
      u.push_back(merged);
      u.insert(u.end(), t.begin() + (i + 1), t.end());
      out.add(u, Integer(parity_sign(i)), m);
    }
    out.add(std::vector<std::uint32_t>(t.begin(), t.end() - 1), Integer(parity_sign(q)), m);
  }
  return out;
}

BarChain bar_difference(const BarChain& a, const BarChain& b) {
  if (a.q != b.q || a.j != b.j) throw CompositionError("bar_difference: degree mismatch");
  BarChain out = a;
  for (const auto& [t, m] : b.terms) out.add(t, Integer(-1), m);
  return out;
}

BarChain cross_cycle(const ShiftContext& ctx, const std::vector<std::uint32_t>& g, unsigned j,
                     const SparseVec& m) {
  for (std::size_t a = 0; a < g.size(); ++a)
    for (std::size_t b = a + 1; b < g.size(); ++b)
      if (ctx.group.multiply(g[a], g[b]) != ctx.group.multiply(g[b], g[a]))
        throw Error("cross_cycle: elements do not commute");
  BarChain out;
  out.q = static_cast<unsigned>(g.size());
  out.j = j;
  std::uint32_t id = ctx.group.identity_index();
  if (std::find(g.begin(), g.end(), id) != g.end()) return out;
  for (const auto& sigma : all_permutations(out.q)) {
    std::vector<std::uint32_t> t(out.q);
    for (unsigned i = 0; i < out.q; ++i) t[i] = g[sigma[i]];
    out.add(t, Integer(permutation_sign(sigma)), m);
  }
  return out;
}

std::vector<std::uint32_t> diagonal_generators(const ShiftContext& ctx,
                                               const std::vector<unsigned>& alphas) {
  std::vector<std::uint32_t> out;
  for (unsigned i = 0; i < alphas.size(); ++i)
    out.push_back(ctx.group.index_of(diagonal_d(i + 1, FieldElement(alphas[i], ctx.p), ctx.n)));
  return out;
}

BarChain connecting_step(const ShiftContext& ctx, const BarChain& z,
                         std::optional<std::uint32_t> preferred) {
  if (z.q == 0) throw Error("connecting_step: nothing below degree 0");
  BarChain lifted;
  lifted.q = z.q;
  lifted.j = z.j + 1;
  for (const auto& [t, m] : z.terms) lifted.add(t, Integer(1), ctx.lift(z.j, m, preferred));
  BarChain out = bar_boundary(ctx, lifted);
  for (const auto& [t, m] : out.terms)
    if (!ctx.complex.d[out.j].apply(m).empty())
      throw CompositionError("connecting_step: input is not a cycle");
  return out;
}

// ---------------------------------------------------------------------------

TiHomology::TiHomology(const TiModule& t, unsigned q, std::size_t limit) : t_(&t), q_(q) {
  const MatrixGroup& g = t.context().group;
  std::uint32_t id = g.identity_index();
  position_.assign(g.order(), 0);
  for (std::uint32_t e = 0; e < g.order(); ++e)
    if (e != id) {
      position_[e] = static_cast<std::uint32_t>(nonid_.size());
      nonid_.push_back(e);
    }
  const std::size_t m = nonid_.size(), r = t.rank();
  std::vector<std::size_t> tuples(q + 2, 1);
  for (unsigned k = 1; k <= q + 1; ++k) {
    tuples[k] = tuples[k - 1] * m;
    if (m > 0 && tuples[k] * r > limit)
      throw CapExceeded("H_" + std::to_string(q) + "(G; t_" + std::to_string(t.degree()) +
                        "): bar complex degree " + std::to_string(k) + " exceeds " +
                        std::to_string(limit) + " columns");
  }
  if (tuples[q + 1] * r > caps().max_basis) throw CapExceeded("TiHomology: caps().max_basis");

  std::vector<ExactMatrix> inverse_action(g.order());
  for (std::uint32_t e = 0; e < g.order(); ++e) inverse_action[e] = t.action(g.inverse(e));

  // Bar differential with g_1^-1 acting in front and g_i g_{i+1} merged.
  auto build = [&](unsigned k) -> ExactMatrix {
    std::size_t rows = tuples[k - 1] * r;
    std::vector<SparseVec> cols;
    cols.reserve(tuples[k] * r);
    std::vector<std::uint32_t> h(k);
    for (std::size_t ti = 0; ti < tuples[k]; ++ti) {
      std::size_t rest = ti;
      for (unsigned a = k; a-- > 0;) {
        h[a] = nonid_[rest % m];
        rest /= m;
      }
      auto index = [&](const std::vector<std::uint32_t>& u) {
        std::size_t x = 0;
        for (auto e : u) x = x * m + position_[e];
        return x;
      };
      std::vector<std::uint32_t> front(h.begin() + 1, h.end()), back(h.begin(), h.end() - 1);
      std::size_t fi = index(front), bi = index(back);
      std::vector<std::pair<std::size_t, int>> inner;
      for (unsigned i = 1; i < k; ++i) {
        std::uint32_t merged = g.multiply(h[i - 1], h[i]);
        if (merged == id) continue;
        std::vector<std::uint32_t> u(h.begin(), h.begin() + (i - 1));
        u.push_back(merged);
        u.insert(u.end(), h.begin() + (i + 1), h.end());
        inner.emplace_back(index(u), parity_sign(i));
      }
      const ExactMatrix& act = inverse_action[h[0]];
      for (std::size_t b = 0; b < r; ++b) {
        SparseVec col;
        for (const auto& [row, v] : act.column(b))
          col.emplace_back(static_cast<std::uint32_t>(fi * r + row), v);
        for (const auto& [u, s] : inner) col.emplace_back(static_cast<std::uint32_t>(u * r + b), Integer(s));
        col.emplace_back(static_cast<std::uint32_t>(bi * r + b), Integer(parity_sign(k)));
        cols.push_back(std::move(col));
      }
    }
    return ExactMatrix::from_columns(rows, std::move(cols));
  };
  ExactMatrix d_out = q == 0 ? ExactMatrix(0, r) : build(q);
  ExactMatrix d_in = build(q + 1);
  pres_ = std::make_unique<HomologyPresentation>(d_in, d_out);
}

std::vector<Integer> TiHomology::coordinates(const BarChain& z) const {
  if (z.q != q_ || z.j != t_->degree()) throw CompositionError("TiHomology: chain has the wrong degree");
  const MatrixGroup& g = t_->context().group;
  const std::size_t m = nonid_.size(), r = t_->rank();
  SparseVec v;
  for (const auto& [tuple, coef] : z.terms) {
    std::size_t x = 0;
    for (auto e : tuple) {
      if (e == g.identity_index()) throw CompositionError("TiHomology: degenerate tuple");
      x = x * m + position_[g.inverse(e)];
    }
    for (const auto& [b, c] : t_->coordinates(coef)) v.emplace_back(static_cast<std::uint32_t>(x * r + b), c);
  }
  sparse_normalize(v);
  return pres_->coordinates(v);
}

bool TiHomology::is_zero(const BarChain& z) const {
  auto c = coordinates(z);
  const auto& mod = moduli();
  for (std::size_t i = 0; i < c.size(); ++i) {
    Integer x = c[i];
    if (mod[i] != 0) x %= mod[i];
    if (x != 0) return false;
  }
  return true;
}

BarChain TiHomology::generator_cycle(std::size_t gen) const {
  const MatrixGroup& g = t_->context().group;
  const std::size_t m = nonid_.size(), r = t_->rank();
  BarChain out;
  out.q = q_;
  out.j = t_->degree();
  std::map<std::vector<std::uint32_t>, SparseVec> coords;
  for (const auto& [idx, c] : pres_->generator_cycle(gen)) {
    std::size_t tuple = idx / r, b = idx % r;
    std::vector<std::uint32_t> u(q_);
    for (unsigned a = q_; a-- > 0;) {
      u[a] = g.inverse(nonid_[tuple % m]);
      tuple /= m;
    }
    coords[u].emplace_back(static_cast<std::uint32_t>(b), c);
  }
  for (auto& [u, x] : coords) {
    sparse_normalize(x);
    out.add(u, Integer(1), t_->embed(x));
  }
  return out;
}

// ---------------------------------------------------------------------------

ClassDecision class_is_zero(const TiModule& t, const BarChain& z, std::size_t direct_limit) {
  if (z.is_zero()) return {true, "zero chain"};
  const ShiftContext& ctx = t.context();
  if (z.q == 0) {
    SparseVec coords;
    for (const auto& [tuple, m] : z.terms) sparse_axpy(coords, Integer(1), t.coordinates(m));
    return {t.coinvariants().is_zero(coords), "coinvariants"};
  }
  try {
    TiHomology h(t, z.q, direct_limit);
    return {h.is_zero(z), "bar complex"};
  } catch (const CapExceeded&) {
  }
  if (t.degree() + 1 > ctx.complex.k_max) return {std::nullopt, "complex truncated"};

  BarChain down = connecting_step(ctx, z);
  TiModule next(t.context_ptr(), t.degree() + 1);
  ClassDecision below = class_is_zero(next, down, direct_limit);
  std::string via = "connecting map to H_" + std::to_string(down.q) + "(G; t_" +
                    std::to_string(next.degree()) + "), " + below.method;
  if (!below.zero) return {std::nullopt, via};
  if (!*below.zero) return {false, via};

  // injective when H_q(G; Ã_{j+1}) vanishes
  try {
    GModule a = GModule::from_complex(ctx.group, ctx.complex, t.degree() + 1);
    GroupHomology gh = group_homology(a, z.q);
    if (gh.groups[z.q].is_zero()) return {true, via + "; H_" + std::to_string(z.q) + "(G; Ã_" +
                                                std::to_string(t.degree() + 1) + ") = 0"};
    return {std::nullopt, via + "; H_" + std::to_string(z.q) + "(G; Ã_" + std::to_string(t.degree() + 1) +
                              ") = " + gh.groups[z.q].to_string() + ", injectivity unknown"};
  } catch (const CapExceeded& e) {
    return {std::nullopt, via + "; " + e.what()};
  }
}

// ---------------------------------------------------------------------------

namespace {

AbelianGroup group_of(const std::vector<Integer>& moduli) {
  return AbelianGroup(moduli.size(), ExactMatrix::diagonal(moduli.size(), moduli.size(), moduli));
}

ExactMatrix matrix_of(const std::vector<std::vector<Integer>>& cols, std::size_t rows) {
  std::vector<SparseVec> c;
  for (const auto& col : cols) c.push_back(sparse_from_dense(col));
  return ExactMatrix::from_columns(rows, std::move(c));
}

}  // namespace

ConnectingChain connecting_chain(unsigned n, unsigned p, std::size_t degree_cap) {
  ConnectingChain out;
  out.n = n;
  out.p = p;
  if (n < 2) {
    out.verdict = "empty chain";
    return out;
  }
  Integer m = factorial(n - 1);
  try {
    auto ctx = make_shift_context(n, p, n + 1);
    for (unsigned j = 1; j + 1 <= n; ++j) {
      TiModule tj(ctx, j), tk(ctx, j + 1);
      TiHomology src(tj, n - j, degree_cap);
      TiHomology tgt(tk, n - j - 1, degree_cap);
      ConnectingMap cm;
      cm.j = j;
      cm.source = src.result();
      cm.target = tgt.result();
      std::vector<std::vector<Integer>> cols;
      for (std::size_t a = 0; a < src.generator_count(); ++a)
        cols.push_back(tgt.coordinates(connecting_step(*ctx, src.generator_cycle(a))));
      cm.matrix.assign(tgt.generator_count(), std::vector<Integer>(src.generator_count()));
      for (std::size_t a = 0; a < cols.size(); ++a)
        for (std::size_t b = 0; b < cols[a].size(); ++b) cm.matrix[b][a] = cols[a][b];
      auto kc = kernel_cokernel(group_of(src.moduli()), group_of(tgt.moduli()),
                                matrix_of(cols, tgt.generator_count()));
      cm.kernel = kc.kernel;
      cm.cokernel = kc.cokernel;
      cm.invertible_localized = localize(kc.kernel, m).is_zero() && localize(kc.cokernel, m).is_zero();
      out.maps.push_back(std::move(cm));
    }
  } catch (const CapExceeded& e) {
    out.truncated = true;
    out.verdict = "truncated after " + std::to_string(out.maps.size()) + " maps: " + e.what();
    return out;
  }
  std::string bad;
  for (const auto& cm : out.maps)
    if (!cm.invertible_localized)
      bad += (bad.empty() ? "" : "; ") + std::string("map ") + std::to_string(cm.j) + " has kernel " +
             cm.kernel.to_string() + " and cokernel " + cm.cokernel.to_string();
  out.verdict = bad.empty() ? "every map is invertible after inverting " + m.get_str()
                            : "not invertible after inverting " + m.get_str() + ": " + bad;
  return out;
}

// ---------------------------------------------------------------------------

CrossBoundary boundary_of_cross_cycle(const std::shared_ptr<const ShiftContext>& ctx,
                                      const std::vector<unsigned>& alphas, std::size_t direct_limit) {
  const unsigned n = ctx->n;
  check_units(alphas, n, ctx->p);
  if (ctx->complex.k_max < 2) throw CapExceeded("boundary_of_cross_cycle: needs Ã through degree 2");
  CrossBoundary out;
  out.alphas = alphas;
  auto gens = diagonal_generators(*ctx, alphas);
  const SparseVec one{{0, Integer(1)}};
  BarChain c = cross_cycle(*ctx, gens, 0, one);
  if (n > 0 && !bar_boundary(*ctx, c).is_zero()) throw Error("boundary_of_cross_cycle: not a cycle");

  VectorSpace v(n, ctx->p);
  std::uint32_t en = v.basis(n);
  out.lhs = n == 0 ? BarChain{} : connecting_step(*ctx, c, en);
  out.lhs.q = n - 1;
  out.lhs.j = 1;

  ColumnTuple t;
  t = t.append(en);
  SparseVec e{{ctx->complex.index_of(1, t), Integer(1)}};
  SparseVec m = difference(e, ctx->act(gens[n - 1], 1, e));
  if (n % 2 == 1) m = negated(m);
  out.rhs = cross_cycle(*ctx, std::vector<std::uint32_t>(gens.begin(), gens.end() - 1), 1, m);
  out.chain_equal = out.lhs == out.rhs;
  TiModule t1(ctx, 1);
  out.equal = class_is_zero(t1, bar_difference(out.lhs, out.rhs), direct_limit);
  out.lhs_zero = class_is_zero(t1, out.lhs, direct_limit);
  return out;
}

// ---------------------------------------------------------------------------

SparseVec symbols_of_chain(const ShiftContext& ctx, const E2Corner& e, const SparseVec& y) {
  const unsigned n = ctx.n, p = ctx.p;
  VectorSpace v(n, p);
  SparseVec out;
  for (const auto& [idx, coef] : y) {
    const ColumnTuple& t = ctx.complex.bases.at(n + 1)[idx];
    ColumnTuple first;
    for (unsigned i = 0; i < n; ++i) first = first.append(t[i]);
    GroupElement b(n, p, first);
    FpVector a = b.inverse().apply(v.decode(t[n]));
    std::vector<unsigned> alpha;
    for (unsigned i = 0; i < n; ++i) alpha.push_back(a[i].value());
    sparse_axpy(out, coef, e.symbol(alpha));
  }
  return out;
}

SparseVec corner_class(const ShiftContext& ctx, const E2Corner& e, const SparseVec& x_n) {
  return symbols_of_chain(ctx, e, ctx.lift(ctx.n, x_n));
}

IteratedBoundary iterated_boundary(const ShiftContext& ctx, const E2Corner& e,
                                   const std::vector<unsigned>& alphas) {
  const unsigned n = ctx.n, p = ctx.p;
  check_units(alphas, n, p);
  if (e.n != n || e.p != p) throw FieldMismatch("iterated_boundary: corner for a different (n, p)");
  if (ctx.complex.k_max < n + 1) throw CapExceeded("iterated_boundary: needs Ã through degree n+1");
  const ChainComplex& c = ctx.complex;
  VectorSpace v(n, p);
  auto gens = diagonal_generators(ctx, alphas);

  IteratedBoundary out;
  out.alphas = alphas;
  out.x.push_back(SparseVec{{0, Integer(1)}});
  ColumnTuple en;
  en = en.append(v.basis(n));
  SparseVec tilde{{c.index_of(1, en), Integer(1)}};

  auto prepend_all = [&](const SparseVec& x, unsigned k, std::uint32_t vec, bool append) {
    SparseVec out_vec;
    for (const auto& [idx, coef] : x) {
      ColumnTuple t = append ? c.bases[k][idx].append(vec) : c.bases[k][idx].prepend(vec);
      ColumnTuple ordered = t;
      int sign = sort_columns(t);
      if (!c.contains(k + 1, t))
        throw NotFound("iterated_boundary: " + tuple_to_string(ordered, v) + " is not in general position");
      if (sign == 0) sign = 1;
      out_vec.emplace_back(c.index_of(k + 1, t), sign * coef);
    }
    sparse_normalize(out_vec);
    return out_vec;
  };

  for (unsigned i = 1; i <= n; ++i) {
    SparseVec xi = difference(tilde, ctx.act(gens[n - i], i, tilde));
    if ((n - i + 1) % 2 == 1) xi = negated(xi);
    if (!c.d[i].apply(xi).empty()) throw CompositionError("iterated_boundary: x_i is not a cycle");
    out.x.push_back(xi);
    if (i == n) break;
    tilde = prepend_all(xi, i, v.basis(n - i), false);
    if (c.d[i + 1].apply(tilde) != xi) throw Error("iterated_boundary: lift does not map to x_i");
    for (unsigned j = 1; j < n - i; ++j)
      if (ctx.act(gens[j - 1], i + 1, tilde) != tilde) out.lifts_fixed = false;
  }

  out.lift = prepend_all(out.x[n], n, encode_values(v, alphas), true);
  if (n % 2 == 1) out.lift = negated(out.lift);
  if (c.d[n + 1].apply(out.lift) != out.x[n]) throw Error("iterated_boundary: final lift does not map to x_n");
  out.symbols = symbols_of_chain(ctx, e, out.lift);

  for (unsigned s = 0; s < (1u << n); ++s) {
    std::vector<unsigned> beta = alphas;
    for (unsigned i = 0; i < n; ++i)
      if (s & (1u << i)) beta[i] = 1;
    sparse_axpy(out.formula, Integer(parity_sign(std::popcount(s))), e.symbol(beta));
  }
  out.literal_equal = out.symbols == out.formula;
  out.class_equal = e.reduces_to_zero(difference(out.symbols, out.formula));
  SparseVec sum = out.symbols;
  sparse_axpy(sum, Integer(1), out.formula);
  out.class_equal_up_to_sign = out.class_equal || e.reduces_to_zero(sum);
  return out;
}

IteratedBoundary iterated_boundary(unsigned n, unsigned p, const std::vector<unsigned>& alphas) {
  auto ctx = make_shift_context(n, p, n + 1);
  return iterated_boundary(*ctx, e2_corner(n, p), alphas);
}

// ---------------------------------------------------------------------------

StableQuotient::StableQuotient(std::shared_ptr<const ShiftContext> ctx, std::size_t limit)
    : ctx_(std::move(ctx)) {
  const unsigned n = ctx_->n, p = ctx_->p;
  if (n < 1) throw Error("StableQuotient: needs n >= 1");
  t0_ = std::make_unique<TiModule>(ctx_, 0);
  hn_ = std::make_unique<TiHomology>(*t0_, n, limit);
  std::vector<SparseVec> rel;
  const auto& mod = hn_->moduli();
  for (std::size_t a = 0; a < mod.size(); ++a)
    if (mod[a] != 0) rel.push_back(SparseVec{{static_cast<std::uint32_t>(a), mod[a]}});
  if (n >= 2) {
    small_ = make_shift_context(n - 1, p, 0);
    s0_ = std::make_unique<TiModule>(small_, 0);
    hs_ = std::make_unique<TiHomology>(*s0_, n, limit);
    auto embed = [&](std::uint32_t e) {
      const GroupElement& g = small_->group.element(e);
      std::vector<std::vector<long>> rows(n, std::vector<long>(n, 0));
      for (unsigned r = 0; r + 1 < n; ++r)
        for (unsigned c = 0; c + 1 < n; ++c) rows[r][c] = g.entry(r, c).value();
      rows[n - 1][n - 1] = 1;
      return ctx_->group.index_of(GroupElement::from_rows(rows, p));
    };
    for (std::size_t a = 0; a < hs_->generator_count(); ++a) {
      BarChain z = hs_->generator_cycle(a);
      BarChain big;
      big.q = z.q;
      for (const auto& [t, m] : z.terms) {
        std::vector<std::uint32_t> u;
        for (auto e : t) u.push_back(embed(e));
        big.add(u, Integer(1), m);
      }
      rel.push_back(sparse_from_dense(hn_->coordinates(big)));
    }
  }
  std::size_t gens = hn_->generator_count();
  group_ = AbelianGroup(gens, ExactMatrix::from_columns(gens, std::move(rel)));
}

std::vector<Integer> StableQuotient::canonical(const BarChain& z) const {
  return group_.canonical(hn_->coordinates(z));
}

bool StableQuotient::is_zero(const BarChain& z) const {
  return group_.is_zero(sparse_from_dense(hn_->coordinates(z)));
}

FactoredBoundary factored_boundary(unsigned n, unsigned p, std::size_t limit) {
  if (n < 2) throw Error("factored_boundary: needs n >= 2");
  FactoredBoundary out;
  out.n = n;
  out.p = p;
  auto ctx = make_shift_context(n, p, 2);
  StableQuotient sq(ctx, limit);
  TiModule t1(ctx, 1);
  TiHomology target(t1, n - 1, limit);
  out.h_n = sq.h_n();
  out.quotient = sq.structure();

  std::uint32_t en = VectorSpace(n, p).basis(n);
  std::vector<std::vector<Integer>> cols;
  for (std::size_t a = 0; a < sq.homology().generator_count(); ++a)
    cols.push_back(target.coordinates(connecting_step(*ctx, sq.homology().generator_cycle(a), en)));
  ExactMatrix map = matrix_of(cols, target.generator_count());
  AbelianGroup tg = group_of(target.moduli());
  const ExactMatrix& qrel = sq.group().relations();
  for (std::size_t c = 0; c < qrel.cols(); ++c)
    if (!tg.is_zero(map.apply(qrel.column(c))))
      throw WellDefinednessFailure("factored_boundary: the boundary does not kill the image of H_n(GL_{n-1})");
  auto kc = kernel_cokernel(sq.group(), tg, map);
  out.kernel = kc.kernel;
  out.kernel_localized = localize(kc.kernel, factorial(n - 1));
  out.injective_localized = out.kernel_localized.is_zero();
  return out;
}

}  // namespace gphom
