#include "gphom/milnor.hpp"

#include <algorithm>

#include "gphom/errors.hpp"

namespace gphom {

namespace {

void check_symbol(const std::vector<unsigned>& alpha, unsigned p) {
  for (unsigned a : alpha)
    if (a == 0 || a >= p) throw NotAUnit(std::to_string(a) + " is not a unit of F_" + std::to_string(p));
}

std::vector<std::vector<unsigned>> unit_tuples(unsigned n, unsigned p) {
  std::vector<std::vector<unsigned>> out;
  std::vector<unsigned> a(n, 1);
  for (;;) {
    out.push_back(a);
    unsigned j = n;
    while (j > 0 && a[j - 1] == p - 1) a[--j] = 1;
    if (j == 0) break;
    ++a[j - 1];
  }
  return out;
}

}  // namespace

std::string symbol_text(const std::vector<unsigned>& alpha) {
  std::string s = "{";
  for (std::size_t i = 0; i < alpha.size(); ++i) s += (i ? "," : "") + std::to_string(alpha[i]);
  return s + "}";
}

SymbolicElement SymbolicElement::symbol(const std::vector<unsigned>& alpha, unsigned p) {
  SymbolicElement x(static_cast<unsigned>(alpha.size()), p);
  x.add(alpha, Integer(1));
  return x;
}

void SymbolicElement::add(const std::vector<unsigned>& alpha, const Integer& c) {
  if (alpha.size() != n_) throw Error("SymbolicElement: symbol of the wrong length");
  check_symbol(alpha, p_);
  if (c == 0) return;
  auto [it, fresh] = terms_.emplace(alpha, c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

SymbolicElement SymbolicElement::operator+(const SymbolicElement& o) const {
  if (n_ != o.n_ || p_ != o.p_) throw FieldMismatch("SymbolicElement: mismatched (n, p)");
  SymbolicElement r = *this;
  for (const auto& [a, c] : o.terms_) r.add(a, c);
  return r;
}

SymbolicElement SymbolicElement::operator-(const SymbolicElement& o) const {
  if (n_ != o.n_ || p_ != o.p_) throw FieldMismatch("SymbolicElement: mismatched (n, p)");
  SymbolicElement r = *this;
  for (const auto& [a, c] : o.terms_) r.add(a, -c);
  return r;
}

std::string SymbolicElement::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  for (const auto& [a, c] : terms_) {
    Integer m = abs(c);
    if (s.empty())
      s += c < 0 ? "-" : "";
    else
      s += c < 0 ? " - " : " + ";
    if (m != 1) s += m.get_str();
    s += symbol_text(a);
  }
  return s;
}

// ---------------------------------------------------------------------------

std::size_t MilnorPresentation::index_of(const std::vector<unsigned>& alpha) const {
  if (alpha.size() != n) throw Error("MilnorPresentation: symbol of the wrong length");
  check_symbol(alpha, p);
  std::size_t x = 0;
  for (unsigned a : alpha) x = x * (p - 1) + (a - 1);
  return x;
}

SparseVec MilnorPresentation::vector(const SymbolicElement& x) const {
  if (x.n() != n || x.p() != p) throw FieldMismatch("MilnorPresentation: element over another (n, p)");
  SparseVec v;
  for (const auto& [a, c] : x.terms()) v.emplace_back(static_cast<std::uint32_t>(index_of(a)), c);
  sparse_normalize(v);
  return v;
}

std::vector<Integer> MilnorPresentation::canonical(const SymbolicElement& x) const {
  return group.canonical(vector(x));
}

bool MilnorPresentation::is_zero(const SymbolicElement& x) const { return group.is_zero(vector(x)); }

SymbolicElement MilnorPresentation::reduce(const SymbolicElement& x) const {
  auto c = canonical(x);
  SymbolicElement out(n, p);
  for (std::size_t j = 0; j < c.size(); ++j) {
    if (c[j] == 0) continue;
    for (const auto& [idx, v] : group.generator(j)) out.add(symbols[idx], c[j] * v);
  }
  return out;
}

MilnorPresentation milnor_group(unsigned n, unsigned p) {
  if (!is_prime(p)) throw NotPrime(std::to_string(p) + " is not prime");
  if (n == 0) throw Error("milnor_group: needs n >= 1");
  MilnorPresentation k;
  k.n = n;
  k.p = p;
  std::size_t count = 1;
  for (unsigned i = 0; i < n; ++i) {
    count *= p - 1;
    if (count > caps().max_basis) throw CapExceeded("milnor_group: (p-1)^n symbols");
  }
  k.symbols = unit_tuples(n, p);

  std::vector<SparseVec> rel;
  auto idx = [&](const std::vector<unsigned>& a) { return static_cast<std::uint32_t>(k.index_of(a)); };
  for (const auto& base : k.symbols)
    for (unsigned slot = 0; slot < n; ++slot) {
      if (base[slot] != 1) continue;  // each choice of the other slots once
      for (unsigned a = 1; a < p; ++a)
        for (unsigned b = 1; b < p; ++b) {
          auto s_ab = base, s_a = base, s_b = base;
          s_ab[slot] = (a * b) % p;
          s_a[slot] = a;
          s_b[slot] = b;
          SparseVec r{{idx(s_ab), Integer(1)}};
          sparse_axpy(r, Integer(-1), SparseVec{{idx(s_a), Integer(1)}});
          sparse_axpy(r, Integer(-1), SparseVec{{idx(s_b), Integer(1)}});
          if (!r.empty()) rel.push_back(std::move(r));
        }
    }
  k.multilinearity_count = rel.size();
  for (const auto& s : k.symbols)
    for (unsigned i = 0; i + 1 < n; ++i)
      if (s[i] != 1 && (s[i] + s[i + 1]) % p == 1) rel.push_back(SparseVec{{idx(s), Integer(1)}});
  k.steinberg_count = rel.size() - k.multilinearity_count;
  k.relations = ExactMatrix::from_columns(k.symbols.size(), std::move(rel));
  k.group = AbelianGroup(k.symbols.size(), k.relations);
  return k;
}

std::size_t milnor_k2_order_bruteforce(unsigned p) {
  if (!is_prime(p)) throw NotPrime(std::to_string(p) + " is not prime");
  if (p == 2) return 1;
  const unsigned m = p - 1;
  unsigned g = 2;
  for (; g < p; ++g) {
    unsigned x = 1, ord = 0;
    do {
      x = x * g % p;
      ++ord;
    } while (x != 1);
    if (ord == m) break;
  }
  std::vector<unsigned> dlog(p, 0);
  for (unsigned e = 0, x = 1; e < m; ++e, x = x * g % p) dlog[x] = e;
  std::size_t count = 0;
  for (unsigned c = 0; c < m; ++c) {
    bool ok = true;
    for (unsigned a = 2; a < p && ok; ++a) {
      unsigned b = (p + 1 - a) % p;
      if (static_cast<unsigned long>(dlog[a]) * dlog[b] * c % m != 0) ok = false;
    }
    if (ok) ++count;
  }
  return count;
}

// ---------------------------------------------------------------------------

SymbolicElement from_corner(const E2Corner& e, const SparseVec& x) {
  SymbolicElement s(e.n, e.p);
  for (const auto& [idx, c] : x) s.add(e.symbols.at(idx), c);
  return s;
}

SparseVec to_corner(const E2Corner& e, const SymbolicElement& x) {
  SparseVec v;
  for (const auto& [a, c] : x.terms()) v.emplace_back(e.index_of(a), c);
  sparse_normalize(v);
  return v;
}

void check_symbol_map(const E2Corner& e, const MilnorPresentation& k) {
  if (e.n != k.n || e.p != k.p) throw FieldMismatch("symbol map: corner and Milnor group over different (n, p)");
  for (std::size_t c = 0; c < e.relations.cols(); ++c) {
    SymbolicElement r = from_corner(e, e.relations.column(c));
    if (!k.is_zero(r))
      throw WellDefinednessFailure("symbol map: relation " + r.to_string() + " survives in K^M_" +
                                   std::to_string(k.n) + "(F_" + std::to_string(k.p) + ")");
  }
}

SymbolicElement e2_to_milnor(const SymbolicElement& x, const E2Corner& e, const MilnorPresentation& k) {
  check_symbol_map(e, k);
  return k.reduce(x);
}

// ---------------------------------------------------------------------------

CrossProductClass cross_product_class(const std::shared_ptr<const ShiftContext>& ctx,
                                      const std::vector<unsigned>& alphas, const StableQuotient* quotient) {
  if (alphas.size() != ctx->n) throw Error("cross_product_class: expected " + std::to_string(ctx->n) + " units");
  check_symbol(alphas, ctx->p);
  CrossProductClass out;
  out.alphas = alphas;
  out.cycle = cross_cycle(*ctx, diagonal_generators(*ctx, alphas), 0, SparseVec{{0, Integer(1)}});
  out.is_cycle = out.cycle.q == 0 || bar_boundary(*ctx, out.cycle).is_zero();
  if (quotient) {
    out.quotient_class = quotient->canonical(out.cycle);
    out.quotient_note = "H_n(GL_n)/H_n(GL_{n-1}) = " + quotient->structure().to_string();
  }
  return out;
}

CrossProductClass cross_product_class(unsigned n, unsigned p, const std::vector<unsigned>& alphas) {
  auto ctx = make_shift_context(n, p, 0);
  std::unique_ptr<StableQuotient> q;
  std::string note;
  try {
    q = std::make_unique<StableQuotient>(ctx);
  } catch (const CapExceeded& e) {
    note = e.what();
  }
  CrossProductClass out = cross_product_class(ctx, alphas, q.get());
  if (!q) out.quotient_note = note;
  return out;
}

// ---------------------------------------------------------------------------

std::string to_string(RoundTripVerdict v) {
  switch (v) {
    case RoundTripVerdict::pass: return "pass";
    case RoundTripVerdict::degenerate_pass: return "degenerate";
    case RoundTripVerdict::fail: return "fail";
  }
  return "fail";
}

bool RoundTripReport::all_pass() const {
  return !entries.empty() && std::all_of(entries.begin(), entries.end(), [](const RoundTripEntry& e) {
    return e.verdict != RoundTripVerdict::fail;
  });
}

RoundTripReport roundtrip_check(unsigned n, unsigned p) {
  RoundTripReport out;
  out.n = n;
  out.p = p;
  auto ctx = make_shift_context(n, p, n + 1);
  E2Corner e = e2_corner(n, p);
  MilnorPresentation k = milnor_group(n, p);
  out.milnor = k.structure();
  out.corner = e.structure();
  std::string map_error;
  try {
    check_symbol_map(e, k);
  } catch (const WellDefinednessFailure& err) {
    map_error = err.what();
  }
  VectorSpace v(n, p);

  for (const auto& alpha : unit_tuples(n, p)) {
    RoundTripEntry entry(n, p);
    entry.alphas = alpha;
    try {
      entry.original = k.reduce(SymbolicElement::symbol(alpha, p));
      BarChain z = cross_cycle(*ctx, diagonal_generators(*ctx, alpha), 0, SparseVec{{0, Integer(1)}});
      for (unsigned j = 0; j < n && !z.is_zero(); ++j) z = connecting_step(*ctx, z, v.basis(n - j));
      SparseVec x_n = z.is_zero() ? SparseVec{} : z.terms.at({});
      entry.corner = x_n.empty() ? SparseVec{} : corner_class(*ctx, e, x_n);
      if (!map_error.empty()) throw WellDefinednessFailure(map_error);
      entry.image = k.reduce(from_corner(e, entry.corner));
      if (entry.image == entry.original)
        entry.verdict = entry.original.is_zero() ? RoundTripVerdict::degenerate_pass : RoundTripVerdict::pass;
      SparseVec diff = entry.corner;
      sparse_axpy(diff, Integer(-1), e.symbol(alpha));
      entry.reverse_equal = e.reduces_to_zero(diff);
    } catch (const Error& err) {
      entry.error = err.what();
      entry.verdict = RoundTripVerdict::fail;
    }
    out.entries.push_back(std::move(entry));
  }
  for (const auto& s : e.symbols)
    if (std::find(s.begin(), s.end(), 1u) != s.end() && !e.reduces_to_zero(e.symbol(s)))
      out.one_entry_survivors.push_back(s);
  return out;
}

}  // namespace gphom
