#include "gphom/grouphomology.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include "gphom/errors.hpp"

namespace gphom {

namespace {

constexpr std::uint32_t kUnset = UINT32_MAX;

std::size_t checked_pow(std::size_t base, unsigned e, std::size_t factor, std::size_t cap,
                        const std::string& what) {
  std::size_t r = factor;
  for (unsigned i = 0; i < e; ++i) {
    if (base != 0 && r > cap / base) throw CapExceeded(what, "degree " + std::to_string(i));
    r *= base;
  }
  if (r > cap) throw CapExceeded(what);
  return r;
}

// A subgroup of a MatrixGroup, indexed locally.
struct LocalGroup {
  const MatrixGroup* g = nullptr;
  std::vector<std::uint32_t> elems;  // group indices
  std::vector<std::uint32_t> local;  // group index -> local index
  std::vector<std::uint32_t> nonid;  // local indices of non-identity elements
  std::vector<std::uint32_t> pos;    // local index -> position in nonid
  std::uint32_t id_local = 0;

  LocalGroup(const MatrixGroup& group, std::vector<std::uint32_t> members) : g(&group), elems(std::move(members)) {
    local.assign(group.order(), kUnset);
    for (std::uint32_t i = 0; i < elems.size(); ++i) local[elems[i]] = i;
    id_local = local.at(group.identity_index());
    if (id_local == kUnset) throw ActionClosureError("subgroup does not contain the identity");
    pos.assign(elems.size(), kUnset);
    for (std::uint32_t i = 0; i < elems.size(); ++i)
      if (i != id_local) {
        pos[i] = static_cast<std::uint32_t>(nonid.size());
        nonid.push_back(i);
      }
  }
  std::size_t order() const { return elems.size(); }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
    std::uint32_t r = local[g->multiply(elems[a], elems[b])];
    if (r == kUnset) throw ActionClosureError("subgroup is not closed under products");
    return r;
  }
  std::uint32_t inv(std::uint32_t a) const { return local[g->inverse(elems[a])]; }
};

using LocalAct = std::function<SignedIndex(std::uint32_t, std::uint32_t)>;

void decode(std::size_t t, unsigned q, std::size_t base, std::vector<std::uint32_t>& digits) {
  digits.assign(q, 0);
  for (unsigned i = q; i-- > 0;) {
    digits[i] = static_cast<std::uint32_t>(t % base);
    t /= base;
  }
}

std::size_t encode(const std::vector<std::uint32_t>& digits, std::size_t base) {
  std::size_t t = 0;
  for (auto x : digits) t = t * base + x;
  return t;
}

BarComplexSlice build_bar(const LocalGroup& h, std::size_t rank, const LocalAct& act,
                          const std::vector<char>& torsion, unsigned q_max) {
  const std::size_t base = h.nonid.size();
  const std::string what = "bar complex over a group of order " + std::to_string(h.order());
  BarComplexSlice out;
  out.q_max = q_max;
  out.has_torsion = std::any_of(torsion.begin(), torsion.end(), [](char c) { return c != 0; });
  std::vector<std::size_t> tuples;
  for (unsigned q = 0; q <= q_max + 1; ++q) {
    tuples.push_back(checked_pow(base, q, 1, caps().max_basis, what));
    out.ranks.push_back(checked_pow(base, q, rank, caps().max_basis, what));
  }
  out.d.emplace_back(0, out.ranks[0]);
  std::vector<std::uint32_t> digits, face;
  for (unsigned q = 1; q <= q_max + 1; ++q) {
    std::vector<SparseVec> cols(out.ranks[q]);
    for (std::size_t t = 0; t < tuples[q]; ++t) {
      decode(t, q, base, digits);
      std::size_t first = t % tuples[q - 1];
      std::size_t last = t / base;
      SignedIndex g1inv{h.inv(h.nonid[digits[0]]), 1};
      for (std::uint32_t b = 0; b < rank; ++b) {
        SparseVec& col = cols[t * rank + b];
        SignedIndex r = act(g1inv.index, b);
        col.emplace_back(static_cast<std::uint32_t>(first * rank + r.index), Integer(r.sign));
        for (unsigned i = 0; i + 1 < q; ++i) {
          std::uint32_t prod = h.mul(h.nonid[digits[i]], h.nonid[digits[i + 1]]);
          if (prod == h.id_local) continue;
          face.clear();
          for (unsigned j = 0; j < q; ++j) {
            if (j == i) {
              face.push_back(h.pos[prod]);
            } else if (j != i + 1) {
              face.push_back(digits[j]);
            }
          }
          col.emplace_back(static_cast<std::uint32_t>(encode(face, base) * rank + b),
                           Integer((i + 1) % 2 ? -1 : 1));
        }
        col.emplace_back(static_cast<std::uint32_t>(last * rank + b), Integer(q % 2 ? -1 : 1));
      }
    }
    out.d.push_back(ExactMatrix::from_columns(out.ranks[q - 1], std::move(cols)));
  }
  for (unsigned q = 0; q <= q_max + 1; ++q) {
    std::vector<SparseVec> rel;
    if (out.has_torsion)
      for (std::size_t t = 0; t < tuples[q]; ++t)
        for (std::uint32_t b = 0; b < rank; ++b)
          if (torsion[b]) rel.push_back(SparseVec{{static_cast<std::uint32_t>(t * rank + b), Integer(2)}});
    out.relations.push_back(ExactMatrix::from_columns(out.ranks[q], std::move(rel)));
  }
  return out;
}

std::vector<std::uint32_t> all_indices(const MatrixGroup& g) {
  std::vector<std::uint32_t> v(g.order());
  for (std::uint32_t i = 0; i < v.size(); ++i) v[i] = i;
  return v;
}

std::vector<char> torsion_flags(const GModule& m) {
  std::vector<char> t(m.rank(), 0);
  for (std::uint32_t b = 0; b < m.rank(); ++b) t[b] = m.is_torsion(b);
  return t;
}

BarComplexSlice direct_bar(const GModule& m, unsigned q_max) {
  LocalGroup h(m.group(), all_indices(m.group()));
  return build_bar(h, m.rank(), [&](std::uint32_t g, std::uint32_t b) { return m.act(g, b); },
                   torsion_flags(m), q_max);
}

bool choose_direct(const GModule& m, unsigned q_max, HomologyMethod method) {
  if (method != HomologyMethod::automatic) return method == HomologyMethod::direct;
  try {
    checked_pow(m.group().order() - 1, q_max + 1, m.rank(), kDirectBarLimit, "");
    return true;
  } catch (const CapExceeded&) {
    return false;
  }
}

struct OrbitData {
  LocalGroup stab;
  std::vector<int> character;  // local index -> sign
};

OrbitData orbit_data(const GModule& m, std::uint32_t rep, const std::vector<std::uint32_t>& stabilizer) {
  OrbitData o{LocalGroup(m.group(), stabilizer), {}};
  for (auto e : stabilizer) o.character.push_back(m.act(e, rep).sign);
  return o;
}

BarComplexSlice orbit_bar(const OrbitData& o, bool torsion, unsigned q_max) {
  return build_bar(
      o.stab, 1,
      [&](std::uint32_t h, std::uint32_t) { return SignedIndex{0, torsion ? 1 : o.character[h]}; },
      std::vector<char>{static_cast<char>(torsion)}, q_max);
}

ExactMatrix block_diagonal(const std::vector<const ExactMatrix*>& blocks) {
  std::size_t rows = 0;
  std::vector<SparseVec> cols;
  for (const ExactMatrix* b : blocks) {
    for (const auto& c : b->columns()) {
      SparseVec s;
      for (const auto& [r, v] : c) s.emplace_back(static_cast<std::uint32_t>(r + rows), v);
      cols.push_back(std::move(s));
    }
    rows += b->rows();
  }
  return ExactMatrix::from_columns(rows, std::move(cols));
}

std::vector<std::vector<Integer>> induced_on(const HomologyPresentation& p, const ExactMatrix& f) {
  return induced_map(p, p, f);
}

}  // namespace

// ---------------------------------------------------------------------------
// GModule

GModule::GModule(const MatrixGroup& g, std::size_t rank, const SignedAction& act,
                 std::vector<char> torsion, std::vector<std::string> labels)
    : group_(&g), rank_(rank), torsion_(std::move(torsion)), labels_(std::move(labels)) {
  if (!torsion_.empty() && torsion_.size() != rank_)
    throw CompositionError("GModule: torsion flags have the wrong length");
  if (!labels_.empty() && labels_.size() != rank_)
    throw CompositionError("GModule: labels have the wrong length");
  if (rank_ != 0 && g.order() > caps().max_nonzeros / rank_)
    throw CapExceeded("GModule action table of " + std::to_string(g.order()) + " x " +
                      std::to_string(rank_));
  image_.resize(g.order() * rank_);
  sign_.resize(g.order() * rank_);
  for (std::uint32_t e = 0; e < g.order(); ++e)
    for (std::uint32_t b = 0; b < rank_; ++b) {
      SignedIndex r = act(e, b);
      if (r.index >= rank_ || (r.sign != 1 && r.sign != -1))
        throw ActionClosureError("GModule: image is not a signed basis element");
      image_[e * rank_ + b] = r.index;
      sign_[e * rank_ + b] = static_cast<signed char>(r.sign);
    }
}

GModule GModule::trivial(const MatrixGroup& g) {
  return GModule(g, 1, [](std::uint32_t, std::uint32_t) { return SignedIndex{0, 1}; }, {}, {"1"});
}

GModule GModule::from_complex(const MatrixGroup& g, const ChainComplex& c, unsigned k) {
  if (g.n() != c.n || g.p() != c.p)
    throw FieldMismatch("GModule::from_complex: group acts on F_" + std::to_string(g.p()) + "^" +
                        std::to_string(g.n()) + ", complex lives over F_" + std::to_string(c.p) +
                        "^" + std::to_string(c.n));
  const auto& basis = c.bases.at(k);
  auto act = [&](std::uint32_t e, std::uint32_t x) -> SignedIndex {
    ColumnTuple t = basis[x];
    for (unsigned j = 0; j < t.k; ++j) t.cols[j] = g.act(e, t.cols[j]);
    int sign = 1;
    if (c.unordered) {
      sign = sort_columns(t);
      if (sign == 0) sign = 1;
    }
    return {c.index_of(k, t), sign};
  };
  std::vector<std::string> labels;
  VectorSpace v = c.space();
  for (const auto& t : basis) labels.push_back(tuple_to_string(t, v));
  return GModule(g, basis.size(), act, c.torsion.at(k), std::move(labels));
}

bool GModule::has_torsion() const {
  return std::any_of(torsion_.begin(), torsion_.end(), [](char c) { return c != 0; });
}

std::string GModule::label(std::uint32_t b) const {
  return labels_.empty() ? "b" + std::to_string(b) : labels_.at(b);
}

void GModule::validate() const {
  const MatrixGroup& g = *group_;
  for (std::uint32_t b = 0; b < rank_; ++b) {
    SignedIndex r = act(g.identity_index(), b);
    if (r.index != b || r.sign != 1) throw ActionClosureError("GModule: identity acts nontrivially");
  }
  std::vector<char> seen(rank_);
  for (std::uint32_t x = 0; x < g.order(); ++x) {
    std::fill(seen.begin(), seen.end(), 0);
    for (std::uint32_t b = 0; b < rank_; ++b) {
      SignedIndex r = act(x, b);
      if (seen[r.index]) throw ActionClosureError("GModule: an element does not act bijectively");
      seen[r.index] = 1;
      if (is_torsion(b) != is_torsion(r.index))
        throw ActionClosureError("GModule: action mixes free and torsion summands");
    }
    for (auto s : g.generators()) {
      std::uint32_t sx = g.multiply(s, x);
      for (std::uint32_t b = 0; b < rank_; ++b) {
        SignedIndex inner = act(x, b);
        SignedIndex outer = act(s, inner.index);
        SignedIndex direct = act(sx, b);
        int sign = outer.sign * inner.sign;
        bool same = direct.index == outer.index &&
                    (direct.sign == sign || is_torsion(direct.index));
        if (!same) throw ActionClosureError("GModule: action is not a homomorphism");
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Bar complexes

HomologyResult BarComplexSlice::homology(unsigned q) const {
  if (q > q_max) throw Error("BarComplexSlice: degree " + std::to_string(q) + " exceeds q_max");
  if (!has_torsion) return homology_at(d[q + 1], d[q]);
  ExactMatrix rel_out = q == 0 ? ExactMatrix(0, 0) : relations[q - 1];
  return module_homology(d[q + 1], d[q], relations[q], rel_out);
}

BarComplexSlice bar_complex(const GModule& m, unsigned q_max) { return direct_bar(m, q_max); }

bool ShapiroSummand::sign_twist() const {
  return std::any_of(character.begin(), character.end(), [](int s) { return s < 0; });
}

std::vector<ShapiroSummand> shapiro_reduce(const GModule& m) {
  auto d = orbit_decompose(m.rank(), m.group(), [&](std::uint32_t g, std::uint32_t b) { return m.act(g, b); });
  std::vector<ShapiroSummand> out;
  std::map<std::tuple<std::vector<std::uint32_t>, std::vector<int>, bool>, std::size_t> where;
  for (const auto& o : d.orbits) {
    ShapiroSummand s;
    s.stabilizer = o.stabilizer;
    s.torsion = m.is_torsion(o.representative);
    for (auto e : o.stabilizer) s.character.push_back(s.torsion ? 1 : m.act(e, o.representative).sign);
    s.representative = o.representative;
    auto key = std::make_tuple(s.stabilizer, s.character, s.torsion);
    auto it = where.find(key);
    if (it != where.end()) {
      ++out[it->second].multiplicity;
      continue;
    }
    s.multiplicity = 1;
    where.emplace(std::move(key), out.size());
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<HomologyResult> summand_homology(const MatrixGroup& g, const ShapiroSummand& s,
                                             unsigned q_max) {
  OrbitData o{LocalGroup(g, s.stabilizer), s.character};
  BarComplexSlice b = orbit_bar(o, s.torsion, q_max);
  std::vector<HomologyResult> out;
  for (unsigned q = 0; q <= q_max; ++q) out.push_back(b.homology(q));
  return out;
}

GroupHomology group_homology(const GModule& m, unsigned q_max, HomologyMethod method) {
  GroupHomology out;
  if (choose_direct(m, q_max, method)) {
    out.method = "direct";
    BarComplexSlice b = direct_bar(m, q_max);
    for (unsigned q = 0; q <= q_max; ++q) out.groups.push_back(b.homology(q));
    return out;
  }
  out.method = "shapiro";
  out.groups.assign(q_max + 1, HomologyResult{});
  for (const auto& s : shapiro_reduce(m)) {
    auto h = summand_homology(m.group(), s, q_max);
    for (unsigned q = 0; q <= q_max; ++q)
      for (std::size_t r = 0; r < s.multiplicity; ++r) out.groups[q] = direct_sum(out.groups[q], h[q]);
  }
  return out;
}

Coinvariants coinvariants(const GModule& m) {
  auto d = orbit_decompose(m.rank(), m.group(), [&](std::uint32_t g, std::uint32_t b) { return m.act(g, b); });
  Coinvariants out;
  for (const auto& o : d.orbits) {
    out.generators.push_back(m.label(o.representative));
    bool z2 = o.sign_twist || m.is_torsion(o.representative);
    out.orders.push_back(z2 ? Integer(2) : Integer(0));
  }
  out.h0 = HomologyResult::from_cyclic_orders(out.orders);
  return out;
}

// ---------------------------------------------------------------------------
// Induced maps

bool InducedMaps::all_identity() const {
  for (std::size_t q = 0; q < maps.size(); ++q) {
    std::vector<Integer> moduli;
    for (const auto& d : groups[q].invariant_factors) moduli.push_back(d);
    moduli.insert(moduli.end(), groups[q].free_rank, Integer(0));
    if (!is_identity(maps[q], moduli)) return false;
  }
  return true;
}

namespace {

void check_commutes(const GModule& m, const std::function<SignedIndex(std::uint32_t)>& f) {
  for (std::uint32_t g = 0; g < m.group().order(); ++g)
    for (std::uint32_t b = 0; b < m.rank(); ++b) {
      SignedIndex fb = f(b);
      SignedIndex a = m.act(g, fb.index);
      SignedIndex gb = m.act(g, b);
      SignedIndex c = f(gb.index);
      if (a.index != c.index || a.sign * fb.sign != c.sign * gb.sign)
        throw ActionClosureError("induced_endomorphism: map does not commute with the group");
    }
}

InducedMaps direct_induced(const BarComplexSlice& bar, std::size_t rank, unsigned q_max,
                           const std::function<SparseVec(std::size_t t, std::uint32_t b, unsigned q)>& image) {
  InducedMaps out;
  out.method = "direct";
  for (unsigned q = 0; q <= q_max; ++q) {
    HomologyPresentation p(bar.d[q + 1], bar.d[q]);
    std::vector<SparseVec> cols(bar.ranks[q]);
    for (std::size_t t = 0; t < bar.ranks[q] / std::max<std::size_t>(rank, 1); ++t)
      for (std::uint32_t b = 0; b < rank; ++b) cols[t * rank + b] = image(t, b, q);
    ExactMatrix f = ExactMatrix::from_columns(bar.ranks[q], std::move(cols));
    out.groups.push_back(p.result());
    out.maps.push_back(induced_on(p, f));
  }
  return out;
}

}  // namespace

InducedMaps induced_endomorphism(const GModule& m,
                                 const std::function<SignedIndex(std::uint32_t)>& f,
                                 unsigned q_max, HomologyMethod method) {
  if (m.has_torsion()) throw Unsupported("induced maps on modules with Z/2 summands");
  check_commutes(m, f);
  const MatrixGroup& g = m.group();

  if (choose_direct(m, q_max, method)) {
    BarComplexSlice bar = direct_bar(m, q_max);
    return direct_induced(bar, m.rank(), q_max, [&](std::size_t t, std::uint32_t b, unsigned) {
      SignedIndex r = f(b);
      return SparseVec{{static_cast<std::uint32_t>(t * m.rank() + r.index), Integer(r.sign)}};
    });
  }

  auto d = orbit_decompose(m.rank(), g, [&](std::uint32_t e, std::uint32_t b) { return m.act(e, b); });
  std::vector<OrbitData> orbits;
  std::vector<BarComplexSlice> bars;
  for (const auto& o : d.orbits) {
    orbits.push_back(orbit_data(m, o.representative, o.stabilizer));
    bars.push_back(orbit_bar(orbits.back(), false, q_max));
  }
  InducedMaps out;
  out.method = "shapiro";
  std::vector<std::uint32_t> digits, image;
  for (unsigned q = 0; q <= q_max; ++q) {
    std::vector<const ExactMatrix*> din, dout;
    std::vector<std::size_t> offset{0};
    for (const auto& b : bars) {
      din.push_back(&b.d[q + 1]);
      dout.push_back(&b.d[q]);
      offset.push_back(offset.back() + b.ranks[q]);
    }
    HomologyPresentation p(block_diagonal(din), block_diagonal(dout));
    std::vector<SparseVec> cols(offset.back());
    for (std::size_t i = 0; i < orbits.size(); ++i) {
      // f(rep_i) = s * x with x = sign * g rep_j
      SignedIndex fx = f(d.orbits[i].representative);
      std::uint32_t j = d.orbit_of[fx.index];
      std::uint32_t tr = d.transporter[fx.index];
      int coef = fx.sign * d.transporter_sign[fx.index];
      std::uint32_t tr_inv = g.inverse(tr);
      const LocalGroup& hi = orbits[i].stab;
      const LocalGroup& hj = orbits[j].stab;
      std::size_t base_i = hi.nonid.size(), base_j = hj.nonid.size();
      for (std::size_t t = 0; t < bars[i].ranks[q]; ++t) {
        decode(t, q, base_i, digits);
        image.clear();
        for (auto x : digits) {
          std::uint32_t h = hi.elems[hi.nonid[x]];
          std::uint32_t c = hj.local[g.multiply(g.multiply(tr_inv, h), tr)];
          if (c == kUnset) throw ActionClosureError("induced_endomorphism: stabilizers are not conjugate");
          image.push_back(hj.pos[c]);
        }
        cols[offset[i] + t] = SparseVec{
            {static_cast<std::uint32_t>(offset[j] + encode(image, base_j)), Integer(coef)}};
      }
    }
    out.groups.push_back(p.result());
    out.maps.push_back(induced_on(p, ExactMatrix::from_columns(offset.back(), std::move(cols))));
  }
  return out;
}

InducedMaps sigma_action_on_homology(const MatrixGroup& g, const ChainComplex& c, unsigned k,
                                     const Permutation& sigma, unsigned q_max, bool signed_action,
                                     HomologyMethod method) {
  if (c.unordered) throw Error("sigma_action_on_homology: needs the ordered complex");
  if (sigma.size() != k) throw CompositionError("sigma_action_on_homology: permutation is not in S_k");
  GModule m = GModule::from_complex(g, c, k);
  const auto& basis = c.bases.at(k);
  return induced_endomorphism(
      m,
      [&](std::uint32_t b) {
        SignedTuple r = apply_permutation(basis[b], sigma);
        return SignedIndex{c.index_of(k, r.tuple), signed_action ? r.sign : 1};
      },
      q_max, method);
}

InducedMaps conjugation_action(const GModule& m, std::uint32_t h, unsigned q_max) {
  if (m.has_torsion()) throw Unsupported("induced maps on modules with Z/2 summands");
  const MatrixGroup& g = m.group();
  LocalGroup all(g, all_indices(g));
  BarComplexSlice bar = direct_bar(m, q_max);
  std::uint32_t hinv = g.inverse(h);
  std::size_t base = all.nonid.size();
  std::vector<std::uint32_t> digits;
  return direct_induced(bar, m.rank(), q_max, [&](std::size_t t, std::uint32_t b, unsigned q) {
    decode(t, q, base, digits);
    for (auto& x : digits) {
      std::uint32_t e = all.elems[all.nonid[x]];
      x = all.pos[all.local[g.multiply(g.multiply(h, e), hinv)]];
    }
    SignedIndex r = m.act(h, b);
    return SparseVec{{static_cast<std::uint32_t>(encode(digits, base) * m.rank() + r.index), Integer(r.sign)}};
  });
}

// ---------------------------------------------------------------------------
// phi and psi

ExactMatrix phi_map(const ChainComplex& c, unsigned k) {
  if (c.unordered) throw Error("phi_map: needs the ordered complex");
  if (k < 2 || k > c.k_max) throw Error("phi_map: requires 2 <= k <= k_max");
  ExactMatrix id = ExactMatrix::identity(c.rank(k));
  ExactMatrix out(c.rank(k), 0);
  for (unsigned i = 0; i + 1 < k; ++i)
    out = hcat(out, id + permutation_matrix(c, k, adjacent_transposition(k, i), false));
  return out;
}

ExactMatrix psi_map(const ChainComplex& c, unsigned k) {
  if (c.unordered) throw Error("psi_map: needs the ordered complex");
  if (k < 2 || k > c.k_max) throw Error("psi_map: requires 2 <= k <= k_max");
  std::size_t r = c.rank(k);
  MatrixBuilder b(r, r);
  Integer kf = factorial(k);
  for (std::size_t j = 0; j < r; ++j) b.add(j, j, kf);
  for (const auto& s : all_permutations(k)) {
    long sign = permutation_sign(s);
    for (std::uint32_t j = 0; j < r; ++j) {
      SignedTuple t = apply_permutation(c.bases[k][j], s);
      b.add(c.index_of(k, t.tuple), j, -sign);
    }
  }
  return std::move(b).build();
}

// ---------------------------------------------------------------------------
// Abelianization

Abelianization::Abelianization(const MatrixGroup& g) {
  const auto& gens = g.generators();
  std::vector<char> in_n(g.order(), 0);
  std::vector<std::uint32_t> n_list{g.identity_index()};
  in_n[g.identity_index()] = 1;
  std::vector<std::uint32_t> t_list;
  auto add_generator = [&](std::uint32_t t) {
    t_list.push_back(t);
    for (std::size_t i = 0; i < n_list.size(); ++i)
      for (auto s : t_list) {
        std::uint32_t y = g.multiply(n_list[i], s);
        if (!in_n[y]) {
          in_n[y] = 1;
          n_list.push_back(y);
        }
      }
  };
  for (auto a : gens)
    for (auto b : gens) {
      std::uint32_t c = g.multiply(g.multiply(a, b), g.multiply(g.inverse(a), g.inverse(b)));
      if (!in_n[c]) add_generator(c);
    }
  for (bool changed = true; changed;) {
    changed = false;
    for (auto s : gens)
      for (std::size_t i = 0; i < t_list.size(); ++i) {
        std::uint32_t c = g.multiply(g.multiply(s, t_list[i]), g.inverse(s));
        if (!in_n[c]) {
          add_generator(c);
          changed = true;
        }
      }
  }
  commutator_order_ = n_list.size();

  coset_.assign(g.order(), kUnset);
  std::vector<std::uint32_t> reps;
  for (std::uint32_t x = 0; x < g.order(); ++x) {
    if (coset_[x] != kUnset) continue;
    auto id = static_cast<std::uint32_t>(reps.size());
    reps.push_back(x);
    for (auto y : n_list) coset_[g.multiply(x, y)] = id;
  }
  std::size_t s = gens.size();
  words_.assign(reps.size(), SparseVec{});
  std::vector<char> seen(reps.size(), 0);
  std::uint32_t start = coset_[g.identity_index()];
  seen[start] = 1;
  std::vector<std::uint32_t> queue{start};
  std::vector<SparseVec> rel;
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    std::uint32_t c = queue[qi];
    for (std::size_t i = 0; i < s; ++i) {
      std::uint32_t d = coset_[g.multiply(reps[c], gens[i])];
      if (seen[d]) continue;
      seen[d] = 1;
      words_[d] = words_[c];
      sparse_axpy(words_[d], Integer(1), SparseVec{{static_cast<std::uint32_t>(i), Integer(1)}});
      queue.push_back(d);
    }
  }
  for (std::uint32_t c = 0; c < reps.size(); ++c)
    for (std::size_t i = 0; i < s; ++i) {
      std::uint32_t d = coset_[g.multiply(reps[c], gens[i])];
      SparseVec r = words_[c];
      sparse_axpy(r, Integer(1), SparseVec{{static_cast<std::uint32_t>(i), Integer(1)}});
      sparse_axpy(r, Integer(-1), words_[d]);
      if (!r.empty()) rel.push_back(std::move(r));
    }
  group_ = AbelianGroup(s, ExactMatrix::from_columns(s, std::move(rel)));
}

ExactMatrix abelianization_map(const MatrixGroup& h, const Abelianization& target,
                               const std::function<std::uint32_t(std::uint32_t)>& hom) {
  std::vector<SparseVec> cols;
  for (auto s : h.generators()) cols.push_back(target.word(hom(s)));
  return ExactMatrix::from_columns(target.group().generator_count(), std::move(cols));
}

}  // namespace gphom
