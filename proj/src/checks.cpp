#include <algorithm>
#include <map>
#include <set>

#include "gphom/dimshift.hpp"
#include "gphom/gpcomplex.hpp"
#include "gphom/grouphomology.hpp"
#include "gphom/milnor.hpp"
#include "gphom/report.hpp"
#include "gphom/specseq.hpp"

namespace gphom {

using nlohmann::json;

namespace {

std::string str(const HomologyResult& h) { return h.to_string(); }

json strings(const std::vector<HomologyResult>& hs) {
  json out = json::array();
  for (const auto& h : hs) out.push_back(h.to_string());
  return out;
}

Verdict pass_if(bool ok) { return ok ? Verdict::pass : Verdict::fail; }

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

json base_params(const RunConfig& c) { return json{{"n", c.n}, {"p", c.p}}; }

json complex_params(const RunConfig& c) {
  return json{{"n", c.n}, {"p", c.p}, {"gp_type", c.type()}, {"k_max", c.kmax()}};
}

// ---------------------------------------------------------------------------
// complexes

void build_checks(CheckRunner& run, const RunConfig& c, ResultCache& cache) {
  run.run("complex.well_formed", "general position complex: differential, S_k action, filtration",
          complex_params(c), [&] {
            auto w = check_well_formed(c.n, c.p, c.type(), c.kmax());
            return CheckOutcome{pass_if(w.ok()),
                                json{{"modes", w.modes},
                                     {"generators_checked", w.generators_checked},
                                     {"boundary_squared_zero", w.boundary_squared_zero},
                                     {"permutation_equivariant", w.permutation_equivariant},
                                     {"faces_closed", w.faces_closed},
                                     {"filtration", w.filtration},
                                     {"group_commutes", w.group_commutes},
                                     {"witness", w.witness}}};
          });
  for (bool unordered : {false, true}) {
    json params = complex_params(c);
    params["unordered"] = unordered;
    run.run("complex.differentials", "plumbing", params, [&] {
      json ranks = json::array(), nnz = json::array();
      for (unsigned k = 0; k <= c.kmax(); ++k) {
        ExactMatrix d = cached_differential(cache, c.n, c.p, c.type(), c.kmax(), unordered, k);
        ranks.push_back(d.cols());
        nnz.push_back(d.nnz());
      }
      return CheckOutcome{Verdict::pass, json{{"ranks", ranks}, {"nonzeros", nnz}}};
    });
  }
}

void homology_checks(CheckRunner& run, const RunConfig& c) {
  for (bool unordered : {false, true}) {
    json params = complex_params(c);
    params["unordered"] = unordered;
    run.run("complex.acyclic", "acyclicity of the general position complex", params, [&] {
      auto cx = build_complex(c.n, c.p, c.type(), c.kmax(), unordered);
      std::vector<HomologyResult> hs;
      bool zero = true;
      for (unsigned k = 0; k < c.kmax(); ++k) {
        hs.push_back(cx.homology(k));
        zero = zero && hs.back().is_zero();
      }
      return CheckOutcome{pass_if(zero), json{{"homology", strings(hs)}}};
    });
    run.run("complex.cone", "acyclicity via the cone vector", params, [&] {
      auto cx = build_complex(c.n, c.p, c.type(), c.kmax(), unordered);
      if (cx.has_torsion())
        return CheckOutcome{Verdict::unknown, json{{"note", "the cone is not defined on Z/2 summands"}}};
      json per_degree = json::array();
      bool ok = true, all_coned = true;
      std::string witness;
      // Cones every cycle of a spanning set; false with a witness on the first miss.
      auto cone_all = [&](unsigned k, const ExactMatrix& cycles, std::size_t& coned, std::string& miss) {
        coned = 0;
        for (std::size_t j = 0; j < cycles.cols(); ++j) {
          SparseVec cycle = cycles.column(j);
          if (cycle.empty()) {
            ++coned;
            continue;
          }
          try {
            auto cone = cone_vector(cx, k, cycle);
            if (cx.d[k + 1].apply(cone.cone) != cycle) {
              ok = false;
              witness = "degree " + std::to_string(k) + ": cone of cycle " + std::to_string(j) +
                        " does not reproduce it";
              return false;
            }
            ++coned;
          } catch (const NotFound& e) {
            if (miss.empty()) miss = "degree " + std::to_string(k) + ": " + e.what();
          }
        }
        return coned == cycles.cols();
      };
      for (unsigned k = 0; k < c.kmax(); ++k) {
        std::size_t coned = 0;
        std::string miss;
        ExactMatrix z = kernel_basis(cx.d[k]);
        json entry{{"degree", k}, {"kernel_basis", z.cols()}};
        bool done = cone_all(k, z, coned, miss);
        entry["kernel_basis_coned"] = coned;
        // The boundaries of generators span the cycles once H_k = 0.
        if (!done && ok && cx.homology(k).is_zero()) {
          std::string miss2;
          done = cone_all(k, cx.d[k + 1], coned, miss2);
          entry["boundaries"] = cx.d[k + 1].cols();
          entry["boundaries_coned"] = coned;
          if (!done) miss = miss2;
        }
        entry["spanning_set"] = done ? (entry.contains("boundaries") ? "boundaries" : "kernel_basis") : "none";
        if (!done && all_coned && ok) witness = miss;
        all_coned = all_coned && done;
        per_degree.push_back(entry);
      }
      // Over a finite field a cycle may use every vector, leaving no cone point.
      Verdict v = !ok ? Verdict::fail : all_coned ? Verdict::pass : Verdict::unknown;
      return CheckOutcome{v, json{{"degrees", per_degree}, {"witness", witness}}};
    });
  }
}

// ---------------------------------------------------------------------------
// spectral sequence

void e1_checks(CheckRunner& run, const RunConfig& c) {
  json params = complex_params(c);
  params["q_max"] = c.q_max;
  run.run("e1.page", "hyperhomology spectral sequence, E^1 page", params, [&] {
    SpectralPage page = build_e1(c.n, c.p, c.type(), c.kmax(), c.q_max);
    json table = json::array();
    std::vector<std::string> unknown;
    for (unsigned a = 0; a <= c.kmax(); ++a) {
      json col = json::array();
      for (unsigned q = 0; q <= c.q_max; ++q) {
        PageEntry e = page.entry(a, q);
        col.push_back(e.known ? e.value.to_string() : std::string("?"));
        if (!e.known) unknown.push_back("E1(" + std::to_string(a) + "," + std::to_string(q) + "): " + e.method);
      }
      table.push_back(col);
    }
    json e2 = json::array();
    for (const auto& e : page.e2_row0) e2.push_back(e.known ? e.value.to_string() : std::string("?"));
    bool euler = page.euler_check();
    CheckOutcome out{euler ? (unknown.empty() ? Verdict::pass : Verdict::unknown) : Verdict::fail,
                     json{{"e1", table}, {"e2_row0", e2}, {"euler_check", euler}, {"unknown", unknown}}};
    out.cap_exceeded = !unknown.empty();
    return out;
  });
}

void e2_checks(CheckRunner& run, const RunConfig& c) {
  json params = base_params(c);
  run.run("e2.presentation", "E^2_{n+1,0} presented by symbols", params, [&] {
    E2Corner e = e2_corner(c.n, c.p);
    std::size_t expected = 1;
    for (unsigned i = 0; i < c.n; ++i) expected *= c.p - 1;
    return CheckOutcome{pass_if(e.names.size() == expected),
                        json{{"generators", e.names},
                             {"relations", e.relations.cols()},
                             {"structure", str(e.structure())},
                             {"e1_n0", str(e.e1_n0)},
                             {"bottom_row_homology", str(e.bottom_row_homology)}}};
  });
  run.run("e2.relations", "E^2_{n+1,0} presented by symbols: both relation families", params, [&] {
    E2Corner e = e2_corner(c.n, c.p);
    auto tuples = unit_tuples(c.n, c.p);
    std::size_t family_one = 0, antisymmetry = 0;
    std::string witness;
    for (const auto& alpha : tuples) {
      for (const auto& beta : tuples) {
        std::set<unsigned> distinct(beta.begin(), beta.end());
        if (distinct.size() != beta.size()) continue;
        ++family_one;
        if (witness.empty() && !e.reduces_to_zero(relation_family_one(e, alpha, beta)))
          witness = "family one survives at alpha=" + symbol_text(alpha) + " beta=" + symbol_text(beta);
      }
      for (const auto& sigma : all_permutations(c.n)) {
        ++antisymmetry;
        if (witness.empty() && !e.reduces_to_zero(relation_antisymmetry(e, alpha, sigma)))
          witness = "antisymmetry survives at alpha=" + symbol_text(alpha);
      }
    }
    return CheckOutcome{pass_if(witness.empty()), json{{"family_one_instances", family_one},
                                                       {"antisymmetry_instances", antisymmetry},
                                                       {"witness", witness}}};
  });
  run.run("e2.reordering", "E^2_{n+1,0} presented by symbols: independence of generator order", params, [&] {
    E2Corner base = e2_corner(c.n, c.p);
    std::string witness;
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      E2Corner e = e2_corner(c.n, c.p, seed);
      if (!(e.structure() == base.structure())) witness = "structure changes under seed " + std::to_string(seed);
      for (const auto& s : base.symbols)
        if (witness.empty() && e.reduces_to_zero(e.symbol(s)) != base.reduces_to_zero(base.symbol(s)))
          witness = "vanishing of " + symbol_text(s) + " changes under seed " + std::to_string(seed);
    }
    return CheckOutcome{pass_if(witness.empty()), json{{"seeds", {1, 2, 3}}, {"witness", witness}}};
  });
}

void stability_checks(CheckRunner& run, const RunConfig& c) {
  json params = base_params(c);
  params["m"] = c.localization().get_str();
  run.run("stability.chi_kappa", "homological stability after inverting (n-1)!", params, [&] {
    StabilityReport r = stability_extract(c.n, c.p, c.localization(), 1);
    bool ok = true;
    for (unsigned i = 0; i < r.chi.size(); ++i) {
      if (i + 2 <= c.n) ok = ok && r.chi_localized[i].is_zero() && r.kappa_localized[i].is_zero();
      else if (i + 1 == c.n) ok = ok && r.chi_localized[i].is_zero();
    }
    return CheckOutcome{pass_if(ok), json{{"chi", strings(r.chi)},
                                          {"kappa", strings(r.kappa)},
                                          {"chi_localized", strings(r.chi_localized)},
                                          {"kappa_localized", strings(r.kappa_localized)},
                                          {"verdicts", r.verdicts}}};
  });
}

// ---------------------------------------------------------------------------
// group homology lemmas

void lemma_checks(CheckRunner& run, const RunConfig& c) {
  json params = base_params(c);
  params["q_max"] = c.q_max;
  run.run("lemma.shapiro", "Shapiro reduction to the stabilizer of e_1", params, [&] {
    auto g = MatrixGroup::general_linear(c.n, c.p);
    auto m = GModule::from_complex(g, build_complex(c.n, c.p, c.type(), 1, true), 1);
    auto lhs = group_homology(m, c.q_max);
    auto stab = stabilizer_of_e1(g);
    auto rhs = group_homology(GModule::trivial(stab), c.q_max);
    bool ok = true;
    for (unsigned q = 0; q <= c.q_max; ++q) ok = ok && lhs.groups[q] == rhs.groups[q];
    return CheckOutcome{pass_if(ok), json{{"group_with_coefficients", strings(lhs.groups)},
                                          {"stabilizer", strings(rhs.groups)},
                                          {"stabilizer_order", stab.order()},
                                          {"method", lhs.method}}};
  });
  if (c.n >= 2) {
    run.run("lemma.sigma_identity", "key lemma: transpositions act as the identity on homology", params, [&] {
      auto g = MatrixGroup::general_linear(c.n, c.p);
      auto cx = build_complex(c.n, c.p, c.n, 2);
      auto r = sigma_action_on_homology(g, cx, 2, adjacent_transposition(2, 0), c.q_max);
      return CheckOutcome{pass_if(r.all_identity()), json{{"homology", strings(r.groups)}, {"method", r.method}}};
    });
    run.run("lemma.phi_psi", "maps phi and psi: psi o j = k! on the image of phi", params, [&] {
      auto cx = build_complex(c.n, c.p, c.n, 2);
      auto phi = phi_map(cx, 2), psi = psi_map(cx, 2);
      bool ok = psi * phi == factorial(2) * phi;
      auto q = unordered_quotient(cx);
      auto inv = smith_invariants(phi);
      std::size_t twos = std::count(inv.begin(), inv.end(), Integer(2));
      std::size_t torsion = std::count(q.torsion[2].begin(), q.torsion[2].end(), 1);
      bool coker = cx.rank(2) - inv.size() == q.rank(2) - torsion && twos == torsion;
      return CheckOutcome{pass_if(ok && coker), json{{"psi_phi_equals_2_phi", ok},
                                                     {"coker_phi_matches_quotient", coker},
                                                     {"rank_A2", cx.rank(2)}}};
    });
    run.run("lemma.localized_vanishing", "maps phi and psi: vanishing after inverting k!", params, [&] {
      auto g = MatrixGroup::general_linear(c.n, c.p);
      json out = json::object();
      bool ok = true;
      for (unsigned k = 2; k <= c.n; ++k) {
        auto m = GModule::from_complex(g, build_complex(c.n, c.p, c.n, k, true), k);
        auto h = group_homology(m, c.q_max);
        std::vector<HomologyResult> loc;
        for (const auto& x : h.groups) {
          loc.push_back(localize(x, factorial(k)));
          ok = ok && loc.back().is_zero();
        }
        out[std::to_string(k)] = json{{"homology", strings(h.groups)}, {"localized", strings(loc)}};
      }
      return CheckOutcome{pass_if(ok), json{{"by_k", out}}};
    });
  }
  run.run("lemma.free_action", "free action on generators of length n+1", params, [&] {
    auto g = MatrixGroup::general_linear(c.n, c.p);
    auto cx = build_complex(c.n, c.p, c.n, c.n + 1);
    auto d = orbit_decompose(cx.bases[c.n + 1], g, false);
    bool free = std::all_of(d.orbits.begin(), d.orbits.end(), [](const Orbit& o) { return o.stabilizer.size() == 1; });
    std::map<std::size_t, std::size_t> sizes;
    for (const auto& o : d.orbits) ++sizes[o.size];
    json size_json = json::object();
    for (auto [s, k] : sizes) size_json[std::to_string(s)] = k;
    auto h = group_homology(GModule::from_complex(g, cx, c.n + 1), c.q_max);
    bool vanish = true;
    for (unsigned q = 1; q <= c.q_max; ++q) vanish = vanish && h.groups[q].is_zero();
    return CheckOutcome{pass_if(free && vanish), json{{"generators", cx.rank(c.n + 1)},
                                                      {"orbits", d.orbits.size()},
                                                      {"orbit_sizes", size_json},
                                                      {"free", free},
                                                      {"homology", strings(h.groups)}}};
  });
}

// ---------------------------------------------------------------------------
// Milnor K-theory and dimension shifting

void milnor_checks(CheckRunner& run, const RunConfig& c) {
  json params = base_params(c);
  run.run("milnor.k1", "Milnor K-theory: K_1 is the unit group", json{{"p", c.p}}, [&] {
    auto k = milnor_group(1, c.p);
    return CheckOutcome{pass_if(k.structure() == HomologyResult::from_cyclic_orders({Integer(c.p - 1)})),
                        json{{"structure", str(k.structure())}}};
  });
  if (c.n >= 2) {
    run.run("milnor.kn", "Milnor K-theory presentation by symbols", params, [&] {
      auto k = milnor_group(c.n, c.p);
      json w{{"structure", str(k.structure())},
             {"multilinearity_relations", k.multilinearity_count},
             {"steinberg_relations", k.steinberg_count}};
      bool ok = k.structure().is_zero();
      if (c.n == 2) {
        std::size_t order = milnor_k2_order_bruteforce(c.p);
        w["bruteforce_order"] = order;
        ok = ok && order == 1;
      }
      return CheckOutcome{pass_if(ok), w};
    });
  }
  run.run("milnor.symbol_map", "symbol map from E^2_{n+1,0} to K^M_n", params, [&] {
    E2Corner e = e2_corner(c.n, c.p);
    auto k = milnor_group(c.n, c.p);
    try {
      check_symbol_map(e, k);
    } catch (const WellDefinednessFailure& err) {
      return CheckOutcome{Verdict::fail, json{{"witness", err.what()}}};
    }
    return CheckOutcome{k.structure().is_zero() ? Verdict::degenerate : Verdict::pass,
                        json{{"corner", str(e.structure())}, {"milnor", str(k.structure())},
                             {"relations_checked", e.relations.cols()}}};
  });
}

void roundtrip_checks(CheckRunner& run, const RunConfig& c) {
  json params = base_params(c);
  run.run("roundtrip.composite", "composite of the symbol maps is the identity", params, [&] {
    RoundTripReport r = roundtrip_check(c.n, c.p);
    json entries = json::array();
    bool all_degenerate = true;
    for (const auto& e : r.entries) {
      json x{{"symbol", symbol_text(e.alphas)},
             {"verdict", to_string(e.verdict)},
             {"original", e.original.to_string()},
             {"image", e.image.to_string()},
             {"reverse_equal", e.reverse_equal}};
      if (!e.error.empty()) x["error"] = e.error;
      entries.push_back(x);
      all_degenerate = all_degenerate && e.verdict == RoundTripVerdict::degenerate_pass;
    }
    json survivors = json::array();
    for (const auto& s : r.one_entry_survivors) survivors.push_back(symbol_text(s));
    Verdict v = !r.all_pass() ? Verdict::fail : all_degenerate ? Verdict::degenerate : Verdict::pass;
    return CheckOutcome{v, json{{"milnor", str(r.milnor)},
                                {"corner", str(r.corner)},
                                {"entries", entries},
                                {"one_entry_survivors", survivors}}};
  });
  run.run("boundary.cross_cycle", "boundary of the cross-product cycle", params, [&] {
    auto ctx = make_shift_context(c.n, c.p, c.n + 1);
    std::size_t equal = 0, undecided = 0;
    json failures = json::array(), methods = json::array();
    for (const auto& alpha : unit_tuples(c.n, c.p)) {
      CrossBoundary b = boundary_of_cross_cycle(ctx, alpha);
      if (b.chain_equal || b.equal.zero == true) {
        ++equal;
      } else if (b.equal.zero == false) {
        failures.push_back(symbol_text(alpha));
      } else {
        ++undecided;
        methods.push_back(symbol_text(alpha) + ": " + b.equal.method);
      }
    }
    Verdict v = !failures.empty() ? Verdict::fail : undecided ? Verdict::unknown : Verdict::pass;
    return CheckOutcome{v, json{{"equal", equal}, {"undecided", methods}, {"failures", failures}}};
  });
  run.run("boundary.iterated", "iterated boundary of the cross-product cycle", params, [&] {
    auto ctx = make_shift_context(c.n, c.p, c.n + 1);
    E2Corner e = e2_corner(c.n, c.p);
    std::size_t literal = 0, classes = 0;
    json failures = json::array();
    for (const auto& alpha : unit_tuples(c.n, c.p)) {
      IteratedBoundary b = iterated_boundary(*ctx, e, alpha);
      literal += b.literal_equal;
      classes += b.class_equal;
      if (!b.class_equal) failures.push_back(symbol_text(alpha));
    }
    return CheckOutcome{pass_if(failures.empty()),
                        json{{"literal_equal", literal}, {"class_equal", classes}, {"failures", failures}}};
  });
  run.run("dimshift.connecting_chain", "dimension-shifting isomorphism chain", params, [&] {
    ConnectingChain ch = connecting_chain(c.n, c.p);
    json maps = json::array();
    bool ok = true;
    for (const auto& m : ch.maps) {
      maps.push_back(json{{"j", m.j},
                          {"source", str(m.source)},
                          {"target", str(m.target)},
                          {"kernel", str(m.kernel)},
                          {"cokernel", str(m.cokernel)},
                          {"invertible_localized", m.invertible_localized}});
      ok = ok && m.invertible_localized;
    }
    Verdict v = ch.truncated ? Verdict::unknown : ch.maps.empty() ? Verdict::degenerate : pass_if(ok);
    CheckOutcome out{v, json{{"maps", maps}, {"verdict", ch.verdict}}};
    out.cap_exceeded = ch.truncated;
    return out;
  });
  run.run("dimshift.factored_boundary", "boundary on H_n(GL_n) modulo H_n(GL_{n-1})", params, [&] {
    FactoredBoundary f = factored_boundary(c.n, c.p);
    return CheckOutcome{pass_if(f.injective_localized), json{{"h_n", str(f.h_n)},
                                                             {"quotient", str(f.quotient)},
                                                             {"kernel", str(f.kernel)},
                                                             {"kernel_localized", str(f.kernel_localized)}}};
  });
}

}  // namespace

ExactMatrix cached_differential(ResultCache& cache, unsigned n, unsigned p, unsigned gp_type, unsigned k_max,
                                bool unordered, unsigned k) {
  if (k > k_max) throw Error("cached_differential: degree above the truncation");
  auto key_of = [&](unsigned deg) {
    json params{{"n", n}, {"p", p}, {"gp_type", gp_type}, {"k_max", k_max}, {"unordered", unordered}, {"k", deg}};
    return cache.key("differential", params.dump());
  };
  if (auto m = cache.get_matrix(key_of(k))) return *m;
  ChainComplex cx = build_complex(n, p, gp_type, k_max, unordered);
  for (unsigned deg = 0; deg <= k_max; ++deg) cache.put_matrix(key_of(deg), cx.d[deg]);
  return cx.d[k];
}

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"build", "homology", "e1", "e2-corner", "stability",
                                              "milnor", "roundtrip", "verify-all"};
  return names;
}

VerificationReport run_subcommand(const std::string& sub, const RunConfig& c, ResultCache& cache) {
  if (std::find(subcommands().begin(), subcommands().end(), sub) == subcommands().end())
    throw UsageError("unknown subcommand '" + sub + "'");
  c.validate();
  if (sub == "stability" && c.n < 2) throw UsageError("stability needs n >= 2");
  ScopedCaps guard(c.caps);
  VerificationReport r;
  r.subcommand = sub;
  r.config = c.params();
  CheckRunner run(r, cache);
  bool all = sub == "verify-all";
  if (all || sub == "build") build_checks(run, c, cache);
  if (all || sub == "homology") homology_checks(run, c);
  if (all || sub == "e1") e1_checks(run, c);
  if (all) lemma_checks(run, c);
  if (all || sub == "e2-corner") e2_checks(run, c);
  if ((all && c.n >= 2) || sub == "stability") stability_checks(run, c);
  if (all || sub == "milnor") milnor_checks(run, c);
  if (all || sub == "roundtrip") roundtrip_checks(run, c);
  return r;
}

}  // namespace gphom
