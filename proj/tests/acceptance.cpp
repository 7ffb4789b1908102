// Acceptance suite: one line per criterion, exact checks, pinned time budgets.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <unistd.h>

#include "gphom/cache.hpp"
#include "gphom/dimshift.hpp"
#include "gphom/gpcomplex.hpp"
#include "gphom/grouphomology.hpp"
#include "gphom/milnor.hpp"
#include "gphom/report.hpp"
#include "gphom/specseq.hpp"

using namespace gphom;
namespace fs = std::filesystem;

namespace {

// Wall-clock budgets in seconds.
constexpr double kBudget1 = 120, kBudget2 = 60, kBudget3 = 300, kBudget4 = 600, kBudget5 = 600, kBudget6 = 300,
                 kBudget7 = 300, kBudget8 = 120, kBudget9 = 900, kBudget10 = 600, kBudget11 = 120,
                 kBudget12Snf = 300;

// Sparse SNF instance: a 5000 x 5000 block with at most 50000 nonzeros.
constexpr std::size_t kSnfSize = 5000, kSnfMaxNonzeros = 50000;

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

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

HomologyResult cyclic(long order) { return HomologyResult::from_cyclic_orders({Integer(order)}); }

Outcome criterion1() {
  Outcome o;
  for (unsigned n = 1; n <= 3; ++n)
    for (unsigned p : {2u, 3u, 5u})
      for (unsigned i = 0; i <= n; ++i) {
        auto w = check_well_formed(n, p, i, n + 2);
        std::ostringstream id;
        id << "n=" << n << " p=" << p << " i=" << i;
        o.require(w.boundary_squared_zero, id.str() + ": d o d != 0 " + w.witness);
        o.require(w.permutation_equivariant, id.str() + ": S_k equivariance " + w.witness);
        o.require(w.filtration, id.str() + ": filtration " + w.witness);
        o.require(w.ok(), id.str() + ": " + w.witness);
      }
  return o;
}

Outcome criterion2() {
  Outcome o;
  RunConfig c;
  c.n = 2;
  c.p = 5;
  c.k_max = 4;  // homology in degrees k <= 3
  ResultCache off{fs::path{}};
  VerificationReport r = run_subcommand("homology", c, off);
  o.require(r.records.size() == 4, "expected four homology records");
  for (const auto& rec : r.records) {
    std::string which = rec.id + (rec.params["unordered"].get<bool>() ? " (unordered)" : " (ordered)");
    o.require(rec.verdict == Verdict::pass, which + ": " + rec.witnesses.dump());
  }
  return o;
}

Outcome criterion3() {
  Outcome o;
  auto g = MatrixGroup::general_linear(2, 3);
  auto m = GModule::from_complex(g, build_complex(2, 3, 2, 1, true), 1);
  auto lhs = group_homology(m, 1);
  auto aff = stabilizer_of_e1(g);
  auto rhs = group_homology(GModule::trivial(aff), 1, HomologyMethod::direct);
  o.require(aff.order() == 6, "stabilizer of e_1 has order " + std::to_string(aff.order()));
  for (unsigned q = 0; q <= 1; ++q)
    o.require(lhs.groups[q] == rhs.groups[q], "H_" + std::to_string(q) + ": " + lhs.groups[q].to_string() +
                                                  " vs " + rhs.groups[q].to_string());
  return o;
}

Outcome criterion4() {
  Outcome o;
  for (unsigned p : {2u, 3u}) {
    auto g = MatrixGroup::general_linear(2, p);
    auto c = build_complex(2, p, 2, 2);
    for (const auto& sigma : all_permutations(2)) {
      if (permutation_sign(sigma) != -1) continue;
      auto r = sigma_action_on_homology(g, c, 2, sigma, 2);
      o.require(r.groups.size() == 3 && r.maps.size() == 3, "expected H_0..H_2");
      o.require(r.all_identity(), "p=" + std::to_string(p) + ": an induced map is not the identity");
    }
  }
  return o;
}

Outcome criterion5() {
  Outcome o;
  for (unsigned p : {2u, 3u}) {
    auto c = build_complex(2, p, 2, 2);
    auto phi = phi_map(c, 2), psi = psi_map(c, 2);
    ExactMatrix lhs = psi * phi, rhs = factorial(2) * phi;
    for (std::size_t j = 0; j < phi.cols(); ++j)
      o.require(lhs.column(j) == rhs.column(j), "p=" + std::to_string(p) + ": psi(j(x)) != 2x at column " +
                                                    std::to_string(j));
    auto g = MatrixGroup::general_linear(2, p);
    auto m = GModule::from_complex(g, build_complex(2, p, 2, 2, true), 2);
    auto h = group_homology(m, 2);
    for (unsigned q = 0; q <= 2; ++q)
      o.require(localize(h.groups[q], 2).is_zero(),
                "p=" + std::to_string(p) + ": H_" + std::to_string(q) + " = " + h.groups[q].to_string());
  }
  return o;
}

Outcome criterion6() {
  Outcome o;
  auto g = MatrixGroup::general_linear(2, 3);
  auto c = build_complex(2, 3, 2, 3);
  auto d = orbit_decompose(c.bases[3], g, false);
  std::size_t total = 0;
  for (const auto& orb : d.orbits) {
    o.require(orb.stabilizer.size() == 1, "nontrivial stabilizer");
    o.require(orb.size == 48, "orbit of size " + std::to_string(orb.size));
    total += orb.size;
  }
  o.require(d.orbits.size() == 4, std::to_string(d.orbits.size()) + " orbits");
  o.require(total == 192 && c.rank(3) == 192, "total " + std::to_string(total));
  auto h = group_homology(GModule::from_complex(g, c, 3), 2);
  o.require(h.groups[1].is_zero(), "H_1 = " + h.groups[1].to_string());
  o.require(h.groups[2].is_zero(), "H_2 = " + h.groups[2].to_string());
  return o;
}

Outcome criterion7() {
  Outcome o;
  for (unsigned p : {3u, 5u}) {
    std::string at = "p=" + std::to_string(p) + ": ";
    E2Corner e = e2_corner(2, p);
    o.require(e.names.size() == (p - 1) * (p - 1), at + std::to_string(e.names.size()) + " generators");
    std::set<std::string> names(e.names.begin(), e.names.end());
    o.require(names.size() == e.names.size(), at + "generator names repeat");
    for (const auto& s : e.symbols) o.require(names.count(symbol_text(s)) == 1, at + "unnamed " + symbol_text(s));
    auto tuples = unit_tuples(2, p);
    for (const auto& a : tuples) {
      for (const auto& b : tuples)
        if (b[0] != b[1])
          o.require(e.reduces_to_zero(relation_family_one(e, a, b)),
                    at + "family one at " + symbol_text(a) + ", " + symbol_text(b));
      for (const auto& sigma : all_permutations(2))
        o.require(e.reduces_to_zero(relation_antisymmetry(e, a, sigma)), at + "antisymmetry at " + symbol_text(a));
    }
    bool reordered = false;
    for (std::uint64_t seed : {7u, 11u, 13u}) {
      E2Corner s = e2_corner(2, p, seed);
      reordered = reordered || s.symbols != e.symbols;
      o.require(s.structure() == e.structure(), at + "structure changed under reordering");
      for (const auto& a : tuples) {
        o.require(s.reduces_to_zero(s.symbol(a)) == e.reduces_to_zero(e.symbol(a)),
                  at + "class of " + symbol_text(a) + " changed under reordering");
        for (const auto& b : tuples) {
          SparseVec x = s.symbol(a), y = e.symbol(a);
          sparse_axpy(x, Integer(-1), s.symbol(b));
          sparse_axpy(y, Integer(-1), e.symbol(b));
          o.require(s.reduces_to_zero(x) == e.reduces_to_zero(y),
                    at + "equality of " + symbol_text(a) + " and " + symbol_text(b) + " changed");
        }
      }
    }
    o.require(reordered, at + "no seed reordered the generators");
  }
  return o;
}

Outcome criterion8() {
  Outcome o;
  for (unsigned p : {3u, 5u, 7u}) {
    auto k = milnor_group(1, p);
    o.require(k.structure() == cyclic(p - 1), "K_1(F_" + std::to_string(p) + ") = " + k.structure().to_string());
  }
  for (unsigned p : {3u, 5u}) {
    auto k = milnor_group(2, p);
    o.require(k.structure().is_zero(), "K_2(F_" + std::to_string(p) + ") = " + k.structure().to_string());
    o.require(milnor_k2_order_bruteforce(p) == 1, "oracle disagrees at p=" + std::to_string(p));
  }
  return o;
}

Outcome criterion9() {
  Outcome o;
  for (unsigned p : {3u, 5u}) {
    auto ctx = make_shift_context(2, p, 3);
    for (const auto& a : unit_tuples(2, p)) {
      CrossBoundary b = boundary_of_cross_cycle(ctx, a);
      o.require(b.equal.zero.has_value(), "p=" + std::to_string(p) + " " + symbol_text(a) + ": undecided (" +
                                              b.equal.method + ")");
      o.require(b.equal.zero == true, "p=" + std::to_string(p) + " " + symbol_text(a) + ": classes differ");
    }
  }
  return o;
}

Outcome criterion10() {
  Outcome o;
  RoundTripReport one = roundtrip_check(1, 5);
  o.require(one.entries.size() == 4, "GL_1: " + std::to_string(one.entries.size()) + " generators");
  for (const auto& e : one.entries) {
    std::string s = symbol_text(e.alphas);
    o.require(e.error.empty(), s + ": " + e.error);
    o.require(e.image == e.original, s + ": image " + e.image.to_string() + " vs " + e.original.to_string());
    o.require(e.reverse_equal, s + ": E^2 -> K -> E^2 does not return the generator");
    o.require(e.verdict != RoundTripVerdict::fail, s + ": fail");
  }
  RoundTripReport two = roundtrip_check(2, 5);
  o.require(two.milnor.is_zero(), "K_2(F_5) = " + two.milnor.to_string());
  o.require(two.all_pass(), "GL_2: some entry fails");
  for (const auto& e : two.entries)
    o.require(e.verdict == RoundTripVerdict::degenerate_pass, symbol_text(e.alphas) + " is not tagged degenerate");
  return o;
}

Outcome criterion11() {
  Outcome o;
  StabilityReport r = stability_extract(3, 3, Integer(2), 1);
  o.require(r.chi[0].is_zero() && r.kappa[0].is_zero(), "chi_0 = " + r.chi[0].to_string() + ", kappa_0 = " +
                                                            r.kappa[0].to_string());
  o.require(r.chi_localized[1].is_zero(), "localized chi_1 = " + r.chi_localized[1].to_string());
  o.require(r.kappa_localized[1].is_zero(), "localized kappa_1 = " + r.kappa_localized[1].to_string());
  return o;
}

Outcome criterion12(double& snf_seconds) {
  Outcome o;
  fs::path dir = fs::temp_directory_path() / ("gphom-acceptance-" + std::to_string(::getpid()));
  fs::remove_all(dir);
  {
    ResultCache cache(dir);
    // d_5 of the unordered complex for GL_3(F_3), general position type 2
    cached_differential(cache, 3, 3, 2, 5, true, 5);
    ResultCache reader(dir);
    ExactMatrix d = cached_differential(reader, 3, 3, 2, 5, true, 5);
    o.require(reader.hits() == 1, "differential was not served from the cache");
    std::vector<SparseVec> cols;
    std::size_t nnz = 0;
    for (std::size_t j = 0; j < kSnfSize; ++j) {
      SparseVec v;
      for (const auto& [i, x] : d.column(j))
        if (i < kSnfSize) v.emplace_back(i, x);
      nnz += v.size();
      cols.push_back(std::move(v));
    }
    ExactMatrix block = ExactMatrix::from_columns(kSnfSize, cols);
    o.require(nnz > 0 && nnz <= kSnfMaxNonzeros, std::to_string(nnz) + " nonzeros");
    auto start = std::chrono::steady_clock::now();
    SmithOptions opts;
    opts.left = opts.right = true;
    auto snf = smith_normal_form(block, opts);
    snf_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    // U A V = D
    o.require(snf.left * block * snf.right == ExactMatrix::diagonal(kSnfSize, kSnfSize, snf.diag), "U A V != D");
    o.require(snf_seconds <= kBudget12Snf, "SNF took " + std::to_string(snf_seconds) + " s");

    RunConfig c;
    c.n = 2;
    c.p = 5;
    c.q_max = 2;
    ResultCache cold(dir / "verify");
    VerificationReport a = run_subcommand("verify-all", c, cold);
    ResultCache warm(dir / "verify");
    VerificationReport b = run_subcommand("verify-all", c, warm);
    o.require(warm.hits() > 0, "warm run had no cache hits");
    o.require(a.records.size() == b.records.size(), "record counts differ");
    for (std::size_t i = 0; i < a.records.size() && i < b.records.size(); ++i)
      o.require(a.records[i].id == b.records[i].id && a.records[i].verdict == b.records[i].verdict,
                a.records[i].id + ": cold " + to_string(a.records[i].verdict) + ", warm " +
                    to_string(b.records[i].verdict));
    o.require(a.body() == b.body(), "cold and warm report bodies differ");
  }
  fs::remove_all(dir);
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    std::string name;
    double budget;
    std::function<Outcome()> run;
  };
  double snf_seconds = 0;
  std::vector<Criterion> all{
      {1, "complex well-formedness", kBudget1, criterion1},
      {2, "acyclicity instances over F_5", kBudget2, criterion2},
      {3, "Shapiro consistency for GL_2(F_3)", kBudget3, criterion3},
      {4, "transpositions act as the identity", kBudget4, criterion4},
      {5, "psi o j = 2 and localized vanishing", kBudget5, criterion5},
      {6, "free action on A_3 for GL_2(F_3)", kBudget6, criterion6},
      {7, "E^2 corner presentations", kBudget7, criterion7},
      {8, "Milnor K_1 and K_2", kBudget8, criterion8},
      {9, "boundary of the cross-product cycle", kBudget9, criterion9},
      {10, "round trip through E^2 and K^M", kBudget10, criterion10},
      {11, "stability shadow at n=3, p=3, m=2", kBudget11, criterion11},
      {12, "sparse SNF and cold/warm cache", kBudget12Snf + 600, [&] { return criterion12(snf_seconds); }},
  };
  int failures = 0;
  for (const auto& c : all) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.ok && secs > c.budget) {
      o.ok = false;
      o.detail = "over budget";
    }
    failures += !o.ok;
    char line[256];
    std::snprintf(line, sizeof line, "%s  criterion %2d  %-40s %8.2f s (budget %.0f s)", o.ok ? "PASS" : "FAIL", c.id,
                  c.name.c_str(), secs, c.budget);
    std::cout << line;
    if (c.id == 12) std::cout << "  [SNF " << snf_seconds << " s]";
    if (!o.ok) std::cout << "  -- " << o.detail;
    std::cout << std::endl;
  }
  std::cout << (failures ? std::to_string(failures) + " criteria failed" : std::string("all criteria passed"))
            << std::endl;
  return failures ? 1 : 0;
}
