#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "gphom/cache.hpp"
#include "gphom/report.hpp"

namespace fs = std::filesystem;
using namespace gphom;

namespace {

constexpr int kUsage = 2;

void write_report(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << text << '\n';
  }
  fs::rename(tmp, path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Homology of GL_n(F_p) with general-position coefficients: desk-scale checks"};
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig cfg;
  unsigned gp_type = 0, k_max = 0;
  std::string m_text, cache_dir, report;
  bool no_cache = false;

  app.add_option("--n", cfg.n, "rank n of GL_n")->capture_default_str();
  app.add_option("--p", cfg.p, "prime p")->capture_default_str();
  app.add_option("--gp-type", gp_type, "general position type i (default n)");
  app.add_option("--k-max", k_max, "truncation degree of the complex (default n+2)");
  app.add_option("--qmax,--q-max", cfg.q_max, "top group homology degree")->capture_default_str();
  app.add_option("--m", m_text, "localization integer (default (n-1)!)");
  app.add_option("--cache-dir", cache_dir, "cache directory (default $GPHOM_CACHE_DIR or .gphom-cache)");
  app.add_flag("--no-cache", no_cache, "disable the result cache");
  app.add_option("--report", report, "write the JSON report here instead of stdout");
  app.add_option("--max-basis", cfg.caps.max_basis, "cap on materialized basis elements")->capture_default_str();
  app.add_option("--max-nonzeros", cfg.caps.max_nonzeros, "cap on matrix nonzeros")->capture_default_str();
  app.add_option("--max-group-order", cfg.caps.max_group_order, "cap on enumerated group order")
      ->capture_default_str();
  app.add_option("--max-entry-bits", cfg.caps.max_entry_bits, "cap on integer entry size")->capture_default_str();

  for (const auto& name : subcommands()) app.add_subcommand(name, "run the '" + name + "' checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  std::string sub = app.get_subcommands().front()->get_name();
  try {
    if (app.count("--gp-type")) cfg.gp_type = gp_type;
    if (app.count("--k-max")) cfg.k_max = k_max;
    if (!m_text.empty()) {
      Integer m;
      if (m.set_str(m_text, 10) != 0) throw UsageError("--m must be an integer");
      cfg.m = m;
    }
    cfg.cache_dir = no_cache ? fs::path{} : cache_dir.empty() ? ResultCache::default_dir() : fs::path(cache_dir);
    cfg.report_path = report;
    cfg.validate();

    ResultCache cache(cfg.cache_dir);
    VerificationReport r = run_subcommand(sub, cfg, cache);
    for (const auto& rec : r.records)
      std::cerr << to_string(rec.verdict) << "  " << rec.id << "  " << rec.params.dump()
                << (rec.from_cache ? "  (cached)" : "") << "\n";
    std::string text = r.to_json().dump(2);
    if (report.empty())
      std::cout << text << "\n";
    else
      write_report(report, text);
    return r.exit_code();
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const CapExceeded& e) {
    std::cerr << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
