#pragma once

// Run configuration, the catalog of checks behind each CLI subcommand, and
// the versioned JSON verification report.

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gphom/cache.hpp"
#include "gphom/errors.hpp"
#include "gphom/exactalg.hpp"

namespace gphom {

inline constexpr const char* kReportSchema = "gphom.report/1";

class UsageError : public Error {
 public:
  using Error::Error;
};

enum class Verdict { pass, fail, unknown, degenerate };
std::string to_string(Verdict v);
Verdict verdict_from_string(const std::string& s);

struct RunConfig {
  unsigned n = 2, p = 3;
  std::optional<unsigned> gp_type;  // defaults to n
  std::optional<unsigned> k_max;    // defaults to n + 2
  unsigned q_max = 2;
  std::optional<Integer> m;         // defaults to (n-1)!
  ResourceCaps caps;
  std::filesystem::path cache_dir;  // empty: no cache
  std::filesystem::path report_path;

  unsigned type() const { return gp_type.value_or(n); }
  unsigned kmax() const { return k_max.value_or(n + 2); }
  Integer localization() const { return m.value_or(factorial(n == 0 ? 0 : n - 1)); }
  // Throws UsageError.
  void validate() const;
  nlohmann::json params() const;
};

struct CheckRecord {
  std::string id;
  std::string reference;
  nlohmann::json params;
  Verdict verdict = Verdict::unknown;
  nlohmann::json witnesses;
  double wall_seconds = 0;
  bool from_cache = false;
  bool cap_exceeded = false;
};

struct VerificationReport {
  std::string subcommand;
  nlohmann::json config;
  std::vector<CheckRecord> records;

  // 0 all pass, 1 any fail, 3 caps exceeded without failures.
  int exit_code() const;
  // Timing and cache provenance live under "timing" keys.
  nlohmann::json to_json() const;
  // The report with every "timing" member removed, serialized.
  std::string body() const;
};

nlohmann::json strip_timing(nlohmann::json j);

struct CheckOutcome {
  Verdict verdict = Verdict::unknown;
  nlohmann::json witnesses = nlohmann::json::object();
  bool cap_exceeded = false;  // partial result; not cached
};

// Runs checks into a report, answering from the cache when possible. A check
// that throws CapExceeded becomes `unknown`; any other Error becomes `fail`
// with the message as witness. Outcomes limited by caps are not cached.
class CheckRunner {
 public:
  CheckRunner(VerificationReport& report, ResultCache& cache) : report_(report), cache_(cache) {}
  void run(const std::string& id, const std::string& reference, const nlohmann::json& params,
           const std::function<CheckOutcome()>& body);

 private:
  VerificationReport& report_;
  ResultCache& cache_;
};

const std::vector<std::string>& subcommands();

// Runs one subcommand under the config's caps. Throws UsageError for an
// unknown subcommand or a config the subcommand cannot use.
VerificationReport run_subcommand(const std::string& subcommand, const RunConfig& config, ResultCache& cache);

// d_k of the complex with the given parameters, from the cache or built and
// stored (every degree of the complex is stored at once).
ExactMatrix cached_differential(ResultCache& cache, unsigned n, unsigned p, unsigned gp_type, unsigned k_max,
                                bool unordered, unsigned k);

}  // namespace gphom
