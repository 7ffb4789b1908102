#include "gphom/report.hpp"

#include <chrono>
#include <ctime>

#include "gphom/field.hpp"

namespace gphom {

using nlohmann::json;

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::unknown: return "unknown";
    case Verdict::degenerate: return "degenerate";
  }
  return "unknown";
}

Verdict verdict_from_string(const std::string& s) {
  if (s == "pass") return Verdict::pass;
  if (s == "fail") return Verdict::fail;
  if (s == "unknown") return Verdict::unknown;
  if (s == "degenerate") return Verdict::degenerate;
  throw Error("unknown verdict '" + s + "'");
}

void RunConfig::validate() const {
  if (n == 0) throw UsageError("--n must be at least 1");
  if (n > 4) throw UsageError("--n above 4 is beyond desk scale");
  if (!is_prime(p)) throw UsageError("--p must be prime, got " + std::to_string(p));
  if (type() > n) throw UsageError("--gp-type must be at most n");
  if (m && *m < 1) throw UsageError("--m must be at least 1");
  if (caps.max_nonzeros == 0 || caps.max_entry_bits == 0 || caps.max_group_order == 0 || caps.max_basis == 0)
    throw UsageError("resource caps must be positive");
}

json RunConfig::params() const {
  return json{{"n", n}, {"p", p}, {"gp_type", type()}, {"k_max", kmax()},
              {"q_max", q_max}, {"m", localization().get_str()}};
}

int VerificationReport::exit_code() const {
  bool caps = false;
  for (const auto& r : records) {
    if (r.verdict == Verdict::fail) return 1;
    caps = caps || r.cap_exceeded;
  }
  return caps ? 3 : 0;
}

json VerificationReport::to_json() const {
  json recs = json::array();
  double total = 0;
  std::size_t cached = 0;
  for (const auto& r : records) {
    recs.push_back(json{{"check", r.id},
                        {"reference", r.reference},
                        {"params", r.params},
                        {"verdict", to_string(r.verdict)},
                        {"witnesses", r.witnesses},
                        {"timing", {{"wall_seconds", r.wall_seconds}, {"cache", r.from_cache ? "hit" : "miss"}}}});
    total += r.wall_seconds;
    cached += r.from_cache;
  }
  std::map<std::string, std::size_t> counts;
  for (const auto& r : records) ++counts[to_string(r.verdict)];
  char stamp[32];
  std::time_t now = std::time(nullptr);
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return json{{"schema", kReportSchema},
              {"code_version", kCodeVersion},
              {"subcommand", subcommand},
              {"config", config},
              {"summary", {{"records", records.size()}, {"verdicts", counts}, {"exit_code", exit_code()}}},
              {"records", recs},
              {"timing", {{"generated_at", stamp}, {"wall_seconds", total}, {"cache_hits", cached}}}};
}

json strip_timing(json j) {
  if (j.is_object()) {
    j.erase("timing");
    for (auto& [k, v] : j.items()) v = strip_timing(v);
  } else if (j.is_array()) {
    for (auto& v : j) v = strip_timing(v);
  }
  return j;
}

std::string VerificationReport::body() const { return strip_timing(to_json()).dump(2); }

void CheckRunner::run(const std::string& id, const std::string& reference, const json& params,
                      const std::function<CheckOutcome()>& body) {
  CheckRecord r;
  r.id = id;
  r.reference = reference;
  r.params = params;
  auto start = std::chrono::steady_clock::now();
  std::string key = cache_.key("check/" + id, params.dump());
  std::optional<json> hit;
  if (auto s = cache_.get(key)) {
    try {
      hit = json::parse(*s);
      r.verdict = verdict_from_string(hit->at("verdict").get<std::string>());
      r.witnesses = hit->at("witnesses");
      r.from_cache = true;
    } catch (const std::exception&) {
      hit.reset();
    }
  }
  if (!hit) {
    try {
      CheckOutcome o = body();
      r.verdict = o.verdict;
      r.witnesses = std::move(o.witnesses);
      r.cap_exceeded = o.cap_exceeded;
      if (!r.cap_exceeded)
        cache_.put(key, json{{"verdict", to_string(r.verdict)}, {"witnesses", r.witnesses}}.dump());
    } catch (const CapExceeded& e) {
      r.verdict = Verdict::unknown;
      r.cap_exceeded = true;
      r.witnesses = json{{"cap_exceeded", e.what()}, {"progress", e.progress()}};
    } catch (const Error& e) {
      r.verdict = Verdict::fail;
      r.witnesses = json{{"error", e.what()}};
    }
  }
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report_.records.push_back(std::move(r));
}

}  // namespace gphom
