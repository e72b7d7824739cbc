#include "weilscope/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>

#include "weilscope/differential.hpp"
#include "weilscope/error.hpp"
#include "weilscope/exponent_classes.hpp"
#include "weilscope/gf_core.hpp"
#include "weilscope/valuation.hpp"
#include "weilscope/weil_spectrum.hpp"

namespace weilscope {

namespace {

constexpr std::pair<Check, std::string_view> kNames[] = {
    {Check::Vanishing, "vanishing"},   {Check::Mod3, "mod3"},           {Check::ThreeValued, "three_valued"},
    {Check::UniformTheorem, "uniform_theorem"}, {Check::NiceSearch, "nice_search"}, {Check::Valuation, "valuation"},
    {Check::Cmpr, "cmpr"},             {Check::Quadra, "quadra"},       {Check::Extension, "extension"},
    {Check::Propositions, "propositions"}, {Check::Identities, "identities"},
};

bool is_power_of_two(std::uint64_t x) { return x != 0 && (x & (x - 1)) == 0; }

// Checks that also look at the class of s = 1.
bool includes_trivial(Check c) {
  return c == Check::Vanishing || c == Check::Mod3 || c == Check::Valuation || c == Check::Extension;
}

struct FieldContext {
  FiniteField field;
  std::vector<FiniteField> proper_subfields;  // ascending degree
  std::optional<ZechContext> zech;
};

struct Unit {
  const ExponentClass* cls = nullptr;  // null for the field-level unit
};

Finding base_finding(const FiniteField& f, std::uint64_t s, Check check) {
  Finding out;
  out.check = std::string(to_string(check));
  out.field = f.descriptor();
  out.s = s;
  return out;
}

class ClassWork {
 public:
  ClassWork(const FieldContext& ctx, const ExponentClass& cls, bool witness)
      : ctx_(ctx), f_(ctx.field), cls_(cls), s_(cls.canonical), witness_(witness) {}

  std::vector<Finding> run(Check check) {
    try {
      return dispatch(check);
    } catch (const Error& e) {
      Finding out = base_finding(f_, s_, check);
      out.kind = FindingKind::Skipped;
      out.payload["reason"] = e.what();
      return {out};
    }
  }

 private:
  const WeilTable& table() {
    if (!table_) table_.emplace(weil_table(f_, s_));
    return *table_;
  }
  const DiffProfile& profile() {
    if (!profile_) profile_.emplace(diff_profile(f_, s_, DiffAlgorithm::Zech, witness_, &*ctx_.zech));
    return *profile_;
  }
  bool three_valued() {
    if (!three_valued_) three_valued_ = distinct_value_count(table(), 3) == 3;
    return *three_valued_;
  }
  bool hvc_applies() const { return f_.q() > 2 && (f_.p() == 2 || s_ % (f_.p() - 1) == 1); }

  std::vector<Finding> dispatch(Check check) {
    const std::uint32_t p = f_.p(), m = f_.m();
    const std::uint64_t q = f_.q();
    switch (check) {
      case Check::Vanishing:
        if (!hvc_applies()) return {};
        return {check_vanishing(f_, table())};
      case Check::Mod3:
        if (!hvc_applies()) return {};
        return {check_mod3(f_, table())};
      case Check::ThreeValued: {
        if (!three_valued()) return {};
        const Spectrum sp = summarize(table());
        const auto rep = three_valued_report(sp);
        Finding out = base_finding(f_, s_, check);
        auto violations = rep->violations;
        if (is_power_of_two(m)) violations.push_back("three-valued with degree a power of two");
        out.payload["report"] = to_json(*rep);
        out.payload["spectrum"] = to_json(sp);
        if (violations.empty()) {
          out.kind = FindingKind::Witness;
        } else {
          out.kind = FindingKind::Counterexample;
          out.payload["failures"] = violations;
        }
        return {out};
      }
      case Check::UniformTheorem:
        if (!three_valued()) return {};
        return {verify_uniform_theorem(f_, s_)};
      case Check::NiceSearch: {
        const auto& d = profile();
        std::vector<std::string> conjectures;
        if (p != 2 && !d.has_two) {
          conjectures.push_back("optimist");
          if (d.is_nice) conjectures.push_back("nice_exponent");
        }
        if (!d.is_nice && conjectures.empty()) return {};
        Finding out = base_finding(f_, s_, check);
        out.payload["class"] = to_json(cls_);
        out.payload["profile"] = to_json(d);
        if (conjectures.empty()) {
          out.kind = FindingKind::Witness;
        } else {
          out.kind = FindingKind::Counterexample;
          out.payload["conjectures"] = conjectures;
        }
        return {out};
      }
      case Check::Valuation:
        if (q == 2) return {};
        return {valuation_finding(f_, table())};
      case Check::Cmpr:
        if (!is_power_of_two(m)) return {};
        return {check_cmpr_bound(f_, s_)};
      case Check::Quadra: {
        if (m % 2 != 0) return {};
        const FiniteField* K = nullptr;
        for (const auto& sub : ctx_.proper_subfields)
          if (2 * sub.m() == m) K = &sub;
        auto out = check_quadratic_lemma(f_, *K, s_);
        if (out.kind == FindingKind::Skipped) return {};
        return {out};
      }
      case Check::Extension: {
        std::vector<Finding> out;
        for (const auto& K : ctx_.proper_subfields) out.push_back(check_extension_inequality(f_, K, s_));
        return out;
      }
      case Check::Identities:
        return {identities()};
      case Check::Propositions:
        return {};
    }
    return {};
  }

  Finding identities() {
    Finding out = base_finding(f_, s_, Check::Identities);
    const std::uint64_t q = f_.q();
    if (q > kIdentityCap) {
      out.kind = FindingKind::Skipped;
      out.payload["reason"] = "q above the identity cap " + std::to_string(kIdentityCap);
      return out;
    }
    nlohmann::json results = nlohmann::json::object();
    bool ok = true;
    auto record = [&](const char* name, bool pass) {
      results[name] = pass;
      ok &= pass;
    };
    if (q > 2) record("scaling_law", verify_scaling_law(f_, s_, f_.from_log(1)));
    if (f_.p() > 2) record("galois_law", verify_galois_law(f_, s_, f_.p() - 1));
    const Elem one = 1;
    record("poisson", verify_poisson(f_, s_, std::span<const Elem>(&one, 1)));
    record("third_moment", verify_third_moment_link(f_, s_));
    record("fourth_moment", verify_fourth_moment_link(f_, s_));
    if (q <= kConvolutionCap) {
      const auto a = annihilating_identity(f_, s_);
      record("annihilating", a.ok());
      results["q_divides_prod_nonzero"] = a.q_divides_prod_nonzero;
    } else {
      results["annihilating"] = "skipped";
    }
    if (q <= kDeterminantCap)
      record("determinants", determinant_identities(f_, s_).ok());
    else
      results["determinants"] = "skipped";
    out.payload["results"] = results;
    out.kind = ok ? FindingKind::Pass : FindingKind::Counterexample;
    if (!ok) out.payload["spectrum"] = to_json(full_spectrum(f_, s_));
    return out;
  }

  const FieldContext& ctx_;
  const FiniteField& f_;
  const ExponentClass& cls_;
  std::uint64_t s_;
  bool witness_;
  std::optional<WeilTable> table_;
  std::optional<DiffProfile> profile_;
  std::optional<bool> three_valued_;
};

std::vector<Finding> field_level(const FiniteField& f) {
  std::vector<Finding> out{verify_proposition_s3(f)};
  if (f.q() >= 3) out.push_back(verify_proposition_qminus2(f));
  return out;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string_view to_string(Check c) noexcept {
  for (const auto& [k, name] : kNames)
    if (k == c) return name;
  return "unknown";
}

Check check_from_string(std::string_view name) {
  for (const auto& [k, n] : kNames)
    if (n == name) return k;
  throw Error(Errc::ConfigInvalid, "unknown check '" + std::string(name) + "'");
}

const std::vector<Check>& all_checks() {
  static const std::vector<Check> all = [] {
    std::vector<Check> v;
    for (const auto& [k, name] : kNames) v.push_back(k);
    return v;
  }();
  return all;
}

void validate(const CampaignConfig& c) {
  if (c.characteristics.empty()) throw Error(Errc::ConfigInvalid, "no characteristics given");
  for (auto p : c.characteristics)
    if (!is_prime(p)) throw Error(Errc::ConfigInvalid, std::to_string(p) + " is not prime");
  if (c.max_q < 2 || c.max_q > kMaxFieldOrder) throw Error(Errc::ConfigInvalid, "max_q must lie in [2, 2^24]");
  if (c.checks.empty()) throw Error(Errc::ConfigInvalid, "no checks selected");
  if (c.parallelism < 1) throw Error(Errc::ConfigInvalid, "parallelism must be at least 1");
  if (c.format != "json" && c.format != "csv") throw Error(Errc::ConfigInvalid, "format must be json or csv");
  for (auto m : c.degrees)
    if (m == 0) throw Error(Errc::ConfigInvalid, "degree 0");
}

nlohmann::json to_json(const CampaignConfig& c) {
  // Parallelism, cache and output location do not affect results and are left out.
  std::vector<std::string> checks;
  for (auto k : c.checks) checks.emplace_back(to_string(k));
  return {{"characteristics", c.characteristics},
          {"max_q", c.max_q},
          {"degrees", c.degrees},
          {"checks", checks},
          {"witness", c.witness}};
}

bool CampaignResult::alarm() const noexcept {
  return std::any_of(rows.begin(), rows.end(), [](const Row& r) { return r.finding.is_alarm(); });
}

std::map<std::string, std::uint64_t> CampaignResult::summary() const {
  std::map<std::string, std::uint64_t> out;
  for (auto k : {FindingKind::Witness, FindingKind::Pass, FindingKind::Counterexample, FindingKind::TableDiscrepancy,
                 FindingKind::FormulaMismatch, FindingKind::Skipped})
    out[std::string(to_string(k))] = 0;
  for (const auto& r : rows) out[std::string(to_string(r.finding.kind))]++;
  return out;
}

CampaignResult run_campaign(const CampaignConfig& config) {
  validate(config);
  const std::string cache_dir = resolve_cache_dir(config.cache_dir);
  std::optional<ResultCache> cache;
  if (!cache_dir.empty()) cache.emplace(cache_dir);

  auto checks = config.checks;
  std::sort(checks.begin(), checks.end());
  checks.erase(std::unique(checks.begin(), checks.end()), checks.end());
  auto primes = config.characteristics;
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());

  CampaignResult result;
  std::atomic<std::uint64_t> computed{0}, cached{0};

  for (auto p : primes) {
    for (std::uint32_t m = 1;; ++m) {
      const auto q = checked_power(p, m, config.max_q);
      if (!q) break;
      if (!config.degrees.empty() && std::find(config.degrees.begin(), config.degrees.end(), m) == config.degrees.end())
        continue;
      FieldContext ctx{FiniteField::build(p, m), {}, std::nullopt};
      for (std::uint32_t d = 1; d < m; ++d)
        if (m % d == 0) ctx.proper_subfields.push_back(FiniteField::build(p, d));
      ctx.zech.emplace(ctx.field);
      const auto classes = enumerate_classes(ctx.field);
      const std::string descriptor = ctx.field.descriptor();

      std::vector<Unit> units;
      if (std::find(checks.begin(), checks.end(), Check::Propositions) != checks.end()) units.push_back({nullptr});
      for (const auto& c : classes) {
        bool wanted = false;
        for (auto k : checks) wanted |= k != Check::Propositions && (!c.trivial || includes_trivial(k));
        if (wanted) units.push_back({&c});
      }

      std::vector<std::vector<Row>> out(units.size());
      std::atomic<std::size_t> next{0};
      auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < units.size();) {
          const ExponentClass* cls = units[i].cls;
          std::optional<ClassWork> work;
          if (cls) work.emplace(ctx, *cls, config.witness);
          for (auto k : checks) {
            if ((k == Check::Propositions) != (cls == nullptr)) continue;
            if (cls && cls->trivial && !includes_trivial(k)) continue;
            const std::uint64_t s = cls ? cls->canonical : 0;
            const std::string key = ResultCache::make_key(descriptor, s, to_string(k), config.witness);
            std::optional<std::vector<Finding>> found;
            if (cache) found = cache->get(key);
            if (found) {
              cached++;
            } else {
              found = cls ? work->run(k) : field_level(ctx.field);
              computed++;
              if (cache) cache->put(key, *found);
            }
            for (auto& fnd : *found) {
              Row r{p, m, *q, s, 0, false, std::move(fnd)};
              if (cls) {
                r.congruence = cls->congruence;
                r.kloosterman = cls->kloosterman;
              }
              out[i].push_back(std::move(r));
            }
          }
        }
      };
      const unsigned jobs = std::max(1u, std::min<unsigned>(config.parallelism, std::max<std::size_t>(1, units.size())));
      {
        std::vector<std::jthread> pool;
        for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(worker);
        worker();
      }
      for (auto& rows : out)
        for (auto& r : rows) result.rows.push_back(std::move(r));
    }
  }

  std::stable_sort(result.rows.begin(), result.rows.end(), [](const Row& a, const Row& b) {
    if (a.p != b.p) return a.p < b.p;
    if (a.m != b.m) return a.m < b.m;
    if (a.finding.s != b.finding.s) return a.finding.s < b.finding.s;
    if (a.finding.check != b.finding.check) return a.finding.check < b.finding.check;
    return a.finding.payload.dump() < b.finding.payload.dump();
  });
  result.units_computed = computed;
  result.units_cached = cached;
  return result;
}

std::vector<Finding> run_checks(const FiniteField& field, std::uint64_t s, const std::vector<Check>& checks,
                                bool witness) {
  const auto cls = approx_class(field.q(), field.p(), s);
  FieldContext ctx{field, {}, std::nullopt};
  for (std::uint32_t d = 1; d < field.m(); ++d)
    if (field.m() % d == 0) ctx.proper_subfields.push_back(FiniteField::build(field.p(), d));
  ctx.zech.emplace(ctx.field);
  ClassWork work(ctx, cls, witness);
  std::vector<Finding> out;
  for (auto k : checks) {
    auto part = k == Check::Propositions ? field_level(ctx.field) : work.run(k);
    for (auto& f : part) out.push_back(std::move(f));
  }
  return out;
}

nlohmann::json report_json(const CampaignConfig& config, const CampaignResult& result) {
  auto findings = nlohmann::json::array();
  for (const auto& r : result.rows) {
    auto j = to_json(r.finding);
    j["p"] = r.p;
    j["m"] = r.m;
    j["q"] = r.q;
    findings.push_back(std::move(j));
  }
  return {{"schema", 1}, {"config", to_json(config)}, {"summary", result.summary()}, {"findings", findings}};
}

std::string report_csv(const CampaignResult& result) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& r : result.rows) {
    const auto& f = r.finding;
    const auto& pl = f.payload;
    std::string nice, mult;
    if (pl.contains("profile")) {
      nice = pl["profile"]["nice"].get<bool>() ? "true" : "false";
      for (const auto& e : pl["profile"]["histogram"]) {
        if (!mult.empty()) mult += ';';
        mult += std::to_string(e[0].get<std::uint64_t>()) + ':' + std::to_string(e[1].get<std::uint64_t>());
      }
    }
    const std::uint64_t cong = r.p == 2 ? 0 : f.s % (r.p - 1);
    out += std::to_string(r.p) + ',' + std::to_string(r.m) + ',' + std::to_string(r.q) + ',' + std::to_string(f.s) +
           ',' + std::to_string(cong) + ',' + f.check + ',' + std::string(to_string(f.kind)) + ',' + nice + ',' +
           mult + ',' + (r.kloosterman ? "true" : "false") + ',' + csv_escape(pl.dump()) + '\n';
  }
  return out;
}

std::string resolve_cache_dir(const std::string& configured) {
  if (const char* env = std::getenv("WEILSCOPE_CACHE"); env && *env) return env;
  return configured;
}

}  // namespace weilscope
