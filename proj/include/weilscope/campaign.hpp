#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "weilscope/finding.hpp"

namespace weilscope {

enum class Check {
  Vanishing,
  Mod3,
  ThreeValued,
  UniformTheorem,
  NiceSearch,
  Valuation,
  Cmpr,
  Quadra,
  Extension,
  Propositions,
  Identities,
};

std::string_view to_string(Check c) noexcept;
Check check_from_string(std::string_view name);  // ConfigInvalid on unknown names
const std::vector<Check>& all_checks();

inline constexpr std::uint64_t kIdentityCap = 512;     // q^2-sized identity checks
inline constexpr std::uint64_t kConvolutionCap = 64;   // convolution powers
inline constexpr std::uint64_t kDeterminantCap = 32;   // dense q x q determinants

struct CampaignConfig {
  std::vector<std::uint32_t> characteristics;
  std::uint64_t max_q = 0;
  // Restricts to these degrees when nonempty.
  std::vector<std::uint32_t> degrees;
  std::vector<Check> checks;
  unsigned parallelism = 1;
  std::string cache_dir;  // empty disables the cache
  std::string output;     // empty writes to stdout
  std::string format = "json";
  bool witness = false;
};

// ConfigInvalid unless every invariant holds.
void validate(const CampaignConfig& config);
nlohmann::json to_json(const CampaignConfig& config);

// A finding together with the coordinates used for ordering and CSV rows.
struct Row {
  std::uint32_t p = 0, m = 0;
  std::uint64_t q = 0;
  std::uint64_t canonical = 0;  // class representative, 0 for field-level checks
  std::uint64_t congruence = 0;
  bool kloosterman = false;
  Finding finding;
};

struct CampaignResult {
  std::vector<Row> rows;  // sorted by (p, m, s, check)
  std::uint64_t units_computed = 0;
  std::uint64_t units_cached = 0;

  bool alarm() const noexcept;
  std::map<std::string, std::uint64_t> summary() const;
};

CampaignResult run_campaign(const CampaignConfig& config);

class FiniteField;
// Selected checks for the class of one invertible exponent, evaluated at the
// class representative; propositions ignore s.
std::vector<Finding> run_checks(const FiniteField& field, std::uint64_t s, const std::vector<Check>& checks,
                                bool witness = false);

nlohmann::json report_json(const CampaignConfig& config, const CampaignResult& result);
std::string report_csv(const CampaignResult& result);
inline constexpr std::string_view kCsvHeader =
    "p,m,q,s,s_mod_pminus1,check,kind,nice,multiplicities,kloosterman,detail";

// Content-addressed store of per-(field, class, check) findings.
class ResultCache {
 public:
  explicit ResultCache(std::filesystem::path dir);
  const std::filesystem::path& dir() const noexcept { return dir_; }

  static std::string make_key(std::string_view field, std::uint64_t s, std::string_view check, bool witness);
  std::filesystem::path path_for(std::string_view key) const;

  // nullopt on a miss; CacheCorrupt on an unreadable or tampered record.
  std::optional<std::vector<Finding>> get(std::string_view key) const;
  // Temp file plus rename, so readers never observe a partial record.
  void put(std::string_view key, const std::vector<Finding>& findings) const;

 private:
  std::filesystem::path dir_;
};

// Resolution order: WEILSCOPE_CACHE, then the configured directory.
std::string resolve_cache_dir(const std::string& configured);

}  // namespace weilscope
