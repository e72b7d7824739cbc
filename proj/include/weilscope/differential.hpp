#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "weilscope/exponent_classes.hpp"
#include "weilscope/finding.hpp"
#include "weilscope/gf_core.hpp"

namespace weilscope {

enum class DiffAlgorithm { Table, Zech };

// N(1, v) = #{x in L : x^s + (1 - x)^s = v}, summarized over v in L.
struct DiffProfile {
  std::string field;
  std::uint32_t p = 0, q = 0;
  std::uint64_t s = 0;
  std::map<std::uint64_t, std::uint64_t> histogram;  // multiplicity -> number of v
  std::uint64_t V = 0;                               // N(1, 1)
  std::uint64_t n_at_zero = 0;                       // N(1, 0)
  std::vector<std::uint64_t> distinct_values;
  bool is_nice = false;
  std::optional<std::uint64_t> uniform_delta;
  bool has_two = false;
  // N(1, v) indexed by element encoding; only filled on request.
  std::vector<std::uint32_t> witness;

  bool same_counts(const DiffProfile& o) const {
    return q == o.q && s == o.s && histogram == o.histogram && V == o.V && n_at_zero == o.n_at_zero;
  }
};

// Precomputed ratio table log((1 - x)/x) by log x; shared across exponents.
class ZechContext {
 public:
  explicit ZechContext(const FiniteField& field);
  const FiniteField& field() const noexcept { return *field_; }
  const std::vector<std::uint32_t>& ratio() const noexcept { return ratio_; }

 private:
  const FiniteField* field_;
  std::vector<std::uint32_t> ratio_;
};

// N(1, .) by element encoding.
std::vector<std::uint32_t> n_one_map(const FiniteField& field, std::uint64_t s,
                                     DiffAlgorithm algo = DiffAlgorithm::Zech, const ZechContext* ctx = nullptr);
DiffProfile diff_profile(const FiniteField& field, std::uint64_t s, DiffAlgorithm algo = DiffAlgorithm::Zech,
                         bool keep_witness = false, const ZechContext* ctx = nullptr);
DiffProfile profile_from_map(const FiniteField& field, std::uint64_t s, std::vector<std::uint32_t> counts,
                             bool keep_witness);
std::uint64_t n_uv(const FiniteField& field, std::uint64_t s, Elem u, Elem v);

nlohmann::json to_json(const DiffProfile& profile);
// "k:freq;k:freq;..." ascending in k.
std::string histogram_string(const DiffProfile& profile);

// sum_a W(a)^3 == q^2 N(1,1).
bool verify_third_moment_link(const FiniteField& field, std::uint64_t s);
// sum_a W(a)^4 == q^2 sum_{v != 0} N(1,v)^2.
bool verify_fourth_moment_link(const FiniteField& field, std::uint64_t s);

// Structure checks for a three-valued invertible s; SKIPPED when s is not
// three-valued.
Finding verify_uniform_theorem(const FiniteField& field, std::uint64_t s);

// Profile of s = 3 against the characteristic's expected row. Odd p > 3
// yields TABLE-DISCREPANCY when the profile has the integral frequencies
// (q-1)/2, 1, (q-1)/2 instead of the printed q/2 - 1.
Finding verify_proposition_s3(const FiniteField& field);
// Profile of s = q - 2 against the row for q mod 6; for q = 1 mod 6 the
// exponent must not be nice.
Finding verify_proposition_qminus2(const FiniteField& field);

struct NiceSearchEntry {
  ExponentClass cls;
  DiffProfile profile;
};
struct NiceSearchResult {
  std::vector<NiceSearchEntry> nice;  // nontrivial nice classes
  // Nontrivial classes whose profile lacks multiplicity 2.
  std::vector<NiceSearchEntry> nc_violations;        // nice without 2
  std::vector<NiceSearchEntry> optimist_violations;  // any class without 2
  std::size_t classes_examined = 0;
};
// Every nontrivial class canonical, spread over `jobs` threads; results are
// ordered by canonical representative regardless of jobs.
NiceSearchResult search_nice(const FiniteField& field, unsigned jobs = 1);

}  // namespace weilscope
