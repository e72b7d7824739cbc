#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "json.hpp"
#include "weilscope/finding.hpp"
#include "weilscope/gf_core.hpp"
#include "weilscope/weil_spectrum.hpp"

namespace weilscope {

std::uint64_t digitsum_p(std::uint32_t p, std::uint64_t k);

// val_L(s) in units of v_P, P = (1 - zeta_p), computed from the Weil values
// and separately from base-p digit sums of Gauss-sum indices.
struct ValuationReport {
  std::string field;
  std::uint32_t p = 0, m = 0;
  std::uint64_t s = 0;
  std::uint64_t val_phi_direct = 0;
  // Absent for q = 2, where no nontrivial character exists.
  std::optional<std::uint64_t> val_phi_stickelberger;
  Elem argmin_a = 0;
  std::string argmin_value;
  std::uint64_t argmin_k = 0;

  bool consistent() const noexcept { return !val_phi_stickelberger || *val_phi_stickelberger == val_phi_direct; }
  // val_phi / (p - 1) in lowest terms.
  std::string val_p() const;
};

ValuationReport val_report(const FiniteField& field, std::uint64_t s);
ValuationReport val_report(const FiniteField& field, const WeilTable& table);
// orbits must come from summarize(table).
ValuationReport val_report(const FiniteField& field, const WeilTable& table, const OrbitDecomposition& orbits);
// Digit-sum minimum alone; O(q).
std::uint64_t stickelberger_valuation(const FiniteField& field, std::uint64_t s, std::uint64_t* argmin_k = nullptr);
nlohmann::json to_json(const ValuationReport& r);
// PASS, or FORMULA-MISMATCH carrying both witnesses and the spectrum.
Finding valuation_finding(const FiniteField& field, const WeilTable& table);

// val_L(s) <= [L:K] val_K(s mod (|K| - 1)).
Finding check_extension_inequality(const FiniteField& L, const FiniteField& K, std::uint64_t s);
// 2 val_p(s) <= [L:F_p] when the degree is a power of two and s is nontrivial.
Finding check_cmpr_bound(const FiniteField& field, std::uint64_t s);
// [L:K] = 2, s = 1 mod |K|-1, s != 1 mod |L|-1: -|K| is a value and
// 2 val_p(s) = [L:F_p].
Finding check_quadratic_lemma(const FiniteField& L, const FiniteField& K, std::uint64_t s);

}  // namespace weilscope
