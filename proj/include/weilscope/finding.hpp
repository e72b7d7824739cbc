#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "json.hpp"

namespace weilscope {

enum class FindingKind { Witness, Pass, Counterexample, TableDiscrepancy, FormulaMismatch, Skipped };

std::string_view to_string(FindingKind kind) noexcept;
FindingKind finding_kind_from_string(std::string_view text);

struct Finding {
  FindingKind kind = FindingKind::Pass;
  std::string check;
  std::string field;  // field descriptor
  std::uint64_t s = 0;
  nlohmann::json payload = nlohmann::json::object();

  // Nonzero exit status material.
  bool is_alarm() const noexcept {
    return kind == FindingKind::Counterexample || kind == FindingKind::FormulaMismatch;
  }
};

nlohmann::json to_json(const Finding& f);
Finding finding_from_json(const nlohmann::json& j);

}  // namespace weilscope
