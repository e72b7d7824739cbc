#include "weilscope/finding.hpp"

#include "weilscope/error.hpp"

namespace weilscope {

namespace {
constexpr std::pair<FindingKind, std::string_view> kNames[] = {
    {FindingKind::Witness, "WITNESS"},
    {FindingKind::Pass, "PASS"},
    {FindingKind::Counterexample, "COUNTEREXAMPLE"},
    {FindingKind::TableDiscrepancy, "TABLE-DISCREPANCY"},
    {FindingKind::FormulaMismatch, "FORMULA-MISMATCH"},
    {FindingKind::Skipped, "SKIPPED"},
};
}  // namespace

std::string_view to_string(FindingKind kind) noexcept {
  for (auto [k, name] : kNames)
    if (k == kind) return name;
  return "?";
}

FindingKind finding_kind_from_string(std::string_view text) {
  for (auto [k, name] : kNames)
    if (name == text) return k;
  throw Error(Errc::InvalidArgument, "unknown finding kind " + std::string(text));
}

nlohmann::json to_json(const Finding& f) {
  return {{"kind", to_string(f.kind)}, {"check", f.check}, {"field", f.field}, {"s", f.s}, {"payload", f.payload}};
}

Finding finding_from_json(const nlohmann::json& j) {
  Finding f;
  f.kind = finding_kind_from_string(j.at("kind").get<std::string>());
  f.check = j.at("check").get<std::string>();
  f.field = j.at("field").get<std::string>();
  f.s = j.at("s").get<std::uint64_t>();
  f.payload = j.at("payload");
  return f;
}

}  // namespace weilscope
