#include "weilscope/table1.hpp"

#include <algorithm>

#include "weilscope/differential.hpp"
#include "weilscope/gf_core.hpp"

namespace weilscope {

const std::vector<Table1Entry>& table1_fixture() {
  // Nontrivial nice exponents over F_{11^m}, m <= 5; m = 2 has none.
  static const std::vector<Table1Entry> rows = {
      {1, 3, 3, false, {{0, 5}, {1, 1}, {2, 5}}},
      {1, 9, 9, true, {{0, 5}, {1, 1}, {2, 5}}},
      {3, 3, 3, false, {{0, 665}, {1, 1}, {2, 665}}},
      {3, 1209, 9, true, {{0, 665}, {1, 1}, {2, 665}}},
      {4, 241, 1, false, {{0, 7380}, {2, 7260}, {121, 1}}},
      {5, 3, 3, false, {{0, 80525}, {1, 1}, {2, 80525}}},
      {5, 146409, 9, true, {{0, 80525}, {1, 1}, {2, 80525}}},
  };
  return rows;
}

Table1Report reproduce_table1(unsigned jobs, std::uint32_t max_m) {
  constexpr std::uint32_t p = 11;
  Table1Report report;
  report.computed = nlohmann::json::object();
  for (std::uint32_t m = 1; m <= max_m; ++m) {
    const auto field = FiniteField::build(p, m);
    const auto found = search_nice(field, jobs);
    auto rows = nlohmann::json::array();
    for (const auto& e : found.nice) {
      auto hist = nlohmann::json::array();
      for (auto [k, freq] : e.profile.histogram) hist.push_back({k, freq});
      rows.push_back({{"canonical", e.cls.canonical},
                      {"congruence", e.cls.congruence},
                      {"kloosterman", e.cls.kloosterman},
                      {"histogram", hist}});
    }
    report.computed[std::to_string(m)] = rows;

    std::vector<const Table1Entry*> expected;
    for (const auto& row : table1_fixture())
      if (row.m == m) expected.push_back(&row);
    const std::string where = "m=" + std::to_string(m) + ": ";
    if (expected.size() != found.nice.size())
      report.mismatches.push_back(where + "expected " + std::to_string(expected.size()) + " classes, found " +
                                  std::to_string(found.nice.size()));
    for (const auto* row : expected) {
      auto it = std::find_if(found.nice.begin(), found.nice.end(), [&](const NiceSearchEntry& e) {
        return std::binary_search(e.cls.members.begin(), e.cls.members.end(), row->s);
      });
      const std::string tag = where + "s=" + std::to_string(row->s) + ": ";
      if (it == found.nice.end()) {
        report.mismatches.push_back(tag + "no nice class contains s");
        continue;
      }
      // The congruence column belongs to the listed s itself.
      if (row->s % (p - 1) != row->congruence) report.mismatches.push_back(tag + "congruence column");
      if (std::binary_search(it->cls.coset.begin(), it->cls.coset.end(), row->s) &&
          it->cls.congruence != row->congruence)
        report.mismatches.push_back(tag + "class congruence");
      if (it->cls.kloosterman != row->dagger) report.mismatches.push_back(tag + "dagger");
      if (it->profile.histogram != row->multiplicities) report.mismatches.push_back(tag + "multiplicities");
    }
  }
  report.match = report.mismatches.empty();
  return report;
}

nlohmann::json to_json(const Table1Report& r) {
  auto fixture = nlohmann::json::array();
  for (const auto& row : table1_fixture()) {
    auto hist = nlohmann::json::array();
    for (auto [k, freq] : row.multiplicities) hist.push_back({k, freq});
    fixture.push_back({{"m", row.m}, {"s", row.s}, {"congruence", row.congruence}, {"dagger", row.dagger},
                       {"histogram", hist}});
  }
  return {{"schema", 1},
          {"match", r.match},
          {"mismatches", r.mismatches},
          {"fixture", fixture},
          {"computed", r.computed}};
}

}  // namespace weilscope
