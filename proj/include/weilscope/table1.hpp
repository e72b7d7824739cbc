#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace weilscope {

// One row of the reference listing of nontrivial nice exponents over F_{11^m}.
struct Table1Entry {
  std::uint32_t m = 0;
  std::uint64_t s = 0;
  std::uint64_t congruence = 0;
  bool dagger = false;  // s is equivalent to q - 2
  std::map<std::uint64_t, std::uint64_t> multiplicities;  // value -> frequency
};

const std::vector<Table1Entry>& table1_fixture();

struct Table1Report {
  bool match = false;
  std::vector<std::string> mismatches;
  nlohmann::json computed;  // per degree, the nice classes found
};

// Runs the nice search over F_{11^m}, m = 1..max_m, and diffs it against
// the fixture.
Table1Report reproduce_table1(unsigned jobs = 1, std::uint32_t max_m = 5);
nlohmann::json to_json(const Table1Report& r);

}  // namespace weilscope
