#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "weilscope/campaign.hpp"
#include "weilscope/error.hpp"
#include "weilscope/gf_core.hpp"
#include "weilscope/table1.hpp"

using namespace weilscope;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const char* tag) {
  std::random_device rd;
  auto dir = fs::temp_directory_path() / ("weilscope-test-" + std::string(tag) + "-" + std::to_string(rd()));
  fs::remove_all(dir);
  return dir;
}

CampaignConfig small_config() {
  CampaignConfig c;
  c.characteristics = {2, 3, 5};
  c.max_q = 128;
  c.checks = all_checks();
  return c;
}

}  // namespace

TEST_CASE("config validation") {
  auto c = small_config();
  CHECK_NOTHROW(validate(c));
  auto bad = c;
  bad.checks.clear();
  CHECK_THROWS_AS(validate(bad), Error);
  bad = c;
  bad.max_q = (1u << 24) + 1;
  CHECK_THROWS_AS(validate(bad), Error);
  bad = c;
  bad.characteristics = {4};
  CHECK_THROWS_AS(validate(bad), Error);
  bad = c;
  bad.parallelism = 0;
  try {
    validate(bad);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ConfigInvalid);
  }
  CHECK_THROWS_AS(check_from_string("bogus"), Error);
  for (auto k : all_checks()) CHECK(check_from_string(to_string(k)) == k);
}

TEST_CASE("campaign reports are identical across parallelism and sorted") {
  auto c = small_config();
  const auto a = run_campaign(c);
  c.parallelism = 4;
  const auto b = run_campaign(c);
  CHECK(report_json(c, a).dump() == report_json(c, b).dump());
  CHECK(report_csv(a) == report_csv(b));
  // F_125 carries a class with no differential multiplicity 2; that row is
  // the only counterexample in range and it is not nice.
  CHECK(a.alarm());
  std::size_t cex = 0;
  for (const auto& r : a.rows) {
    if (r.finding.kind != FindingKind::Counterexample) continue;
    ++cex;
    CHECK(r.finding.check == "nice_search");
    CHECK(r.p == 5);
    CHECK(r.m == 3);
    CHECK(r.canonical == 13);
    CHECK(r.finding.payload["conjectures"] == nlohmann::json::array({"optimist"}));
  }
  CHECK(cex == 1);
  for (std::size_t i = 1; i < a.rows.size(); ++i) {
    const auto& x = a.rows[i - 1];
    const auto& y = a.rows[i];
    CHECK(std::tie(x.p, x.m, x.finding.s) <= std::tie(y.p, y.m, y.finding.s));
  }
  auto j = report_json(c, a);
  CHECK(j["schema"] == 1);
  CHECK(j["summary"]["COUNTEREXAMPLE"] == 1);
  CHECK(j["summary"]["FORMULA-MISMATCH"] == 0);
  CHECK(j["summary"]["TABLE-DISCREPANCY"].get<int>() > 0);  // p = 5 rows of the s = 3 table
}

TEST_CASE("vanishing campaign yields witnesses only") {
  CampaignConfig c;
  c.characteristics = {2, 3, 5, 7};
  c.max_q = 512;
  c.checks = {Check::Vanishing};
  const auto r = run_campaign(c);
  CHECK(r.rows.size() > 0);
  for (const auto& row : r.rows) CHECK(row.finding.kind == FindingKind::Witness);
}

TEST_CASE("three-valued search over degrees 4 finds nothing for p = 2, 3") {
  CampaignConfig c;
  c.characteristics = {2, 3};
  c.max_q = 81;
  c.degrees = {4};
  c.checks = {Check::ThreeValued};
  const auto r = run_campaign(c);
  CHECK(r.units_computed > 0);
  CHECK(r.rows.empty());
  // Degree 3 over F_2 does have three-valued classes (Gold, s = 3).
  c.degrees = {3};
  c.characteristics = {2};
  c.max_q = 8;
  CHECK_FALSE(run_campaign(c).rows.empty());
}

TEST_CASE("cache round trip, reuse and corruption") {
  const auto dir = fresh_dir("cache");
  ResultCache cache(dir);
  Finding f;
  f.kind = FindingKind::Witness;
  f.check = "vanishing";
  f.field = "p=2 m=3";
  f.s = 3;
  f.payload = {{"a", 5}};
  const auto key = ResultCache::make_key(f.field, 3, "vanishing", false);
  CHECK_FALSE(cache.get(key).has_value());
  cache.put(key, {f});
  auto back = cache.get(key);
  REQUIRE(back.has_value());
  REQUIRE(back->size() == 1);
  CHECK(to_json((*back)[0]) == to_json(f));

  // Byte-identical rewrite.
  std::ifstream in1(cache.path_for(key), std::ios::binary);
  std::string first((std::istreambuf_iterator<char>(in1)), {});
  cache.put(key, *back);
  std::ifstream in2(cache.path_for(key), std::ios::binary);
  std::string second((std::istreambuf_iterator<char>(in2)), {});
  CHECK(first == second);

  {
    std::ofstream out(cache.path_for(key), std::ios::binary | std::ios::trunc);
    auto tampered = first;
    tampered.replace(tampered.find("\"a\":5"), 5, "\"a\":6");
    out << tampered;
  }
  try {
    cache.get(key);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::CacheCorrupt);
  }
  {
    std::ofstream out(cache.path_for(key), std::ios::binary | std::ios::trunc);
    out << "{not json";
  }
  CHECK_THROWS_AS(cache.get(key), Error);
  fs::remove_all(dir);
}

TEST_CASE("rerun with a warm cache recomputes nothing and reproduces the report") {
  const auto dir = fresh_dir("rerun");
  auto c = small_config();
  c.cache_dir = dir.string();
  const auto cold = run_campaign(c);
  CHECK(cold.units_computed > 0);
  const auto warm = run_campaign(c);
  CHECK(warm.units_computed == 0);
  CHECK(warm.units_cached == cold.units_computed);
  CHECK(report_json(c, cold).dump() == report_json(c, warm).dump());

  // Losing part of the cache (an interrupted run) still converges.
  std::size_t removed = 0;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file() && removed++ % 3 == 0) fs::remove(e.path());
  const auto resumed = run_campaign(c);
  CHECK(resumed.units_computed > 0);
  CHECK(report_json(c, resumed).dump() == report_json(c, cold).dump());
  fs::remove_all(dir);
}

TEST_CASE("single-exponent checks") {
  auto f = FiniteField::build(2, 5);
  auto fs_ = run_checks(f, 3, {Check::ThreeValued, Check::Valuation, Check::NiceSearch});
  REQUIRE(fs_.size() == 3);
  CHECK(fs_[0].kind == FindingKind::Witness);
  CHECK(fs_[1].kind == FindingKind::Pass);
  CHECK(fs_[2].kind == FindingKind::Witness);
}

TEST_CASE("CSV layout") {
  CampaignConfig c;
  c.characteristics = {11};
  c.max_q = 11;
  c.checks = {Check::NiceSearch};
  auto csv = report_csv(run_campaign(c));
  CHECK(csv.starts_with(std::string(kCsvHeader) + "\n"));
  CHECK(csv.find("11,1,11,3,3,nice_search,WITNESS,true,0:5;1:1;2:5,false,") != std::string::npos);
  CHECK(csv.find("11,1,11,9,9,nice_search,WITNESS,true,0:5;1:1;2:5,true,") != std::string::npos);
}

TEST_CASE("Table 1 fixture, m <= 3") {
  auto r = reproduce_table1(1, 3);
  CHECK(r.match);
  CHECK(r.computed["2"].empty());
  CHECK(table1_fixture().size() == 7);
}
