#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "weilscope/campaign.hpp"
#include "weilscope/differential.hpp"
#include "weilscope/error.hpp"
#include "weilscope/gf_core.hpp"
#include "weilscope/kernels.hpp"
#include "weilscope/table1.hpp"
#include "weilscope/weil_spectrum.hpp"

using namespace weilscope;
using nlohmann::json;

namespace {

// Exit statuses: 0 ok, 1 alarm or mismatch, 2 usage or library error.
constexpr int kAlarm = 1;
constexpr int kFailure = 2;

std::string modulus_string(const FieldSpec& spec) {
  std::string out;
  for (std::size_t i = spec.modulus.size(); i-- > 0;) {
    const auto c = spec.modulus[i];
    if (c == 0) continue;
    if (!out.empty()) out += " + ";
    const std::string coeff = (c == 1 && i > 0) ? "" : std::to_string(c);
    if (i == 0)
      out += std::to_string(c);
    else if (i == 1)
      out += coeff + (coeff.empty() ? "x" : "*x");
    else
      out += coeff + (coeff.empty() ? "" : "*") + "x^" + std::to_string(i);
  }
  return out;
}

std::vector<Check> parse_checks(const std::string& text) {
  std::vector<Check> out;
  if (text == "all") return all_checks();
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) out.push_back(check_from_string(item));
  return out;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::ConfigInvalid, "cannot open output " + path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weilscope: Weil spectra, differential multiplicities and verification campaigns"};
  app.require_subcommand(1);

  std::uint32_t p = 0, m = 1;
  std::uint64_t s = 0;
  std::string out_path, algo = "fast", diff_algo = "zech";
  bool witness = false;

  auto* info = app.add_subcommand("field-info", "Deterministic presentation and table checksums of F_{p^m}");
  info->add_option("--p", p, "characteristic")->required();
  info->add_option("--m", m, "degree")->required();

  auto* spec = app.add_subcommand("spectrum", "Reduced Weil spectrum of x^s");
  spec->add_option("--p", p)->required();
  spec->add_option("--m", m)->required();
  spec->add_option("--s", s)->required();
  spec->add_option("--algo", algo, "fast or naive")->check(CLI::IsMember({"fast", "naive"}));

  auto* diff = app.add_subcommand("diff", "Differential profile N(1, .) of x^s");
  diff->add_option("--p", p)->required();
  diff->add_option("--m", m)->required();
  diff->add_option("--s", s)->required();
  diff->add_option("--algo", diff_algo, "zech or table")->check(CLI::IsMember({"zech", "table"}));
  diff->add_flag("--witness", witness, "include N(1, v) for every v");

  CampaignConfig config;
  std::string checks_text = "all", config_file;
  auto* camp = app.add_subcommand("campaign", "Run checks over every field and exponent class in range");
  camp->add_option("--p", config.characteristics, "characteristics")->delimiter(',');
  camp->add_option("--m", config.degrees, "restrict to these degrees")->delimiter(',');
  camp->add_option("--max-q", config.max_q, "largest field order");
  camp->add_option("--checks", checks_text, "comma-separated checks, or all");
  camp->add_option("--jobs", config.parallelism, "worker threads");
  camp->add_option("--cache", config.cache_dir, "cache directory (WEILSCOPE_CACHE overrides)");
  camp->add_option("--out", out_path, "report path, stdout by default");
  camp->add_option("--format", config.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  camp->add_flag("--witness", config.witness, "keep full N(1, v) maps in profiles");
  camp->add_option("--config", config_file, "JSON file with the same keys as the report's config block");

  unsigned jobs = 1;
  std::uint32_t max_m = 5;
  auto* t1 = app.add_subcommand("reproduce-table1", "Recompute the nice exponents over F_{11^m} and diff against the fixture");
  t1->add_option("--jobs", jobs);
  t1->add_option("--max-m", max_m)->check(CLI::Range(1, 5));
  t1->add_option("--out", out_path);

  std::string single_checks = "all";
  auto* chk = app.add_subcommand("check", "Run checks on the class of one exponent");
  chk->add_option("--p", p)->required();
  chk->add_option("--m", m)->required();
  chk->add_option("--s", s)->required();
  chk->add_option("--checks", single_checks);
  chk->add_flag("--witness", witness);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*info) {
      const auto f = FiniteField::build(p, m);
      json j{{"p", f.p()},
             {"m", f.m()},
             {"q", f.q()},
             {"modulus", f.spec().modulus},
             {"modulus_polynomial", modulus_string(f.spec())},
             {"generator", f.m() == 1 ? std::to_string(f.antilog(1)) : "x"},
             {"descriptor", f.descriptor()},
             {"table_checksum", f.table_checksum()},
             {"kernels", std::string(kernels::to_string(kernels::active().isa))}};
      std::cout << j.dump(2) << '\n';
      return 0;
    }
    if (*spec) {
      const auto f = FiniteField::build(p, m);
      const auto sp = full_spectrum(f, s, algo == "naive" ? Algorithm::Naive : Algorithm::Fast);
      json j = to_json(sp);
      if (s % f.units() != 0 && gcd_u64(s, f.units()) == 1) {
        const auto st = spectrum_stats(sp);
        j["stats"] = {{"value_count", st.value_count},
                      {"singular", st.is_singular},
                      {"integer_valued", st.is_integer_valued},
                      {"s_mod_pminus1", st.s_mod_pminus1}};
      }
      std::cout << j.dump(2) << '\n';
      return 0;
    }
    if (*diff) {
      const auto f = FiniteField::build(p, m);
      const auto d = diff_profile(f, s, diff_algo == "table" ? DiffAlgorithm::Table : DiffAlgorithm::Zech, witness);
      std::cout << to_json(d).dump(2) << '\n';
      return 0;
    }
    if (*camp) {
      if (!config_file.empty()) {
        std::ifstream in(config_file);
        if (!in) throw Error(Errc::ConfigInvalid, "cannot read " + config_file);
        json j;
        try {
          j = json::parse(in);
        } catch (const std::exception& e) {
          throw Error(Errc::ConfigInvalid, e.what());
        }
        if (j.contains("characteristics")) config.characteristics = j["characteristics"].get<std::vector<std::uint32_t>>();
        if (j.contains("max_q")) config.max_q = j["max_q"];
        if (j.contains("degrees")) config.degrees = j["degrees"].get<std::vector<std::uint32_t>>();
        if (j.contains("checks")) {
          config.checks.clear();
          for (const auto& c : j["checks"]) config.checks.push_back(check_from_string(c.get<std::string>()));
        }
        if (j.contains("witness")) config.witness = j["witness"];
      }
      if (config.checks.empty()) config.checks = parse_checks(checks_text);
      config.output = out_path;
      const auto result = run_campaign(config);
      const std::string text =
          config.format == "csv" ? report_csv(result) : report_json(config, result).dump(2) + "\n";
      emit(text, out_path);
      json summary = result.summary();
      std::cerr << "summary " << summary.dump() << " units computed=" << result.units_computed
                << " cached=" << result.units_cached << '\n';
      return result.alarm() ? kAlarm : 0;
    }
    if (*t1) {
      const auto r = reproduce_table1(jobs, max_m);
      emit(to_json(r).dump(2) + "\n", out_path);
      for (const auto& msg : r.mismatches) std::cerr << "mismatch: " << msg << '\n';
      return r.match ? 0 : kAlarm;
    }
    if (*chk) {
      const auto f = FiniteField::build(p, m);
      auto findings = run_checks(f, s, parse_checks(single_checks), witness);
      json arr = json::array();
      bool alarm = false;
      for (const auto& fnd : findings) {
        arr.push_back(to_json(fnd));
        alarm |= fnd.is_alarm();
      }
      std::cout << arr.dump(2) << '\n';
      return alarm ? kAlarm : 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return 0;
}
