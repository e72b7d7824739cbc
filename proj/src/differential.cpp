#include "weilscope/differential.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <thread>

#include "weilscope/error.hpp"
#include "weilscope/kernels.hpp"
#include "weilscope/weil_spectrum.hpp"

namespace weilscope {

namespace {

constexpr std::uint32_t kChunk = 4096;

void require_invertible_s(const FiniteField& field, std::uint64_t s) {
  if (s == 0 || gcd_u64(s, field.units()) != 1)
    throw Error(Errc::NotInvertible, "exponent " + std::to_string(s) + " is not invertible mod " +
                                         std::to_string(field.units()));
}

// Direct evaluation of x^s + (1 - x)^s through log/antilog and digit addition.
std::vector<std::uint32_t> counts_by_table(const FiniteField& field, std::uint64_t s) {
  const std::uint32_t q = field.q(), n = field.units();
  std::vector<std::uint32_t> counts(q, 0);
  counts[1] += 1;  // x = 0
  for (std::uint32_t k = 0; k < n; ++k) {
    const std::uint32_t x = field.antilog(k);
    const std::uint32_t xs = field.antilog(pow_exponent_log(field, k, s));
    const std::uint32_t y = field.code_sub(1, x);
    const std::uint32_t ys = y == 0 ? 0 : field.antilog(pow_exponent_log(field, field.log(y), s));
    counts[field.from_code(field.code_add(xs, ys))]++;
  }
  return counts;
}

// x = omega^k with k in [1, q-2]: x^s + (1-x)^s = omega^(ks) (1 + omega^(s r_k)),
// r_k = log((1-x)/x). x = 0 and x = 1 both give 1.
std::vector<std::uint32_t> counts_by_zech(const FiniteField& field, std::uint64_t s, const ZechContext& ctx) {
  const std::uint32_t q = field.q(), n = field.units();
  std::vector<std::uint32_t> counts(q, 0);
  counts[1] += q >= 2 ? 2 : 0;
  const auto& kern = kernels::active();
  const auto zech = field.zech_table();
  const std::uint32_t sr = static_cast<std::uint32_t>(s % n);
  std::vector<std::uint32_t> out(kChunk);
  for (std::uint32_t begin = 1; begin < n; begin += kChunk) {
    const std::uint32_t end = std::min(n, begin + kChunk);
    kern.zech_profile_logs(zech.data(), ctx.ratio().data(), n, sr, begin, end, out.data());
    for (std::uint32_t i = 0; i < end - begin; ++i) counts[out[i] == kNoZech ? 0 : out[i] + 1]++;
  }
  return counts;
}

std::map<std::uint64_t, std::uint64_t> drop_empty(std::map<std::uint64_t, std::uint64_t> h) {
  std::erase_if(h, [](const auto& kv) { return kv.second == 0; });
  return h;
}

nlohmann::json histogram_json(const std::map<std::uint64_t, std::uint64_t>& h) {
  auto out = nlohmann::json::array();
  for (auto [k, freq] : h) out.push_back({k, freq});
  return out;
}

Finding make_finding(const FiniteField& field, std::uint64_t s, const char* check) {
  Finding f;
  f.check = check;
  f.field = field.descriptor();
  f.s = s;
  return f;
}

}  // namespace

ZechContext::ZechContext(const FiniteField& field) : field_(&field) {
  const std::uint32_t n = field.units(), off = field.neg_log_offset();
  ratio_.assign(n, 0);
  for (std::uint32_t k = 1; k < n; ++k) {
    const std::uint32_t z = field.zech((k + off) % n);
    ratio_[k] = z >= k ? z - k : z + n - k;
  }
}

std::vector<std::uint32_t> n_one_map(const FiniteField& field, std::uint64_t s, DiffAlgorithm algo,
                                     const ZechContext* ctx) {
  require_invertible_s(field, s);
  if (algo == DiffAlgorithm::Table) return counts_by_table(field, s);
  if (ctx) return counts_by_zech(field, s, *ctx);
  ZechContext local(field);
  return counts_by_zech(field, s, local);
}

DiffProfile profile_from_map(const FiniteField& field, std::uint64_t s, std::vector<std::uint32_t> counts,
                             bool keep_witness) {
  DiffProfile d;
  d.field = field.descriptor();
  d.p = field.p();
  d.q = field.q();
  d.s = s;
  // Multiplicities are almost always tiny; keep the map off the hot loop.
  std::array<std::uint64_t, 64> low{};
  for (auto c : counts) {
    if (c < low.size())
      low[c]++;
    else
      d.histogram[c]++;
  }
  for (std::size_t k = 0; k < low.size(); ++k)
    if (low[k]) d.histogram[k] = low[k];
  d.V = counts[1];
  d.n_at_zero = counts[0];
  for (const auto& [k, freq] : d.histogram) d.distinct_values.push_back(k);
  d.is_nice = d.distinct_values.size() <= 3;
  d.has_two = d.histogram.contains(2);
  auto off_one = d.histogram;
  if (--off_one[d.V] == 0) off_one.erase(d.V);
  off_one.erase(0);
  if (off_one.size() == 1) d.uniform_delta = off_one.begin()->first;
  if (keep_witness) d.witness = std::move(counts);
  return d;
}

DiffProfile diff_profile(const FiniteField& field, std::uint64_t s, DiffAlgorithm algo, bool keep_witness,
                         const ZechContext* ctx) {
  return profile_from_map(field, s, n_one_map(field, s, algo, ctx), keep_witness);
}

std::uint64_t n_uv(const FiniteField& field, std::uint64_t s, Elem u, Elem v) {
  require_invertible_s(field, s);
  if (u >= field.q() || v >= field.q()) throw Error(Errc::InvalidElement, "element out of range");
  if (u == 0) return v == 0 ? field.q() : 0;
  const Elem target = field.div(v, field.pow(u, s));
  std::uint64_t count = 0;
  for (Elem x = 0; x < field.q(); ++x)
    count += field.add(field.pow(x, s), field.pow(field.sub(1, x), s)) == target;
  return count;
}

nlohmann::json to_json(const DiffProfile& d) {
  nlohmann::json j{{"field", d.field},
                   {"p", d.p},
                   {"q", d.q},
                   {"s", d.s},
                   {"histogram", histogram_json(d.histogram)},
                   {"V", d.V},
                   {"n_at_zero", d.n_at_zero},
                   {"distinct_values", d.distinct_values},
                   {"nice", d.is_nice},
                   {"uniform_delta", d.uniform_delta ? nlohmann::json(*d.uniform_delta) : nlohmann::json()},
                   {"has_two", d.has_two}};
  if (!d.witness.empty()) j["witness"] = d.witness;
  return j;
}

std::string histogram_string(const DiffProfile& d) {
  std::string out;
  for (const auto& [k, freq] : d.histogram) {
    if (!out.empty()) out += ';';
    out += std::to_string(k) + ':' + std::to_string(freq);
  }
  return out;
}

bool verify_third_moment_link(const FiniteField& field, std::uint64_t s) {
  require_invertible_s(field, s);
  const auto sp = full_spectrum(field, s);
  const auto d = diff_profile(field, s);
  const BigInt q(field.q());
  return power_moment(sp, 3) == CycInt::from_integer(field.p(), BigInt(q * q * BigInt(static_cast<unsigned long>(d.V))));
}

namespace {

BigInt sum_sq_nonzero(const DiffProfile& d) {
  BigInt total = 0;
  for (const auto& [k, freq] : d.histogram) {
    BigInt kk(static_cast<unsigned long>(k));
    total += kk * kk * BigInt(static_cast<unsigned long>(freq));
  }
  BigInt z(static_cast<unsigned long>(d.n_at_zero));
  return total - z * z;
}

bool is_power_of_two(std::uint64_t x) { return x != 0 && (x & (x - 1)) == 0; }

}  // namespace

bool verify_fourth_moment_link(const FiniteField& field, std::uint64_t s) {
  require_invertible_s(field, s);
  const auto sp = full_spectrum(field, s);
  const auto d = diff_profile(field, s);
  const BigInt q(field.q());
  return power_moment(sp, 4) == CycInt::from_integer(field.p(), BigInt(q * q * sum_sq_nonzero(d)));
}

Finding verify_uniform_theorem(const FiniteField& field, std::uint64_t s) {
  require_invertible_s(field, s);
  Finding f = make_finding(field, s, "uniform_theorem");
  const auto sp = full_spectrum(field, s);
  const auto rep = three_valued_report(sp);
  if (!rep) {
    f.kind = FindingKind::Skipped;
    f.payload["reason"] = "not three-valued";
    return f;
  }
  const auto d = diff_profile(field, s);
  std::vector<std::string> fails = rep->violations;
  const BigInt q(field.q());
  const std::uint32_t m = field.m();
  if (fails.empty()) {
    const BigInt abg = abs(rep->alpha * rep->beta * rep->gamma);
    auto off_one = d.histogram;
    if (--off_one[d.V] == 0) off_one.erase(d.V);
    for (const auto& [k, freq] : off_one)
      if (BigInt(static_cast<unsigned long>(k)) % abg != 0) {
        fails.push_back("alpha*beta*gamma does not divide N(1,v) = " + std::to_string(k));
        break;
      }
    if (rep->A * rep->B >= 0) fails.push_back("AB is not negative");
    if (abg * q > -(rep->A * rep->B)) fails.push_back("|alpha*beta*gamma| exceeds -AB/q");
    if (rep->V != BigInt(static_cast<unsigned long>(d.V))) fails.push_back("N(1,1) differs from A+B-AB/q");
    const bool case_i = 2 * rep->a > m && 2 * rep->b > m;
    const bool case_ii = 2 * rep->a == m && 2 * rep->b == m && abs(rep->gamma) == 1 && d.uniform_delta &&
                         BigInt(static_cast<unsigned long>(*d.uniform_delta)) == abs(rep->alpha * rep->beta);
    f.payload["case"] = case_i ? "i" : (case_ii ? "ii" : "none");
    if (case_i == case_ii) fails.push_back("case classification fails");
    if (case_i && is_power_of_two(m)) fails.push_back("case (i) with degree a power of two");
    if (power_moment(sp, 3) != CycInt::from_integer(field.p(), BigInt(q * q * BigInt(static_cast<unsigned long>(d.V)))))
      fails.push_back("third moment link");
    if (power_moment(sp, 4) != CycInt::from_integer(field.p(), BigInt(q * q * sum_sq_nonzero(d))))
      fails.push_back("fourth moment link");
  }
  f.payload["report"] = to_json(*rep);
  f.payload["profile"] = to_json(d);
  if (fails.empty()) {
    f.kind = FindingKind::Pass;
  } else {
    f.kind = FindingKind::Counterexample;
    f.payload["failures"] = fails;
    f.payload["spectrum"] = to_json(sp);
  }
  return f;
}

Finding verify_proposition_s3(const FiniteField& field) {
  const std::uint64_t q = field.q();
  Finding f = make_finding(field, 3, "proposition_s3");
  if (q % 3 == 1) {
    f.kind = FindingKind::Skipped;
    f.payload["reason"] = "s = 3 is not invertible when q = 1 mod 3";
    return f;
  }
  const auto d = diff_profile(field, 3);
  f.payload["profile"] = to_json(d);
  const std::uint32_t p = field.p();
  std::map<std::uint64_t, std::uint64_t> expected;
  if (p == 2) {
    expected = {{0, q / 2}, {2, q / 2}};
  } else if (p == 3) {
    expected = {{0, q - 1}, {q, 1}};
  } else {
    // The printed row has frequencies q/2 - 1, which are not integers for odd q.
    const std::map<std::uint64_t, std::uint64_t> integral{{0, (q - 1) / 2}, {1, 1}, {2, (q - 1) / 2}};
    f.payload["printed"] = "0:q/2-1;1:1;2:q/2-1";
    f.payload["integral_reading"] = histogram_json(integral);
    f.kind = d.histogram == integral ? FindingKind::TableDiscrepancy : FindingKind::Counterexample;
    return f;
  }
  expected = drop_empty(expected);
  f.payload["expected"] = histogram_json(expected);
  f.kind = d.histogram == expected ? FindingKind::Pass : FindingKind::Counterexample;
  return f;
}

Finding verify_proposition_qminus2(const FiniteField& field) {
  const std::uint64_t q = field.q();
  if (q < 3) throw Error(Errc::InvalidArgument, "s = q-2 needs q >= 3");
  Finding f = make_finding(field, q - 2, "proposition_qminus2");
  const auto d = diff_profile(field, q - 2);
  f.payload["profile"] = to_json(d);
  std::map<std::uint64_t, std::uint64_t> expected;
  switch (q % 6) {
    case 2: expected = {{0, q / 2}, {2, q / 2}}; break;
    case 3: expected = {{0, (q + 1) / 2}, {2, (q - 3) / 2}, {3, 1}}; break;
    case 4: expected = {{0, q / 2 + 1}, {2, q / 2 - 2}, {4, 1}}; break;
    case 5: expected = {{0, (q - 1) / 2}, {1, 1}, {2, (q - 1) / 2}}; break;
    default:
      f.payload["expected"] = "not nice";
      f.kind = d.is_nice ? FindingKind::Counterexample : FindingKind::Pass;
      return f;
  }
  expected = drop_empty(expected);
  f.payload["expected"] = histogram_json(expected);
  f.kind = d.histogram == expected ? FindingKind::Pass : FindingKind::Counterexample;
  return f;
}

NiceSearchResult search_nice(const FiniteField& field, unsigned jobs) {
  std::vector<ExponentClass> classes;
  for (auto& c : enumerate_classes(field))
    if (!c.trivial) classes.push_back(std::move(c));
  const ZechContext ctx(field);
  std::vector<DiffProfile> profiles(classes.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < classes.size();)
      profiles[i] = diff_profile(field, classes[i].canonical, DiffAlgorithm::Zech, false, &ctx);
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(1, classes.size()))));
  std::vector<std::jthread> pool;
  for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(work);
  work();
  pool.clear();

  NiceSearchResult r;
  r.classes_examined = classes.size();
  for (std::size_t i = 0; i < classes.size(); ++i) {
    NiceSearchEntry e{std::move(classes[i]), std::move(profiles[i])};
    if (!e.profile.has_two) {
      r.optimist_violations.push_back(e);
      if (e.profile.is_nice) r.nc_violations.push_back(e);
    }
    if (e.profile.is_nice) r.nice.push_back(std::move(e));
  }
  return r;
}

}  // namespace weilscope
