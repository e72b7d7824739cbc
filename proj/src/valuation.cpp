#include "weilscope/valuation.hpp"

#include <limits>
#include <numeric>

#include "weilscope/error.hpp"
#include "weilscope/exponent_classes.hpp"

namespace weilscope {

namespace {

Finding make_finding(const FiniteField& field, std::uint64_t s, const char* check) {
  Finding f;
  f.check = check;
  f.field = field.descriptor();
  f.s = s;
  return f;
}

Finding skipped(Finding f, std::string reason) {
  f.kind = FindingKind::Skipped;
  f.payload["reason"] = std::move(reason);
  return f;
}

bool is_power_of_two(std::uint64_t x) { return x != 0 && (x & (x - 1)) == 0; }

void require_subfield(const FiniteField& L, const FiniteField& K) {
  if (L.p() != K.p()) throw Error(Errc::CharacteristicMismatch, "fields have different characteristic");
  if (L.m() % K.m() != 0) throw Error(Errc::DegreeMismatch, "K is not a subfield of L");
}

std::uint64_t reduce_exponent(std::uint64_t s, const FiniteField& K) { return K.units() == 1 ? 1 : s % K.units(); }

}  // namespace

std::uint64_t digitsum_p(std::uint32_t p, std::uint64_t k) {
  if (p < 2) throw Error(Errc::NotPrime, "base must be at least 2");
  std::uint64_t sum = 0;
  for (; k; k /= p) sum += k % p;
  return sum;
}

std::string ValuationReport::val_p() const {
  const std::uint64_t d = p - 1, g = std::gcd(val_phi_direct, d);
  if (d / g == 1) return std::to_string(val_phi_direct / g);
  return std::to_string(val_phi_direct / g) + "/" + std::to_string(d / g);
}

std::uint64_t stickelberger_valuation(const FiniteField& field, std::uint64_t s, std::uint64_t* argmin_k) {
  const std::uint32_t p = field.p(), n = field.units();
  if (n < 2) throw Error(Errc::InvalidArgument, "no nontrivial character on F_2");
  // Digit sums of [0, n) built from the value at k / p.
  std::vector<std::uint32_t> ds(n);
  for (std::uint32_t k = 1; k < n; ++k) ds[k] = ds[k / p] + k % p;
  const std::uint32_t step = static_cast<std::uint32_t>(n - s % n);  // -s mod n
  std::uint64_t best = std::numeric_limits<std::uint64_t>::max(), best_k = 0;
  std::uint64_t j = 0;
  for (std::uint32_t k = 1; k < n; ++k) {
    j += step;
    if (j >= n) j -= n;
    const std::uint64_t v = ds[k] + ds[j];
    if (v < best) {
      best = v;
      best_k = k;
    }
  }
  if (argmin_k) *argmin_k = best_k;
  return best;
}

ValuationReport val_report(const FiniteField& field, const WeilTable& table) {
  const Spectrum sp = summarize(table);
  return val_report(field, table, galois_orbits(sp));
}

ValuationReport val_report(const FiniteField& field, const WeilTable& table, const OrbitDecomposition& orbits) {
  const std::uint64_t s = table.s();
  if (s == 0 || gcd_u64(s, field.units()) != 1)
    throw Error(Errc::NotInvertible, "exponent " + std::to_string(s) + " is not invertible");
  ValuationReport r;
  r.field = field.descriptor();
  r.p = field.p();
  r.m = field.m();
  r.s = s;
  // The prime (1 - zeta) is Galois-stable, so one valuation per orbit suffices.
  std::optional<std::uint64_t> best;
  const CycInt* best_value = nullptr;
  for (const auto& o : orbits.orbits) {
    auto val = o.representative.phi_valuation();
    if (val && (!best || *val < *best)) {
      best = val;
      best_value = &o.representative;
    }
  }
  // Parseval rules out an all-zero reduced spectrum.
  if (!best) throw Error(Errc::InvalidArgument, "reduced spectrum vanishes identically");
  r.val_phi_direct = *best;
  r.argmin_value = best_value->to_string();
  for (Elem a = 1; a < field.q(); ++a)
    if (table.value(a) == *best_value) {
      r.argmin_a = a;
      break;
    }
  if (field.q() > 2) r.val_phi_stickelberger = stickelberger_valuation(field, s, &r.argmin_k);
  return r;
}

ValuationReport val_report(const FiniteField& field, std::uint64_t s) {
  if (s == 0 || gcd_u64(s, field.units()) != 1)
    throw Error(Errc::NotInvertible, "exponent " + std::to_string(s) + " is not invertible");
  return val_report(field, weil_table(field, s));
}

nlohmann::json to_json(const ValuationReport& r) {
  return {{"field", r.field},
          {"p", r.p},
          {"m", r.m},
          {"s", r.s},
          {"val_phi", r.val_phi_direct},
          {"val_phi_stickelberger",
           r.val_phi_stickelberger ? nlohmann::json(*r.val_phi_stickelberger) : nlohmann::json()},
          {"val_p", r.val_p()},
          {"argmin_a", r.argmin_a},
          {"argmin_value", r.argmin_value},
          {"argmin_k", r.argmin_k},
          {"consistent", r.consistent()}};
}

Finding valuation_finding(const FiniteField& field, const WeilTable& table) {
  Finding f = make_finding(field, table.s(), "valuation");
  const auto r = val_report(field, table);
  f.payload = to_json(r);
  if (r.consistent()) {
    f.kind = FindingKind::Pass;
  } else {
    f.kind = FindingKind::FormulaMismatch;
    f.payload["spectrum"] = to_json(summarize(table));
  }
  return f;
}

Finding check_extension_inequality(const FiniteField& L, const FiniteField& K, std::uint64_t s) {
  require_subfield(L, K);
  Finding f = make_finding(L, s, "extension");
  if (s == 0 || gcd_u64(s, L.units()) != 1) return skipped(std::move(f), "s is not invertible on L");
  const std::uint64_t sK = reduce_exponent(s, K);
  const auto vL = val_report(L, s).val_phi_direct;
  const auto vK = val_report(K, sK).val_phi_direct;
  const std::uint64_t degree = L.m() / K.m();
  f.payload = {{"subfield", K.descriptor()}, {"s_on_subfield", sK}, {"val_phi_L", vL},
               {"val_phi_K", vK},            {"degree", degree}};
  f.kind = vL <= vK * degree ? FindingKind::Pass : FindingKind::Counterexample;
  return f;
}

Finding check_cmpr_bound(const FiniteField& field, std::uint64_t s) {
  Finding f = make_finding(field, s, "cmpr");
  if (!is_power_of_two(field.m())) return skipped(std::move(f), "degree is not a power of two");
  if (s == 0 || gcd_u64(s, field.units()) != 1) return skipped(std::move(f), "s is not invertible");
  if (field.q() == 2 || approx_class(field.q(), field.p(), s).trivial) return skipped(std::move(f), "s is equivalent to 1");
  const auto table = weil_table(field, s);
  const auto r = val_report(field, table);
  const std::uint64_t bound = std::uint64_t(field.p() - 1) * field.m();
  f.payload = {{"val_phi", r.val_phi_direct}, {"val_p", r.val_p()}, {"bound_phi", bound}};
  if (2 * r.val_phi_direct <= bound) {
    f.kind = FindingKind::Pass;
  } else {
    f.kind = FindingKind::Counterexample;
    f.payload["spectrum"] = to_json(summarize(table));
  }
  return f;
}

Finding check_quadratic_lemma(const FiniteField& L, const FiniteField& K, std::uint64_t s) {
  require_subfield(L, K);
  Finding f = make_finding(L, s, "quadra");
  if (L.m() != 2 * K.m()) return skipped(std::move(f), "[L:K] != 2");
  if (s == 0 || gcd_u64(s, L.units()) != 1) return skipped(std::move(f), "s is not invertible on L");
  if (s % K.units() != 1 % K.units()) return skipped(std::move(f), "s != 1 mod |K|-1");
  if (s % L.units() == 1) return skipped(std::move(f), "s = 1 mod |L|-1");
  // A Frobenius twist x^(p^j) also fixes K pointwise but is linear on L.
  if (approx_class(L.q(), L.p(), s).trivial) return skipped(std::move(f), "s is equivalent to 1");
  const auto table = weil_table(L, s);
  const auto sp = summarize(table);
  const auto r = val_report(L, table);
  const CycInt minus_k = CycInt::from_integer(L.p(), -std::int64_t(K.q()));
  const bool has_value = sp.contains(minus_k);
  const bool equality = 2 * r.val_phi_direct == std::uint64_t(L.p() - 1) * L.m();
  f.payload = {{"subfield", K.descriptor()},
               {"minus_K_present", has_value},
               {"val_phi", r.val_phi_direct},
               {"spectrum", to_json(sp)}};
  f.kind = has_value && equality ? FindingKind::Pass : FindingKind::Counterexample;
  return f;
}

}  // namespace weilscope
