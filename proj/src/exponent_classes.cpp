#include "weilscope/exponent_classes.hpp"

#include <algorithm>

#include "weilscope/error.hpp"

namespace weilscope {

namespace {

std::vector<std::uint64_t> cyclotomic_coset(std::uint64_t n, std::uint32_t p, std::uint64_t s) {
  std::vector<std::uint64_t> out;
  out.reserve(8);
  std::uint64_t x = s % n;
  do {
    out.push_back(x);
    x = static_cast<std::uint64_t>((unsigned __int128)x * p % n);
  } while (x != s % n);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

bool is_invertible(std::uint64_t q, std::uint64_t s) noexcept {
  if (q < 2 || s == 0) return false;
  return gcd_u64(s, q - 1) == 1;
}

namespace {

ExponentClass make_class(std::uint64_t q, std::uint32_t p, std::uint64_t s) {
  const std::uint64_t n = q - 1;
  ExponentClass c;
  if (n == 1) {
    c.coset = c.inverse_coset = c.members = {1};
  } else {
    c.coset = cyclotomic_coset(n, p, s);
    const std::uint64_t t = *inverse_mod(s % n, n);
    if (std::binary_search(c.coset.begin(), c.coset.end(), t)) {
      c.inverse_coset = c.members = c.coset;
    } else {
      c.inverse_coset = cyclotomic_coset(n, p, t);
      c.members.reserve(c.coset.size() * 2);
      std::set_union(c.coset.begin(), c.coset.end(), c.inverse_coset.begin(), c.inverse_coset.end(),
                     std::back_inserter(c.members));
    }
  }
  c.canonical = c.members.front();
  c.trivial = c.canonical == 1;
  c.kloosterman = q >= 3 && std::binary_search(c.members.begin(), c.members.end(), q - 2);
  c.congruence = p == 2 ? 0 : c.canonical % (p - 1);
  return c;
}

}  // namespace

ExponentClass approx_class(std::uint64_t q, std::uint32_t p, std::uint64_t s) {
  if (!is_invertible(q, s))
    throw Error(Errc::NotInvertible, "gcd(" + std::to_string(s) + ", " + std::to_string(q - 1) + ") != 1");
  return make_class(q, p, s);
}

std::vector<ExponentClass> enumerate_classes(std::uint64_t q, std::uint32_t p) {
  std::vector<ExponentClass> out;
  if (q == 2) {
    out.push_back(approx_class(q, p, 1));
    return out;
  }
  const std::uint64_t n = q - 1;
  // Non-units are marked up front by sieving the prime factors of q-1.
  std::vector<bool> seen(n, false);
  for (auto f : prime_factors(n))
    for (std::uint64_t x = f; x < n; x += f) seen[x] = true;
  for (std::uint64_t s = 1; s < n; ++s) {
    if (seen[s]) continue;
    auto c = make_class(q, p, s);
    for (auto x : c.members) seen[x] = true;
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<ExponentClass> enumerate_classes(const FiniteField& field) {
  return enumerate_classes(field.q(), field.p());
}

nlohmann::json to_json(const ExponentClass& c) {
  return {{"canonical", c.canonical},
          {"members", c.members},
          {"congruence_mod_p_minus_1", c.congruence},
          {"trivial", c.trivial},
          {"kloosterman", c.kloosterman}};
}

}  // namespace weilscope
