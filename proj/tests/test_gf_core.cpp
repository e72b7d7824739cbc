#include <vector>

#include "doctest.h"
#include "oracle.hpp"
#include "weilscope/error.hpp"
#include "weilscope/gf_core.hpp"

using namespace weilscope;

namespace {

std::vector<std::pair<std::uint32_t, std::uint32_t>> fields_up_to(std::uint64_t max_q) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
  for (std::uint32_t p = 2; p <= max_q; ++p) {
    if (!is_prime(p)) continue;
    std::uint64_t q = p;
    for (std::uint32_t m = 1; q <= max_q; ++m, q *= p) out.emplace_back(p, m);
  }
  return out;
}

Errc error_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return Errc::InvalidArgument;
}

}  // namespace

TEST_CASE("small number theory helpers") {
  CHECK(is_prime(2));
  CHECK(is_prime(1021));
  CHECK_FALSE(is_prime(1));
  CHECK_FALSE(is_prime(1023));
  CHECK(prime_factors(360) == std::vector<std::uint64_t>{2, 3, 5});
  CHECK(prime_factors(1).empty());
  CHECK(inverse_mod(3, 7) == 5u);
  CHECK_FALSE(inverse_mod(3, 15).has_value());
  CHECK(checked_power(11, 5) == 161051u);
  CHECK_FALSE(checked_power(3, 16).has_value());
}

TEST_CASE("F_8 default modulus is x^3+x+1 and x is primitive") {
  auto f = FiniteField::build(2, 3);
  CHECK(f.spec().modulus == std::vector<std::uint32_t>{1, 1, 0, 1});
  CHECK(f.q() == 8);
  oracle::PolyField o{2, {1, 1, 0, 1}};
  CHECK(o.order(2) == 7);
  CHECK(f.descriptor() == "p=2 m=3 modulus=1,1,0,1 generator=x");
  auto g = FiniteField::build(2, 3, std::vector<std::uint32_t>{1, 1, 0, 1});
  CHECK(g.antilog_table().size() == 7);
}

TEST_CASE("F_11 default generator is 2") {
  auto f = FiniteField::build(11, 1);
  CHECK(f.antilog(1) == 2);
  oracle::PolyField o{11, f.spec().modulus};
  CHECK(o.order(2) == 10);
  for (std::uint32_t k = 0; k < 10; ++k) CHECK(f.antilog(k) == o.code_pow(2, k));
}

TEST_CASE("construction errors") {
  CHECK(error_of([] { FiniteField::build(2, 2, std::vector<std::uint32_t>{1, 0, 1}); }) == Errc::ReducibleModulus);
  CHECK(error_of([] { FiniteField::build(4, 1); }) == Errc::NotPrime);
  CHECK(error_of([] { FiniteField::build(2, 3, std::vector<std::uint32_t>{1, 1, 1}); }) == Errc::DegreeMismatch);
  // x^4+x^3+x^2+x+1 is irreducible but x has order 5.
  CHECK(error_of([] { FiniteField::build(2, 4, std::vector<std::uint32_t>{1, 1, 1, 1, 1}); }) ==
        Errc::NonPrimitiveRoot);
  CHECK(error_of([] { FiniteField::build(2, 3, std::vector<std::uint32_t>{1, 1, 0, 2}); }) ==
        Errc::DegreeMismatch);
  CHECK(error_of([] { FiniteField::build(3, 16); }) == Errc::FieldTooLarge);
  CHECK(error_of([] { FiniteField::build(2, 0); }) == Errc::DegreeMismatch);
}

TEST_CASE("trace examples") {
  auto f4 = FiniteField::build(2, 2, std::vector<std::uint32_t>{1, 1, 1});
  CHECK(f4.trace(0) == 0);
  CHECK(f4.trace(f4.from_log(0)) == 0);
  CHECK(f4.trace(f4.from_log(1)) == 1);
  CHECK(f4.trace(f4.from_log(2)) == 1);
  auto f8 = FiniteField::build(2, 3);
  CHECK(f8.trace(f8.from_log(0)) == 1);
  CHECK(error_of([&] { f8.trace(8); }) == Errc::InvalidElement);
}

TEST_CASE("zech examples") {
  auto f8 = FiniteField::build(2, 3);
  CHECK(f8.zech(1) == 3);
  CHECK(f8.zech(0) == kNoZech);
  auto f11 = FiniteField::build(11, 1);
  CHECK(f11.zech(1) == 8);
  CHECK(f11.zech(5) == kNoZech);
  CHECK(error_of([&] { f8.zech(7); }) == Errc::IndexOutOfRange);
}

TEST_CASE("pow_exponent_log examples") {
  auto f8 = FiniteField::build(2, 3);
  auto f11 = FiniteField::build(11, 1);
  CHECK(pow_exponent_log(f8, 3, 1) == 3);
  CHECK(pow_exponent_log(f8, 3, 3) == 2);
  CHECK(pow_exponent_log(f11, 5, 9) == 5);
}

TEST_CASE("default modulus is the smallest admissible polynomial") {
  // Enumerate monic degree-m polynomials by increasing sum c_i p^i and take
  // the first whose root has order q-1 (which also forces irreducibility).
  for (auto [p, m] : fields_up_to(1024)) {
    if (m == 1 || oracle::ipow(p, m) > 729) continue;
    auto f = FiniteField::build(p, m);
    std::uint64_t q = oracle::ipow(p, m);
    std::vector<std::uint32_t> expect;
    for (std::uint64_t v = 0; v < q; ++v) {
      std::vector<std::uint32_t> poly(m + 1);
      std::uint64_t t = v;
      for (std::uint32_t i = 0; i < m; ++i) {
        poly[i] = t % p;
        t /= p;
      }
      poly[m] = 1;
      if (poly[0] == 0) continue;
      oracle::PolyField o{p, poly};
      if (o.order(p) == q - 1) {  // code p is x
        expect = poly;
        break;
      }
    }
    CAPTURE(p);
    CAPTURE(m);
    CHECK(f.spec().modulus == expect);
  }
  // Prime fields: smallest primitive root.
  for (std::uint32_t p : {3u, 5u, 7u, 11u, 13u, 17u, 23u, 41u, 1021u}) {
    auto f = FiniteField::build(p, 1);
    oracle::PolyField o{p, f.spec().modulus};
    std::uint64_t g = 2;
    while (o.order(g) != p - 1) ++g;
    CHECK(f.antilog(1) == g);
  }
}

TEST_CASE("log is a homomorphism, exhaustive for q <= 2^10") {
  for (auto [p, m] : fields_up_to(1024)) {
    auto f = FiniteField::build(p, m);
    oracle::PolyField o{p, f.spec().modulus};
    const std::uint32_t n = f.units();
    bool ok = true;
    for (std::uint32_t a = 1; a < f.q() && ok; ++a)
      for (std::uint32_t b = a; b < f.q(); ++b) {
        std::uint32_t lhs = f.log(static_cast<std::uint32_t>(o.code_mul(a, b)));
        if (lhs != (f.log(a) + f.log(b)) % n) {
          ok = false;
          break;
        }
      }
    CAPTURE(p);
    CAPTURE(m);
    CHECK(ok);
    for (std::uint32_t code = 1; code < f.q(); ++code) CHECK(f.antilog(f.log(code)) == code);
    CHECK(f.antilog(0) == 1);
  }
}

TEST_CASE("Zech consistency and trace fibers, exhaustive for q <= 2^12") {
  for (auto [p, m] : fields_up_to(4096)) {
    auto f = FiniteField::build(p, m);
    oracle::PolyField o{p, f.spec().modulus};
    bool zech_ok = true;
    std::uint32_t none_count = 0;
    for (std::uint32_t k = 0; k < f.units(); ++k) {
      std::uint64_t sum = o.code_add(1, f.antilog(k));
      std::uint32_t z = f.zech(k);
      if (z == kNoZech) {
        ++none_count;
        zech_ok &= sum == 0;
        zech_ok &= k == (p == 2 ? 0 : f.units() / 2);
      } else {
        zech_ok &= f.antilog(z) == sum;
      }
    }
    CAPTURE(p);
    CAPTURE(m);
    CHECK(zech_ok);
    CHECK(none_count == 1);
    std::vector<std::uint32_t> fiber(p, 0);
    for (Elem x = 0; x < f.q(); ++x) fiber[f.trace(x)]++;
    for (auto c : fiber) CHECK(c == f.q() / p);
    CHECK(f.neg_log_offset() == (p == 2 ? 0 : f.units() / 2));
  }
}

TEST_CASE("trace agrees with the Frobenius sum") {
  for (auto [p, m] : fields_up_to(2200)) {
    if (m == 1 && p > 50) continue;
    auto f = FiniteField::build(p, m);
    oracle::PolyField o{p, f.spec().modulus};
    bool ok = true;
    for (std::uint32_t code = 0; code < f.q(); ++code) ok &= f.trace_code(code) == o.trace(code);
    CAPTURE(p);
    CAPTURE(m);
    CHECK(ok);
  }
}

TEST_CASE("field arithmetic matches the polynomial oracle") {
  auto f = FiniteField::build(3, 5);
  oracle::PolyField o{3, f.spec().modulus};
  for (std::uint32_t a = 0; a < f.q(); a += 7)
    for (std::uint32_t b = 0; b < f.q(); b += 11) {
      Elem x = f.from_code(a), y = f.from_code(b);
      CHECK(f.to_code(f.add(x, y)) == o.code_add(a, b));
      CHECK(f.to_code(f.mul(x, y)) == o.code_mul(a, b));
      CHECK(f.add(f.sub(x, y), y) == x);
      if (y != 0) CHECK(f.mul(f.div(x, y), y) == x);
    }
  CHECK(f.to_code(f.pow(f.from_code(5), 17)) == o.code_pow(5, 17));
  CHECK(f.from_int(-1) == f.neg(f.from_log(0)));
  CHECK(error_of([&] { f.inv(0); }) == Errc::InvalidElement);
}

TEST_CASE("rebuilding gives identical tables") {
  for (auto [p, m] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{{2, 10}, {3, 7}, {11, 3}, {1021, 1}}) {
    auto a = FiniteField::build(p, m);
    auto b = FiniteField::build(p, m);
    CHECK(a.table_checksum() == b.table_checksum());
    CHECK(std::equal(a.zech_table().begin(), a.zech_table().end(), b.zech_table().begin()));
    CHECK(a.table_checksum().size() == 64);
  }
}

TEST_CASE("q = 2^20 builds") {
  auto f = FiniteField::build(2, 20);
  CHECK(f.q() == (1u << 20));
  CHECK(f.antilog(f.units() - 1) != 1);
}
