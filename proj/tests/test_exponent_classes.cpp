#include <set>

#include "doctest.h"
#include "oracle.hpp"
#include "weilscope/error.hpp"
#include "weilscope/exponent_classes.hpp"
#include "weilscope/weil_spectrum.hpp"

using namespace weilscope;

TEST_CASE("is_invertible examples") {
  CHECK(is_invertible(8, 3));
  CHECK_FALSE(is_invertible(16, 3));
  CHECK_FALSE(is_invertible(11, 5));
}

TEST_CASE("approx_class examples") {
  auto c = approx_class(8, 2, 3);
  CHECK(c.coset == std::vector<std::uint64_t>{3, 5, 6});
  CHECK(c.members == std::vector<std::uint64_t>{3, 5, 6});
  CHECK(c.canonical == 3);
  CHECK_FALSE(c.trivial);
  auto c11 = approx_class(11, 11, 3);
  CHECK(c11.coset == std::vector<std::uint64_t>{3});
  CHECK(c11.inverse_coset == std::vector<std::uint64_t>{7});
  CHECK(c11.members == std::vector<std::uint64_t>{3, 7});
  CHECK(c11.congruence == 3);
  auto k = approx_class(11, 11, 9);
  CHECK(k.members == std::vector<std::uint64_t>{9});
  CHECK(k.kloosterman);
  CHECK_THROWS_AS(approx_class(16, 2, 3), Error);
  try {
    approx_class(16, 2, 3);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NotInvertible);
  }
}

TEST_CASE("enumerate_classes examples") {
  auto c8 = enumerate_classes(8, 2);
  REQUIRE(c8.size() == 2);
  CHECK(c8[0].members == std::vector<std::uint64_t>{1, 2, 4});
  CHECK(c8[0].trivial);
  CHECK(c8[1].members == std::vector<std::uint64_t>{3, 5, 6});
  auto c4 = enumerate_classes(4, 2);
  REQUIRE(c4.size() == 1);
  CHECK(c4[0].members == std::vector<std::uint64_t>{1, 2});
  auto c11 = enumerate_classes(11, 11);
  REQUIRE(c11.size() == 3);
  CHECK(c11[0].canonical == 1);
  CHECK(c11[1].canonical == 3);
  CHECK(c11[1].members == std::vector<std::uint64_t>{3, 7});
  CHECK(c11[2].canonical == 9);
}

TEST_CASE("classes partition the invertible exponents, q <= 2^16") {
  for (std::uint32_t p = 2; p < 1u << 16; ++p) {
    if (!is_prime(p)) continue;
    for (std::uint64_t q = p; q <= (1u << 16); q *= p) {
      if (q == 2) continue;
      const std::uint64_t n = q - 1;
      auto classes = enumerate_classes(q, p);
      std::uint64_t total = 0, phi = n;
      for (std::uint64_t d = 2, r = n; r > 1; ++d) {
        if (d * d > r) d = r;
        if (r % d) continue;
        phi -= phi / d;
        while (r % d == 0) r /= d;
      }
      bool ok = classes.front().trivial;
      std::uint64_t prev = 0;
      for (const auto& c : classes) {
        total += c.members.size();
        ok &= c.canonical > prev && c.canonical == c.members.front();
        prev = c.canonical;
        for (auto x : c.coset) ok &= oracle::gcd(x, n) == 1 && std::binary_search(c.coset.begin(), c.coset.end(), x * p % n);
        ok &= c.congruence == (p == 2 ? 0 : c.coset.back() % (p - 1));
      }
      CAPTURE(q);
      CHECK(ok);
      CHECK(total == phi);
    }
  }
}

TEST_CASE("spectrum multiset is constant on a class, q <= 2^9") {
  for (auto [p, m] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{{2, 5}, {2, 6}, {2, 9}, {3, 4}, {5, 3}, {7, 3}, {23, 2}}) {
    auto f = FiniteField::build(p, m);
    for (const auto& c : enumerate_classes(f)) {
      auto ref = full_spectrum(f, c.canonical);
      bool ok = true;
      for (auto s : {c.members.back(), c.inverse_coset.front(), c.coset.back()}) {
        auto sp = full_spectrum(f, s);
        ok &= sp.reduced == ref.reduced;
      }
      CAPTURE(p);
      CAPTURE(m);
      CAPTURE(c.canonical);
      CHECK(ok);
    }
  }
}

TEST_CASE("class JSON") {
  auto j = to_json(approx_class(11, 11, 9));
  CHECK(j["canonical"] == 9);
  CHECK(j["members"] == nlohmann::json::array({9}));
  CHECK(j["congruence_mod_p_minus_1"] == 9);
  CHECK(j["trivial"] == false);
  CHECK(j["kloosterman"] == true);
}
