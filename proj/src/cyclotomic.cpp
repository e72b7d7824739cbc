#include "weilscope/cyclotomic.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>

#include "weilscope/error.hpp"
#include "weilscope/gf_core.hpp"

namespace weilscope {

namespace {

bool fits_i64(const BigInt& v) { return mpz_fits_slong_p(v.get_mpz_t()) != 0; }

int bit_length(std::int64_t v) {
  std::uint64_t u = v < 0 ? std::uint64_t(0) - std::uint64_t(v) : std::uint64_t(v);
  return u == 0 ? 0 : 64 - __builtin_clzll(u);
}

void check_prime(std::uint32_t p) {
  if (!is_prime(p)) throw Error(Errc::NotPrime, "cyclotomic ring needs a prime, got " + std::to_string(p));
}

// Canonical coordinates from a length-p vector in the power basis.
template <typename T>
std::vector<T> reduce_counts(std::uint32_t p, const std::vector<T>& counts) {
  if (p == 2) return {T(counts[0] - counts[1])};
  std::vector<T> out(p - 1);
  for (std::uint32_t j = 0; j + 1 < p; ++j) out[j] = counts[j] - counts[p - 1];
  return out;
}

}  // namespace

CycInt::CycInt(std::uint32_t p) : p_(p), small_(dim(p), 0) { check_prime(p); }

CycInt CycInt::from_counts(std::uint32_t p, std::span<const std::int64_t> counts) {
  check_prime(p);
  if (counts.size() != p)
    throw Error(Errc::LengthMismatch, "from_counts expects " + std::to_string(p) + " counts");
  CycInt r(p);
  bool overflow = false;
  if (p == 2) {
    overflow = __builtin_sub_overflow(counts[0], counts[1], &r.small_[0]);
  } else {
    for (std::uint32_t j = 0; j + 1 < p; ++j)
      overflow |= __builtin_sub_overflow(counts[j], counts[p - 1], &r.small_[j]);
  }
  if (overflow) {
    std::vector<BigInt> c(counts.begin(), counts.end());
    for (std::size_t j = 0; j < counts.size(); ++j) c[j] = BigInt(static_cast<long>(counts[j]));
    r.big_ = reduce_counts<BigInt>(p, c);
    r.small_.clear();
    r.normalize();
  }
  return r;
}

CycInt CycInt::from_integer(std::uint32_t p, std::int64_t n) {
  CycInt r(p);
  r.small_[0] = n;
  return r;
}

CycInt CycInt::from_integer(std::uint32_t p, const BigInt& n) {
  std::vector<BigInt> c(dim(p));
  c[0] = n;
  return from_coords(p, std::move(c));
}

CycInt CycInt::zeta_power(std::uint32_t p, std::uint64_t j) {
  CycInt r(p);
  j %= p;
  if (p == 2) {
    r.small_[0] = j == 0 ? 1 : -1;
  } else if (j == p - 1) {
    std::fill(r.small_.begin(), r.small_.end(), -1);
  } else {
    r.small_[j] = 1;
  }
  return r;
}

CycInt CycInt::from_coords(std::uint32_t p, std::span<const std::int64_t> coords) {
  CycInt r(p);
  if (coords.size() != r.size())
    throw Error(Errc::LengthMismatch, "expected " + std::to_string(r.size()) + " coordinates");
  std::copy(coords.begin(), coords.end(), r.small_.begin());
  return r;
}

CycInt CycInt::from_coords(std::uint32_t p, std::vector<BigInt> coords) {
  CycInt r(p);
  if (coords.size() != r.size())
    throw Error(Errc::LengthMismatch, "expected " + std::to_string(r.size()) + " coordinates");
  r.big_ = std::move(coords);
  r.small_.clear();
  r.normalize();
  return r;
}

BigInt CycInt::coord(std::size_t j) const {
  if (j >= size()) throw Error(Errc::IndexOutOfRange, "coordinate index " + std::to_string(j));
  return is_small() ? BigInt(static_cast<long>(small_[j])) : big_[j];
}

std::vector<BigInt> CycInt::coords() const {
  if (!is_small()) return big_;
  std::vector<BigInt> out(size());
  for (std::size_t j = 0; j < size(); ++j) out[j] = BigInt(static_cast<long>(small_[j]));
  return out;
}

void CycInt::normalize() {
  if (big_.empty()) return;
  for (const auto& c : big_)
    if (!fits_i64(c)) return;
  small_.resize(big_.size());
  for (std::size_t j = 0; j < big_.size(); ++j) small_[j] = big_[j].get_si();
  big_.clear();
}

void CycInt::promote() {
  if (!big_.empty()) return;
  big_ = coords();
  small_.clear();
}

void CycInt::require_same(const CycInt& other) const {
  if (p_ != other.p_)
    throw Error(Errc::CharacteristicMismatch,
                "p=" + std::to_string(p_) + " vs p=" + std::to_string(other.p_));
}

bool CycInt::is_zero() const noexcept {
  if (is_small()) return std::all_of(small_.begin(), small_.end(), [](auto c) { return c == 0; });
  return false;  // big values are never zero after normalization
}

bool CycInt::is_rational_integer() const noexcept {
  if (is_small()) return std::all_of(small_.begin() + 1, small_.end(), [](auto c) { return c == 0; });
  return std::all_of(big_.begin() + 1, big_.end(), [](const BigInt& c) { return c == 0; });
}

BigInt CycInt::to_integer() const {
  if (!is_rational_integer()) throw Error(Errc::NotRational, to_string() + " is not a rational integer");
  return coord(0);
}

bool CycInt::divisible_by(const BigInt& n) const {
  if (n == 0) throw Error(Errc::InvalidArgument, "divisibility by zero");
  for (const auto& c : coords())
    if (mpz_divisible_p(c.get_mpz_t(), n.get_mpz_t()) == 0) return false;
  return true;
}

CycInt CycInt::operator-() const {
  CycInt r = *this;
  if (r.is_small()) {
    for (auto& c : r.small_) {
      if (c == std::numeric_limits<std::int64_t>::min()) {
        r.promote();
        for (auto& b : r.big_) b = -b;
        r.normalize();
        return r;
      }
      c = -c;
    }
  } else {
    for (auto& b : r.big_) b = -b;
    r.normalize();
  }
  return r;
}

CycInt& CycInt::operator+=(const CycInt& other) {
  require_same(other);
  if (is_small() && other.is_small()) {
    std::vector<std::int64_t> out(small_.size());
    bool overflow = false;
    for (std::size_t j = 0; j < out.size(); ++j)
      overflow |= __builtin_add_overflow(small_[j], other.small_[j], &out[j]);
    if (!overflow) {
      small_ = std::move(out);
      return *this;
    }
  }
  promote();
  auto oc = other.coords();
  for (std::size_t j = 0; j < big_.size(); ++j) big_[j] += oc[j];
  normalize();
  return *this;
}

CycInt& CycInt::operator-=(const CycInt& other) {
  require_same(other);
  if (is_small() && other.is_small()) {
    std::vector<std::int64_t> out(small_.size());
    bool overflow = false;
    for (std::size_t j = 0; j < out.size(); ++j)
      overflow |= __builtin_sub_overflow(small_[j], other.small_[j], &out[j]);
    if (!overflow) {
      small_ = std::move(out);
      return *this;
    }
  }
  promote();
  auto oc = other.coords();
  for (std::size_t j = 0; j < big_.size(); ++j) big_[j] -= oc[j];
  normalize();
  return *this;
}

CycInt& CycInt::operator*=(const CycInt& other) {
  require_same(other);
  const std::uint32_t p = p_;
  const std::size_t d = size();
  if (is_small() && other.is_small()) {
    int ba = 0, bb = 0;
    for (auto c : small_) ba = std::max(ba, bit_length(c));
    for (auto c : other.small_) bb = std::max(bb, bit_length(c));
    if (ba + bb + bit_length(p) <= 124) {
      if (p == 2) {
        __int128 v = static_cast<__int128>(small_[0]) * other.small_[0];
        if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max()) {
          small_[0] = static_cast<std::int64_t>(v);
          return *this;
        }
      } else {
        std::vector<__int128> conv(p, 0);
        for (std::size_t i = 0; i < d; ++i) {
          if (small_[i] == 0) continue;
          const __int128 ai = small_[i];
          for (std::size_t j = 0; j < d; ++j) {
            std::size_t k = i + j;
            if (k >= p) k -= p;
            conv[k] += ai * other.small_[j];
          }
        }
        bool ok = true;
        std::vector<std::int64_t> out(d);
        for (std::size_t j = 0; j < d; ++j) {
          __int128 v = conv[j] - conv[p - 1];
          if (v < std::numeric_limits<std::int64_t>::min() || v > std::numeric_limits<std::int64_t>::max()) {
            ok = false;
            break;
          }
          out[j] = static_cast<std::int64_t>(v);
        }
        if (ok) {
          small_ = std::move(out);
          return *this;
        }
      }
    }
  }
  auto a = coords();
  auto b = other.coords();
  if (p == 2) {
    big_ = {a[0] * b[0]};
  } else {
    std::vector<BigInt> conv(p);
    for (std::size_t i = 0; i < d; ++i) {
      if (a[i] == 0) continue;
      for (std::size_t j = 0; j < d; ++j) {
        std::size_t k = i + j;
        if (k >= p) k -= p;
        mpz_addmul(conv[k].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
      }
    }
    big_ = reduce_counts<BigInt>(p, conv);
  }
  small_.clear();
  normalize();
  return *this;
}

CycInt CycInt::scaled(const BigInt& n) const { return *this * from_integer(p_, n); }

CycInt CycInt::times_zeta_power(std::uint64_t j) const { return *this * zeta_power(p_, j); }

bool operator==(const CycInt& a, const CycInt& b) noexcept {
  if (a.p_ != b.p_ || a.is_small() != b.is_small()) return false;
  return a.is_small() ? a.small_ == b.small_ : a.big_ == b.big_;
}

CycInt CycInt::galois_apply(std::uint64_t r) const {
  if (r % p_ == 0) throw Error(Errc::NonUnit, std::to_string(r) + " is not a unit mod " + std::to_string(p_));
  if (p_ == 2) return *this;
  r %= p_;
  const std::size_t d = size();
  if (is_small()) {
    std::vector<std::int64_t> counts(p_, 0);
    for (std::size_t j = 0; j < d; ++j) counts[(j * r) % p_] = small_[j];
    std::vector<std::int64_t> out(d);
    bool overflow = false;
    for (std::size_t j = 0; j < d; ++j) overflow |= __builtin_sub_overflow(counts[j], counts[p_ - 1], &out[j]);
    if (!overflow) return from_coords(p_, std::span<const std::int64_t>(out));
  }
  auto c = coords();
  std::vector<BigInt> counts(p_);
  for (std::size_t j = 0; j < d; ++j) counts[(j * r) % p_] = c[j];
  return from_coords(p_, reduce_counts<BigInt>(p_, counts));
}

std::optional<std::uint64_t> CycInt::phi_valuation() const {
  if (is_zero()) return std::nullopt;
  const std::uint32_t p = p_;
  std::uint64_t v = 0;
  std::vector<std::uint64_t> poly;
  if (is_small()) {
    if (p == 2) return std::countr_zero(static_cast<std::uint64_t>(small_[0]));
    std::uint64_t g = 0;
    for (auto x : small_) g = std::gcd(g, static_cast<std::uint64_t>(x < 0 ? -x : x));
    std::int64_t pv = 1;
    for (; g % p == 0; g /= p) {
      ++v;
      pv *= p;
    }
    poly.resize(small_.size());
    for (std::size_t j = 0; j < small_.size(); ++j) {
      const std::int64_t r = (small_[j] / pv) % std::int64_t(p);
      poly[j] = static_cast<std::uint64_t>(r < 0 ? r + p : r);
    }
  } else {
    auto c = coords();
    const BigInt P(p);
    if (p == 2) return mpz_scan1(c[0].get_mpz_t(), 0);

    // p-content: (1 - zeta)^(p-1) is an associate of p.
    BigInt g = 0;
    for (const auto& x : c) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    v = mpz_remove(g.get_mpz_t(), g.get_mpz_t(), P.get_mpz_t());
    BigInt pv;
    mpz_pow_ui(pv.get_mpz_t(), P.get_mpz_t(), v);
    poly.resize(c.size());
    for (std::size_t j = 0; j < c.size(); ++j) {
      BigInt t;
      mpz_divexact(t.get_mpz_t(), c[j].get_mpz_t(), pv.get_mpz_t());
      poly[j] = mpz_fdiv_ui(t.get_mpz_t(), p);
    }
  }

  // Z[zeta]/(p) = F_p[x]/(x - 1)^(p-1); the remaining order is the
  // multiplicity of the root 1 of the reduced polynomial.
  std::uint64_t ord = 0;
  while (true) {
    while (!poly.empty() && poly.back() == 0) poly.pop_back();
    // Synthetic division by (x - 1): remainder is the value at 1.
    std::uint64_t rem = 0;
    for (auto x : poly) rem = (rem + x) % p;
    if (rem != 0) break;
    std::vector<std::uint64_t> quo(poly.size() - 1);
    std::uint64_t acc = 0;
    for (std::size_t j = poly.size() - 1; j >= 1; --j) {
      acc = (acc + poly[j]) % p;
      quo[j - 1] = acc;
    }
    poly = std::move(quo);
    ++ord;
  }
  return v * (p - 1) + ord;
}

CycInt CycInt::div_one_minus_zeta() const {
  const std::uint32_t p = p_;
  auto c = coords();
  if (p == 2) {
    if (mpz_divisible_ui_p(c[0].get_mpz_t(), 2) == 0)
      throw Error(Errc::InvalidArgument, "not divisible by 1 - zeta");
    return from_coords(p, std::vector<BigInt>{c[0] / 2});
  }
  // Subtract (S/p)(1 + ... + zeta^(p-1)) so the length-p coefficient vector
  // sums to zero; then the quotient's coefficients are prefix sums.
  BigInt sum = 0;
  for (const auto& x : c) sum += x;
  if (mpz_divisible_ui_p(sum.get_mpz_t(), p) == 0)
    throw Error(Errc::InvalidArgument, "not divisible by 1 - zeta");
  BigInt shift = sum / p;
  std::vector<BigInt> quo(p - 1);
  BigInt acc = 0;
  for (std::size_t j = 0; j + 1 < p; ++j) {
    acc += c[j] - shift;
    quo[j] = acc;
  }
  // quo has p-1 entries with zero coefficient at zeta^(p-1), already canonical.
  return from_coords(p, std::move(quo));
}

namespace {

// cos and sin of 2 pi j / p for j < p - 1, kept for the last p seen.
const std::vector<std::complex<double>>& unit_roots(std::uint32_t p) {
  thread_local std::uint32_t cached = 0;
  thread_local std::vector<std::complex<double>> roots;
  if (cached != p) {
    roots.resize(p - 1);
    const double step = 2.0 * std::numbers::pi / p;
    for (std::uint32_t j = 0; j + 1 < p; ++j) roots[j] = {std::cos(step * j), std::sin(step * j)};
    cached = p;
  }
  return roots;
}

}  // namespace

std::complex<double> CycInt::approx_complex() const {
  if (p_ == 2) return {coord(0).get_d(), 0.0};
  const auto& roots = unit_roots(p_);
  double re = 0, im = 0;
  for (std::size_t j = 0; j < size(); ++j) {
    double c = is_small() ? static_cast<double>(small_[j]) : big_[j].get_d();
    if (c == 0) continue;
    re += c * roots[j].real();
    im += c * roots[j].imag();
  }
  return {re, im};
}

std::string CycInt::to_string() const {
  auto c = coords();
  std::string out;
  for (std::size_t j = 0; j < c.size(); ++j) {
    if (c[j] == 0) continue;
    BigInt mag = abs(c[j]);
    bool neg = c[j] < 0;
    if (out.empty()) {
      if (neg) out += "-";
    } else {
      out += neg ? " - " : " + ";
    }
    if (j == 0) {
      out += mag.get_str();
      continue;
    }
    if (mag != 1) out += mag.get_str() + "*";
    out += "z";
    if (j > 1) out += "^" + std::to_string(j);
  }
  return out.empty() ? "0" : out;
}

CycInt CycInt::parse(std::uint32_t p, std::string_view text) {
  auto fail = [&](const std::string& why) {
    return Error(Errc::InvalidArgument, "cannot parse '" + std::string(text) + "': " + why);
  };
  CycInt result(p);
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  bool first = true;
  skip_ws();
  if (i == text.size()) throw fail("empty");
  while (i < text.size()) {
    int sign = 1;
    skip_ws();
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
      sign = text[i] == '-' ? -1 : 1;
      ++i;
      skip_ws();
    } else if (!first) {
      throw fail("expected + or -");
    }
    first = false;
    BigInt coef = 1;
    bool have_num = false;
    std::size_t start = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    if (i > start) {
      coef = BigInt(std::string(text.substr(start, i - start)));
      have_num = true;
    }
    skip_ws();
    std::uint64_t power = 0;
    bool have_z = false;
    if (have_num && i < text.size() && text[i] == '*') {
      ++i;
      skip_ws();
      if (i >= text.size() || text[i] != 'z') throw fail("expected z after *");
    }
    if (i < text.size() && text[i] == 'z') {
      have_z = true;
      ++i;
      power = 1;
      if (i < text.size() && text[i] == '^') {
        ++i;
        std::size_t s = i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
        if (i == s) throw fail("missing exponent");
        power = std::stoull(std::string(text.substr(s, i - s)));
      }
    }
    if (!have_num && !have_z) throw fail("empty term");
    result += zeta_power(p, power).scaled(sign * coef);
    skip_ws();
  }
  return result;
}

std::size_t CycInt::hash() const noexcept {
  std::size_t h = std::hash<std::uint32_t>{}(p_);
  auto mix = [&h](std::uint64_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
  if (is_small()) {
    for (auto c : small_) mix(static_cast<std::uint64_t>(c));
  } else {
    for (const auto& c : big_) {
      mix(static_cast<std::uint64_t>(mpz_sgn(c.get_mpz_t())) + 7);
      std::size_t n = mpz_size(c.get_mpz_t());
      for (std::size_t k = 0; k < n; ++k) mix(mpz_getlimbn(c.get_mpz_t(), k));
    }
  }
  return h;
}

bool coords_less(const CycInt& a, const CycInt& b) {
  if (a.p() != b.p()) return a.p() < b.p();
  if (a.is_small() && b.is_small()) {
    auto x = a.small_coords();
    auto y = b.small_coords();
    return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end());
  }
  auto x = a.coords();
  auto y = b.coords();
  return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end());
}

bool embedding_less(const CycInt& a, const CycInt& b) {
  if (a.is_rational_integer() && b.is_rational_integer()) return a.coord(0) < b.coord(0);
  auto x = a.approx_complex();
  auto y = b.approx_complex();
  if (x.real() != y.real()) return x.real() < y.real();
  if (x.imag() != y.imag()) return x.imag() < y.imag();
  return coords_less(a, b);
}

}  // namespace weilscope
