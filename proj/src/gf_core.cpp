#include "weilscope/gf_core.hpp"

#include <algorithm>
#include <tuple>
#include <sstream>

#include "weilscope/digest.hpp"
#include "weilscope/error.hpp"

namespace weilscope {

bool is_prime(std::uint64_t n) noexcept {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) noexcept {
  while (b != 0) {
    std::uint64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::optional<std::uint64_t> inverse_mod(std::uint64_t a, std::uint64_t n) noexcept {
  if (n == 1) return 0;
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = static_cast<std::int64_t>(n), new_r = static_cast<std::int64_t>(a % n);
  while (new_r != 0) {
    std::int64_t quo = r / new_r;
    std::tie(t, new_t) = std::pair{new_t, t - quo * new_t};
    std::tie(r, new_r) = std::pair{new_r, r - quo * new_r};
  }
  if (r != 1) return std::nullopt;
  if (t < 0) t += static_cast<std::int64_t>(n);
  return static_cast<std::uint64_t>(t);
}

std::optional<std::uint64_t> checked_power(std::uint64_t p, std::uint32_t m,
                                           std::uint64_t limit) noexcept {
  std::uint64_t q = 1;
  for (std::uint32_t i = 0; i < m; ++i) {
    if (q > limit / p) return std::nullopt;
    q *= p;
  }
  return q;
}

namespace {

// Dense polynomials over F_p, coefficients low to high, no trailing zeros.
using Poly = std::vector<std::uint64_t>;

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly poly_mod(Poly a, const Poly& f, std::uint64_t p) {
  trim(a);
  const std::size_t df = f.size() - 1;
  const std::uint64_t lead_inv = *inverse_mod(f.back(), p);
  while (a.size() > df) {
    std::uint64_t c = a.back() * lead_inv % p;
    std::size_t shift = a.size() - 1 - df;
    for (std::size_t i = 0; i <= df; ++i) {
      a[shift + i] = (a[shift + i] + (p - c) * f[i]) % p;
    }
    trim(a);
  }
  return a;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& f, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    }
  }
  return poly_mod(std::move(r), f, p);
}

Poly poly_powmod(Poly base, std::uint64_t e, const Poly& f, std::uint64_t p) {
  Poly result{1};
  base = poly_mod(std::move(base), f, p);
  while (e > 0) {
    if (e & 1) result = poly_mulmod(result, base, f, p);
    base = poly_mulmod(base, base, f, p);
    e >>= 1;
  }
  return result;
}

Poly poly_sub(Poly a, const Poly& b, std::uint64_t p) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + p - b[i]) % p;
  trim(a);
  return a;
}

Poly poly_gcd(Poly a, Poly b, std::uint64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

// x^e mod f by repeated squaring; f is monic of degree m >= 1.
Poly x_power(std::uint64_t e, const Poly& f, std::uint64_t p) {
  return poly_powmod(Poly{0, 1}, e, f, p);
}

// Rabin's test: f of degree m is irreducible iff x^(p^m) = x mod f and
// gcd(x^(p^(m/r)) - x, f) = 1 for every prime r | m.
bool is_irreducible(const Poly& f, std::uint64_t p) {
  const std::size_t m = f.size() - 1;
  if (m == 1) return true;
  const Poly x{0, 1};
  auto frobenius_power = [&](std::size_t k) {
    Poly acc = x;
    for (std::size_t i = 0; i < k; ++i) acc = poly_powmod(acc, p, f, p);
    return acc;
  };
  if (poly_sub(frobenius_power(m), x, p) != Poly{}) return false;
  for (std::uint64_t r : prime_factors(m)) {
    Poly g = poly_gcd(f, poly_sub(frobenius_power(m / r), x, p), p);
    if (g.size() != 1) return false;
  }
  return true;
}

// Order of x modulo f is exactly q - 1. For any monic f this implies f is
// irreducible, since x then generates q - 1 distinct units.
bool x_is_primitive(const Poly& f, std::uint64_t p, std::uint64_t q) {
  if (f[0] == 0) return false;
  if (x_power(q - 1, f, p) != Poly{1}) return false;
  for (std::uint64_t r : prime_factors(q - 1)) {
    if (x_power((q - 1) / r, f, p) == Poly{1}) return false;
  }
  return true;
}

std::uint32_t smallest_primitive_root(std::uint32_t p) {
  if (p == 2) return 1;
  const auto factors = prime_factors(p - 1);
  for (std::uint32_t g = 2; g < p; ++g) {
    bool ok = true;
    for (std::uint64_t r : factors) {
      std::uint64_t acc = 1, base = g, e = (p - 1) / r;
      while (e) {
        if (e & 1) acc = acc * base % p;
        base = base * base % p;
        e >>= 1;
      }
      if (acc == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
  return 0;
}

}  // namespace

FiniteField FiniteField::build(std::uint32_t p, std::uint32_t m,
                               std::optional<std::vector<std::uint32_t>> modulus) {
  if (!is_prime(p)) throw Error(Errc::NotPrime, std::to_string(p) + " is not prime");
  if (m == 0) throw Error(Errc::DegreeMismatch, "extension degree must be at least 1");
  const auto q = checked_power(p, m);
  if (!q) throw Error(Errc::FieldTooLarge, "p^m exceeds 2^24");

  FiniteField field;
  field.spec_.p = p;
  field.spec_.m = m;
  field.q_ = static_cast<std::uint32_t>(*q);

  if (modulus) {
    const auto& c = *modulus;
    if (c.size() != std::size_t(m) + 1 || c.back() != 1) {
      throw Error(Errc::DegreeMismatch, "modulus must be monic of degree " + std::to_string(m));
    }
    if (std::any_of(c.begin(), c.end(), [p](std::uint32_t v) { return v >= p; })) {
      throw Error(Errc::InvalidArgument, "modulus coefficients must lie in [0, p)");
    }
    Poly f(c.begin(), c.end());
    if (!is_irreducible(f, p)) throw Error(Errc::ReducibleModulus, "modulus is reducible");
    if (!x_is_primitive(f, p, *q)) {
      throw Error(Errc::NonPrimitiveRoot, "x is not a generator modulo the given polynomial");
    }
    field.spec_.modulus = c;
  } else if (m == 1) {
    const std::uint32_t g = smallest_primitive_root(p);
    field.spec_.modulus = {(p - g) % p, 1};
  } else {
    const std::uint64_t lower_count = *q;  // p^m candidates for c0..c_{m-1}
    for (std::uint64_t lower = 1; lower < lower_count; ++lower) {
      Poly f(m + 1, 0);
      std::uint64_t v = lower;
      for (std::uint32_t i = 0; i < m; ++i) {
        f[i] = v % p;
        v /= p;
      }
      f[m] = 1;
      if (f[0] == 0) continue;
      if (x_is_primitive(f, p, *q)) {
        field.spec_.modulus.assign(f.begin(), f.end());
        break;
      }
    }
  }
  field.build_tables();
  return field;
}

void FiniteField::build_tables() {
  const std::uint32_t p = spec_.p, m = spec_.m, units = q_ - 1;
  pow_p_.assign(m + 1, 1);
  for (std::uint32_t i = 1; i <= m; ++i) pow_p_[i] = pow_p_[i - 1] * p;

  antilog_.assign(units, 0);
  log_.assign(q_, kNoZech);

  // Multiplication by x on vector codes: shift digits up, fold the top digit
  // back through x^m = -(c0 + c1 x + ... + c_{m-1} x^{m-1}).
  std::vector<std::uint32_t> digits(m, 0);
  digits[0] = 1;
  const auto& c = spec_.modulus;
  for (std::uint32_t k = 0; k < units; ++k) {
    std::uint32_t code = 0;
    for (std::uint32_t i = m; i-- > 0;) code = code * p + digits[i];
    antilog_[k] = code;
    log_[code] = k;
    const std::uint32_t top = digits[m - 1];
    for (std::uint32_t i = m - 1; i > 0; --i) {
      digits[i] = static_cast<std::uint32_t>((digits[i - 1] + std::uint64_t(p - c[i]) * top) % p);
    }
    digits[0] = static_cast<std::uint32_t>(std::uint64_t(p - c[0]) * top % p);
  }

  neg_log_offset_ = (p == 2) ? 0 : units / 2;

  // Trace of the basis vectors omega^i, i < m, then extend linearly.
  std::vector<std::uint32_t> basis_trace(m, 0);
  for (std::uint32_t i = 0; i < m; ++i) {
    std::uint32_t acc = 0;
    std::uint64_t e = i;
    for (std::uint32_t j = 0; j < m; ++j) {
      acc = code_add(acc, antilog_[e % units]);
      e = (e % units) * p;
    }
    basis_trace[i] = acc;  // lies in the prime subfield, i.e. acc < p
  }
  trace_.assign(q_, 0);
  if (p == 2) {
    std::uint32_t mask = 0;
    for (std::uint32_t i = 0; i < m; ++i) mask |= basis_trace[i] << i;
    for (std::uint32_t code = 0; code < q_; ++code) {
      trace_[code] = static_cast<std::uint32_t>(__builtin_parity(code & mask));
    }
  } else {
    for (std::uint32_t code = 1; code < q_; ++code) {
      // Only the lowest nonzero digit changes relative to code - 1 when it
      // is not zero; fall back to the digit sum otherwise.
      if (code % p != 0) {
        trace_[code] = (trace_[code - 1] + basis_trace[0]) % p;
      } else {
        std::uint64_t acc = 0;
        std::uint32_t v = code;
        for (std::uint32_t i = 0; i < m; ++i) {
          acc += std::uint64_t(v % p) * basis_trace[i];
          v /= p;
        }
        trace_[code] = static_cast<std::uint32_t>(acc % p);
      }
    }
  }

  trace_log_.resize(units);
  zech_.resize(units);
  for (std::uint32_t k = 0; k < units; ++k) {
    const std::uint32_t code = antilog_[k];
    trace_log_[k] = trace_[code];
    const std::uint32_t plus_one = (code % p == p - 1) ? code - (p - 1) : code + 1;
    zech_[k] = plus_one == 0 ? kNoZech : log_[plus_one];
  }
}

Elem FiniteField::from_int(std::int64_t c) const {
  std::int64_t r = c % static_cast<std::int64_t>(spec_.p);
  if (r < 0) r += spec_.p;
  return from_code(static_cast<std::uint32_t>(r));
}

std::uint32_t FiniteField::trace(Elem x) const {
  if (x >= q_) throw Error(Errc::InvalidElement, "element encoding out of range");
  return x == 0 ? 0 : trace_log_[x - 1];
}

std::uint32_t FiniteField::zech(std::uint32_t k) const {
  if (k >= units()) throw Error(Errc::IndexOutOfRange, "Zech index must lie in [0, q-2]");
  return zech_[k];
}

Elem FiniteField::inv(Elem a) const {
  if (a == 0) throw Error(Errc::InvalidElement, "zero has no inverse");
  return from_log(units() - (a - 1));
}

Elem FiniteField::div(Elem a, Elem b) const { return mul(a, inv(b)); }

Elem FiniteField::pow(Elem a, std::uint64_t e) const noexcept {
  if (e == 0) return 1;
  if (a == 0) return 0;
  return from_log(pow_exponent_log(*this, a - 1, e));
}

std::uint32_t FiniteField::code_add(std::uint32_t a, std::uint32_t b) const noexcept {
  const std::uint32_t p = spec_.p;
  if (p == 2) return a ^ b;
  if (spec_.m == 1) return (a + b) % p;
  std::uint32_t out = 0;
  for (std::uint32_t i = 0; i < spec_.m; ++i) {
    std::uint32_t d = a % p + b % p;
    if (d >= p) d -= p;
    out += d * pow_p_[i];
    a /= p;
    b /= p;
  }
  return out;
}

std::uint32_t FiniteField::code_neg(std::uint32_t a) const noexcept {
  const std::uint32_t p = spec_.p;
  if (p == 2) return a;
  std::uint32_t out = 0;
  for (std::uint32_t i = 0; i < spec_.m; ++i) {
    const std::uint32_t d = a % p;
    out += (d == 0 ? 0 : p - d) * pow_p_[i];
    a /= p;
  }
  return out;
}

std::uint32_t FiniteField::code_sub(std::uint32_t a, std::uint32_t b) const noexcept {
  return code_add(a, code_neg(b));
}

std::uint32_t FiniteField::code_scale(std::uint32_t a, std::uint32_t c) const noexcept {
  const std::uint32_t p = spec_.p;
  c %= p;
  std::uint32_t out = 0;
  for (std::uint32_t i = 0; i < spec_.m; ++i) {
    out += static_cast<std::uint32_t>(std::uint64_t(a % p) * c % p) * pow_p_[i];
    a /= p;
  }
  return out;
}

std::string FiniteField::descriptor() const {
  std::ostringstream os;
  os << "p=" << spec_.p << " m=" << spec_.m << " modulus=";
  for (std::size_t i = 0; i < spec_.modulus.size(); ++i) {
    if (i) os << ',';
    os << spec_.modulus[i];
  }
  os << " generator=x";
  return os.str();
}

std::string FiniteField::table_checksum() const {
  std::string bytes;
  auto append = [&bytes](const std::vector<std::uint32_t>& v) {
    bytes.append(reinterpret_cast<const char*>(v.data()), v.size() * sizeof(std::uint32_t));
  };
  append(antilog_);
  append(log_);
  append(trace_);
  append(zech_);
  return sha256_hex(bytes);
}

std::uint32_t pow_exponent_log(const FiniteField& field, std::uint32_t k, std::uint64_t s) noexcept {
  const std::uint64_t units = field.units();
  return static_cast<std::uint32_t>((std::uint64_t(k) % units) * (s % units) % units);
}

}  // namespace weilscope
