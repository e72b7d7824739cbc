#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace weilscope {

// Field elements are encoded as integers in [0, q): 0 is zero and 1 + k is
// omega^k, omega being the residue of x modulo the defining polynomial.
// Multiplication is log arithmetic; addition goes through the vector codes
// (base-p digits = coordinates in the basis 1, omega, ..., omega^(m-1)).
using Elem = std::uint32_t;

inline constexpr std::uint32_t kNoZech = 0xFFFFFFFFu;
inline constexpr std::uint32_t kMaxFieldOrder = 1u << 24;

struct FieldSpec {
  std::uint32_t p = 0;
  std::uint32_t m = 0;
  // Coefficients c0..cm of the monic defining polynomial, constant term first.
  std::vector<std::uint32_t> modulus;

  bool operator==(const FieldSpec&) const = default;
};

bool is_prime(std::uint64_t n) noexcept;
// Distinct prime divisors in increasing order.
std::vector<std::uint64_t> prime_factors(std::uint64_t n);
std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) noexcept;
// Inverse of a modulo n, or nullopt when gcd(a, n) != 1.
std::optional<std::uint64_t> inverse_mod(std::uint64_t a, std::uint64_t n) noexcept;
// Checked p^m; nullopt when the result exceeds limit.
std::optional<std::uint64_t> checked_power(std::uint64_t p, std::uint32_t m,
                                           std::uint64_t limit = kMaxFieldOrder) noexcept;

class FiniteField {
 public:
  // Builds F_{p^m}. Without an explicit modulus the default presentation is
  // used: for m = 1 the smallest primitive root g (modulus x - g), for m >= 2
  // the monic polynomial with the smallest value sum c_i p^i whose root x
  // generates the multiplicative group.
  static FiniteField build(std::uint32_t p, std::uint32_t m,
                           std::optional<std::vector<std::uint32_t>> modulus = std::nullopt);

  const FieldSpec& spec() const noexcept { return spec_; }
  std::uint32_t p() const noexcept { return spec_.p; }
  std::uint32_t m() const noexcept { return spec_.m; }
  std::uint32_t q() const noexcept { return q_; }
  // Order of the multiplicative group, q - 1.
  std::uint32_t units() const noexcept { return q_ - 1; }

  // Vector code of omega^k; k in [0, q-2].
  std::uint32_t antilog(std::uint32_t k) const { return antilog_[k]; }
  // Discrete log of a nonzero vector code.
  std::uint32_t log(std::uint32_t code) const { return log_[code]; }

  Elem from_code(std::uint32_t code) const { return code == 0 ? 0 : log_[code] + 1; }
  std::uint32_t to_code(Elem x) const { return x == 0 ? 0 : antilog_[x - 1]; }
  static Elem from_log(std::uint64_t k, std::uint32_t units) noexcept {
    return static_cast<Elem>(k % units) + 1;
  }
  Elem from_log(std::uint64_t k) const noexcept { return from_log(k, units()); }
  // Image of the integer c (mod p) in the prime subfield.
  Elem from_int(std::int64_t c) const;

  // Absolute trace L -> F_p.
  std::uint32_t trace(Elem x) const;
  std::uint32_t trace_code(std::uint32_t code) const { return trace_[code]; }
  std::uint32_t trace_of_log(std::uint32_t k) const { return trace_log_[k]; }

  // The l with omega^l = 1 + omega^k, or kNoZech when 1 + omega^k = 0.
  std::uint32_t zech(std::uint32_t k) const;
  // n with omega^n = -1: (q-1)/2 for odd p, 0 for p = 2.
  std::uint32_t neg_log_offset() const noexcept { return neg_log_offset_; }

  Elem add(Elem a, Elem b) const { return from_code(code_add(to_code(a), to_code(b))); }
  Elem sub(Elem a, Elem b) const { return from_code(code_sub(to_code(a), to_code(b))); }
  Elem neg(Elem a) const { return from_code(code_neg(to_code(a))); }
  Elem mul(Elem a, Elem b) const noexcept {
    if (a == 0 || b == 0) return 0;
    std::uint64_t k = std::uint64_t(a - 1) + (b - 1);
    return from_log(k);
  }
  Elem inv(Elem a) const;
  Elem div(Elem a, Elem b) const;
  Elem pow(Elem a, std::uint64_t e) const noexcept;

  // Digit-wise arithmetic on vector codes.
  std::uint32_t code_add(std::uint32_t a, std::uint32_t b) const noexcept;
  std::uint32_t code_sub(std::uint32_t a, std::uint32_t b) const noexcept;
  std::uint32_t code_neg(std::uint32_t a) const noexcept;
  std::uint32_t code_scale(std::uint32_t a, std::uint32_t c) const noexcept;
  std::uint32_t digit(std::uint32_t code, std::uint32_t i) const noexcept {
    return (code / pow_p_[i]) % spec_.p;
  }
  std::uint32_t pow_p(std::uint32_t i) const noexcept { return pow_p_[i]; }

  // `p=<p> m=<m> modulus=<c0,...,cm> generator=x`
  std::string descriptor() const;
  // SHA-256 over the log, antilog, trace and Zech tables.
  std::string table_checksum() const;

  std::span<const std::uint32_t> antilog_table() const noexcept { return antilog_; }
  std::span<const std::uint32_t> log_table() const noexcept { return log_; }
  std::span<const std::uint32_t> zech_table() const noexcept { return zech_; }
  std::span<const std::uint32_t> trace_table() const noexcept { return trace_; }
  std::span<const std::uint32_t> trace_log_table() const noexcept { return trace_log_; }

 private:
  FiniteField() = default;
  void build_tables();

  FieldSpec spec_;
  std::uint32_t q_ = 0;
  std::uint32_t neg_log_offset_ = 0;
  std::vector<std::uint32_t> pow_p_;
  std::vector<std::uint32_t> antilog_;
  std::vector<std::uint32_t> log_;
  std::vector<std::uint32_t> trace_;
  std::vector<std::uint32_t> trace_log_;
  std::vector<std::uint32_t> zech_;
};

// log(x^s) from log(x): (k * s) mod (q - 1).
std::uint32_t pow_exponent_log(const FiniteField& field, std::uint32_t k, std::uint64_t s) noexcept;

}  // namespace weilscope
