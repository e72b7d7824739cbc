#pragma once

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace weilscope {

using BigInt = mpz_class;

// An element of Z[zeta_p] stored by its coordinates in the basis
// {1, zeta, ..., zeta^(p-2)}. For p = 2 the ring is Z and a single
// coordinate is kept (zeta = -1).
//
// Coordinates live in int64 while they fit and move to GMP integers when an
// operation would overflow; results are narrowed back whenever possible, so
// equal values always share one representation.
class CycInt {
 public:
  explicit CycInt(std::uint32_t p = 2);

  // sum_j counts[j] zeta^j for j in [0, p).
  static CycInt from_counts(std::uint32_t p, std::span<const std::int64_t> counts);
  static CycInt from_integer(std::uint32_t p, std::int64_t n);
  static CycInt from_integer(std::uint32_t p, const BigInt& n);
  static CycInt zeta_power(std::uint32_t p, std::uint64_t j);
  // Coordinates in the canonical basis; size must be dim(p).
  static CycInt from_coords(std::uint32_t p, std::span<const std::int64_t> coords);
  static CycInt from_coords(std::uint32_t p, std::vector<BigInt> coords);
  // Inverse of to_string().
  static CycInt parse(std::uint32_t p, std::string_view text);

  static std::size_t dim(std::uint32_t p) noexcept { return p == 2 ? 1 : p - 1; }

  std::uint32_t p() const noexcept { return p_; }
  std::size_t size() const noexcept { return dim(p_); }
  BigInt coord(std::size_t j) const;
  std::vector<BigInt> coords() const;
  // True when every coordinate fits in int64 (the fast representation).
  bool is_small() const noexcept { return big_.empty(); }
  std::span<const std::int64_t> small_coords() const noexcept { return small_; }

  bool is_zero() const noexcept;
  bool is_rational_integer() const noexcept;
  BigInt to_integer() const;
  // True when every coordinate is divisible by n (n != 0).
  bool divisible_by(const BigInt& n) const;

  CycInt operator-() const;
  CycInt& operator+=(const CycInt& other);
  CycInt& operator-=(const CycInt& other);
  CycInt& operator*=(const CycInt& other);
  friend CycInt operator+(CycInt a, const CycInt& b) { return a += b; }
  friend CycInt operator-(CycInt a, const CycInt& b) { return a -= b; }
  friend CycInt operator*(CycInt a, const CycInt& b) { return a *= b; }
  CycInt scaled(const BigInt& n) const;
  // this * zeta^j.
  CycInt times_zeta_power(std::uint64_t j) const;

  friend bool operator==(const CycInt& a, const CycInt& b) noexcept;

  // Image under zeta -> zeta^r; r must be a unit mod p.
  CycInt galois_apply(std::uint64_t r) const;
  CycInt conjugate() const { return galois_apply(p_ - 1); }

  // Exact order of the prime (1 - zeta) in this element, nullopt for zero.
  std::optional<std::uint64_t> phi_valuation() const;
  // Exact quotient by (1 - zeta); the element must be divisible.
  CycInt div_one_minus_zeta() const;

  std::complex<double> approx_complex() const;

  // `c0 + c1*z + ... + c_{p-2}*z^{p-2}`, zero terms omitted; plain integers
  // for rational values.
  std::string to_string() const;

  std::size_t hash() const noexcept;

 private:
  void normalize();
  void promote();
  void require_same(const CycInt& other) const;

  std::uint32_t p_;
  std::vector<std::int64_t> small_;
  std::vector<BigInt> big_;
};

struct CycIntHash {
  std::size_t operator()(const CycInt& a) const noexcept { return a.hash(); }
};

// Exact lexicographic comparison of canonical coordinates (any total order
// works for keys; this one is stable across runs).
bool coords_less(const CycInt& a, const CycInt& b);

// Order by real part of the complex embedding, then imaginary part, then
// coordinates. Used for report ordering.
bool embedding_less(const CycInt& a, const CycInt& b);

}  // namespace weilscope
