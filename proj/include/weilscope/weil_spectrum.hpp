#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "weilscope/cyclotomic.hpp"
#include "weilscope/finding.hpp"
#include "weilscope/gf_core.hpp"

namespace weilscope {

enum class Algorithm { Naive, Fast };

// Every Fourier coefficient W(a) = sum_x mu(c*x^s - a*x) of one power map,
// indexed by element encoding. Odd p keeps p trace-value counts per element;
// p = 2 keeps the signed integer value.
class WeilTable {
 public:
  const FiniteField& field() const noexcept { return *field_; }
  std::uint64_t s() const noexcept { return s_; }
  std::uint32_t p() const noexcept { return p_; }
  std::uint32_t q() const noexcept { return q_; }

  CycInt value(Elem a) const;
  bool is_zero(Elem a) const;
  // Counts of trace values j in [0, p); for p = 2 a single signed entry.
  std::span<const std::int32_t> raw(Elem a) const {
    std::size_t w = p_ == 2 ? 1 : p_;
    return {data_.data() + std::size_t(a) * w, w};
  }

  friend WeilTable weil_table(const FiniteField&, std::uint64_t, Algorithm, Elem);

 private:
  const FiniteField* field_ = nullptr;
  std::uint64_t s_ = 0;
  std::uint32_t p_ = 0, q_ = 0;
  std::vector<std::int32_t> data_;
};

// Table of W for f(x) = coeff * x^s (coeff defaults to 1). s >= 1; the map
// sends 0 to 0.
WeilTable weil_table(const FiniteField& field, std::uint64_t s, Algorithm algo = Algorithm::Fast,
                     Elem coeff = 1);

CycInt weil_sum(const FiniteField& field, std::uint64_t s, Elem a);

struct Spectrum {
  std::uint32_t p = 0, m = 0, q = 0;
  std::string field;  // descriptor
  std::uint64_t s = 0;
  CycInt at_zero;
  // Distinct values over L* with multiplicities, ascending by the real
  // embedding (ties broken exactly).
  std::vector<std::pair<CycInt, std::uint64_t>> reduced;

  std::size_t value_count() const noexcept { return reduced.size(); }
  std::uint64_t multiplicity(const CycInt& v) const;
  bool contains(const CycInt& v) const { return multiplicity(v) > 0; }
  bool operator==(const Spectrum&) const = default;
};

Spectrum summarize(const WeilTable& table);
Spectrum full_spectrum(const FiniteField& field, std::uint64_t s, Algorithm algo = Algorithm::Fast);

// Number of distinct values of W on L*, stopping once it exceeds limit.
std::size_t distinct_value_count(const WeilTable& table, std::size_t limit);

nlohmann::json to_json(const Spectrum& spectrum);

struct SpectrumStats {
  std::size_t value_count = 0;
  bool is_singular = false;
  bool is_integer_valued = false;
  std::uint64_t s_mod_pminus1 = 0;
  // is_integer_valued == (s = 1 mod p-1)
  bool integrality_consistent = false;
};

SpectrumStats spectrum_stats(const Spectrum& spectrum);

// Galois orbits of the distinct values on L*. `stable` reports whether the
// value multiset is closed under zeta -> zeta^r with equal multiplicities
// along each orbit.
struct GaloisOrbit {
  CycInt representative;
  std::uint64_t size = 0;          // number of distinct conjugates
  std::uint64_t multiplicity = 0;  // multiplicity of each member
};
struct OrbitDecomposition {
  std::vector<GaloisOrbit> orbits;
  bool stable = true;
};
OrbitDecomposition galois_orbits(const Spectrum& spectrum);

// sum over a in L of W(a)^k. Evaluated orbit by orbit through the absolute
// trace, which is exact because the spectrum is checked Galois-stable first.
CycInt power_moment(const Spectrum& spectrum, unsigned k);
// Same, reusing orbits already computed by galois_orbits(spectrum).
CycInt power_moment(const Spectrum& spectrum, unsigned k, const OrbitDecomposition& orbits);
// Same sum by direct multiplication; used to cross-check small p.
CycInt power_moment_direct(const Spectrum& spectrum, unsigned k);

// Absolute trace Q(zeta_p)/Q of a * b.
BigInt trace_of_product(const CycInt& a, const CycInt& b);

bool verify_scaling_law(const FiniteField& field, std::uint64_t s, Elem b);
bool verify_galois_law(const FiniteField& field, std::uint64_t s, std::uint64_t r);

// f^[n](z) for every z, indexed by element encoding.
std::vector<CycInt> convolution_power(const FiniteField& field, std::uint64_t s, unsigned n);

struct AnnihilatorReport {
  bool spectral_identity = false;     // sum sigma_i W(a)^(r-i) = sigma_r delta_0(a)
  bool convolution_identity = false;  // q sum sigma_i f^[r-i](z) = sigma_r
  bool q_divides_sigma_r = false;
  bool kernel_expansion = false;      // nonzero values, coefficients (-1)^n prod A_i / q
  std::size_t r = 0;                  // distinct values on L* (0 included when present)
  std::size_t nonzero_values = 0;
  CycInt prod_nonzero;
  bool q_divides_prod_nonzero = false;  // reported, not asserted

  bool ok() const noexcept { return spectral_identity && convolution_identity && q_divides_sigma_r && kernel_expansion; }
};
AnnihilatorReport annihilating_identity(const FiniteField& field, std::uint64_t s);
bool verify_annihilating_identity(const FiniteField& field, std::uint64_t s);

struct DeterminantCheck {
  std::complex<double> lhs, rhs;
  double scale = 0;  // Hadamard bound of the matrix
  bool match = false;
};
struct DeterminantReport {
  // prod_{a in L} W(a) against det[mu(f(a - b))].
  DeterminantCheck eigen_product;
  // (W(0) - q) * D(f) against det[mu(f(x - y)) - 1]; equals -q D(f) when W(0) = 0.
  DeterminantCheck shifted;
  CycInt d_exact;  // D(f) = prod_{a in L*} W(a)
  bool ok() const noexcept { return eigen_product.match && shifted.match; }
};
DeterminantReport determinant_identities(const FiniteField& field, std::uint64_t s);
bool determinant_match(std::complex<double> lhs, std::complex<double> rhs, double scale);

// basis spans the F_p-subspace S (empty basis gives S = {0}).
bool verify_poisson(const FiniteField& field, std::uint64_t s, std::span<const Elem> basis);

struct ThreeValuedReport {
  BigInt A, B;  // A > B, both nonzero
  std::uint64_t N_A = 0, N_B = 0, N_0 = 0;
  std::uint64_t a = 0, b = 0, c = 0;  // p-adic valuations of A, B, A - B
  BigInt alpha, beta, gamma;          // unit parts, signs kept
  BigInt V;                           // A + B - AB/q
  std::vector<std::string> violations;
};
// nullopt when the reduced spectrum does not have exactly three values.
std::optional<ThreeValuedReport> three_valued_report(const Spectrum& spectrum);
std::optional<ThreeValuedReport> three_valued_report(const FiniteField& field, std::uint64_t s);
nlohmann::json to_json(const ThreeValuedReport& r);

Finding check_vanishing(const FiniteField& field, const WeilTable& table);
Finding check_vanishing(const FiniteField& field, std::uint64_t s);
Finding check_mod3(const FiniteField& field, const WeilTable& table);
Finding check_mod3(const FiniteField& field, std::uint64_t s);

// Throws NotInvertible unless gcd(s, q-1) = 1.
void require_invertible(const FiniteField& field, std::uint64_t s);

}  // namespace weilscope
