#include "weilscope/weil_spectrum.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "weilscope/error.hpp"
#include "weilscope/kernels.hpp"

namespace weilscope {

namespace {

constexpr std::uint64_t kMaxTableEntries = std::uint64_t(1) << 27;

// Dual basis codes beta_i with Tr(beta_i * omega^j) = delta_ij.
std::vector<std::uint32_t> dual_basis(const FiniteField& field) {
  const std::uint32_t p = field.p(), m = field.m(), n = field.units();
  std::vector<std::vector<std::int64_t>> aug(m, std::vector<std::int64_t>(2 * m, 0));
  for (std::uint32_t i = 0; i < m; ++i) {
    for (std::uint32_t j = 0; j < m; ++j) aug[i][j] = field.trace_of_log((i + j) % n);
    aug[i][m + i] = 1;
  }
  for (std::uint32_t col = 0; col < m; ++col) {
    std::uint32_t piv = col;
    while (piv < m && aug[piv][col] % p == 0) ++piv;
    if (piv == m) throw Error(Errc::InvalidArgument, "trace form is degenerate");
    std::swap(aug[piv], aug[col]);
    std::int64_t inv = static_cast<std::int64_t>(*inverse_mod(aug[col][col] % p, p));
    for (auto& x : aug[col]) x = (x * inv) % p;
    for (std::uint32_t r = 0; r < m; ++r) {
      if (r == col || aug[r][col] == 0) continue;
      std::int64_t f = aug[r][col];
      for (std::uint32_t c = 0; c < 2 * m; ++c) aug[r][c] = ((aug[r][c] - f * aug[col][c]) % p + p) % p;
    }
  }
  std::vector<std::uint32_t> beta(m);
  for (std::uint32_t i = 0; i < m; ++i) {
    std::uint32_t code = 0;
    for (std::uint32_t k = 0; k < m; ++k) code += static_cast<std::uint32_t>(aug[i][m + k]) * field.pow_p(k);
    beta[i] = code;
  }
  return beta;
}

// Tr(coeff * x^s) for x = omega^k, k in [0, q-2].
std::vector<std::uint32_t> trace_of_power(const FiniteField& field, std::uint64_t s, Elem coeff) {
  const std::uint32_t n = field.units();
  std::vector<std::uint32_t> out(n, 0);
  if (coeff == 0) return out;
  const std::uint64_t step = s % n;
  std::uint64_t e = coeff - 1;
  for (std::uint32_t k = 0; k < n; ++k) {
    out[k] = field.trace_of_log(static_cast<std::uint32_t>(e));
    e += step;
    if (e >= n) e -= n;
  }
  return out;
}

// Character index C (digits c_i) -> element encoding of sum c_i beta_i.
std::vector<Elem> character_elements(const FiniteField& field) {
  const auto beta = dual_basis(field);
  const std::uint32_t p = field.p(), m = field.m(), q = field.q();
  std::vector<Elem> out(q);
  std::vector<std::uint32_t> digits(m, 0);
  std::uint32_t code = 0;
  for (std::uint32_t c = 0; c < q; ++c) {
    out[c] = field.from_code(code);
    for (std::uint32_t i = 0; i < m; ++i) {
      code = field.code_add(code, beta[i]);
      if (++digits[i] < p) break;
      digits[i] = 0;
    }
  }
  return out;
}

std::uint64_t primitive_root_mod(std::uint32_t p) {
  if (p == 2) return 1;
  auto factors = prime_factors(p - 1);
  for (std::uint64_t g = 2;; ++g) {
    bool ok = true;
    for (auto f : factors) {
      std::uint64_t e = (p - 1) / f, r = 1, b = g % p;
      while (e) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
      }
      if (r == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
}

CycInt cyc_pow(CycInt v, unsigned k) {
  CycInt r = CycInt::from_integer(v.p(), 1);
  while (k) {
    if (k & 1) r *= v;
    k >>= 1;
    if (k) v *= v;
  }
  return r;
}

std::string canonical_key(std::span<const std::int32_t> counts) {
  // Counts sum to q, so differences from the last entry identify the value.
  std::string key((counts.size() - 1) * sizeof(std::int32_t), '\0');
  const std::int32_t last = counts.back();
  for (std::size_t j = 0; j + 1 < counts.size(); ++j) {
    std::int32_t d = counts[j] - last;
    std::memcpy(key.data() + j * sizeof(std::int32_t), &d, sizeof d);
  }
  return key;
}

}  // namespace

void require_invertible(const FiniteField& field, std::uint64_t s) {
  if (s == 0 || gcd_u64(s, field.units()) != 1)
    throw Error(Errc::NotInvertible, "gcd(" + std::to_string(s) + ", " + std::to_string(field.units()) + ") != 1");
}

CycInt WeilTable::value(Elem a) const {
  if (a >= q_) throw Error(Errc::InvalidElement, "element encoding out of range");
  if (p_ == 2) return CycInt::from_integer(2, data_[a]);
  auto r = raw(a);
  std::vector<std::int64_t> c(r.begin(), r.end());
  return CycInt::from_counts(p_, c);
}

bool WeilTable::is_zero(Elem a) const {
  auto r = raw(a);
  if (p_ == 2) return r[0] == 0;
  return std::all_of(r.begin(), r.end(), [&](std::int32_t c) { return c == r[0]; });
}

WeilTable weil_table(const FiniteField& field, std::uint64_t s, Algorithm algo, Elem coeff) {
  if (s == 0) throw Error(Errc::InvalidArgument, "exponent must be positive");
  if (coeff >= field.q()) throw Error(Errc::InvalidElement, "coefficient out of range");
  const std::uint32_t p = field.p(), q = field.q(), m = field.m(), n = field.units();
  const std::uint64_t width = p == 2 ? 1 : p;
  if (width * q > kMaxTableEntries)
    throw Error(Errc::FieldTooLarge, "spectrum table would need " + std::to_string(width * q) + " entries");

  WeilTable t;
  t.field_ = &field;
  t.s_ = s;
  t.p_ = p;
  t.q_ = q;
  t.data_.assign(width * q, 0);
  const auto F = trace_of_power(field, s, coeff);

  if (algo == Algorithm::Naive) {
    const auto T = field.trace_log_table();
    std::vector<std::uint32_t> T2(2 * std::size_t(n));
    for (std::uint32_t k = 0; k < 2 * n; ++k) T2[k] = T[k % n];
    std::vector<std::int64_t> counts(p);
    for (Elem a = 0; a < q; ++a) {
      std::fill(counts.begin(), counts.end(), 0);
      counts[0] += 1;  // x = 0
      if (a == 0) {
        for (std::uint32_t k = 0; k < n; ++k) counts[F[k]]++;
      } else {
        const std::uint32_t* tt = T2.data() + (a - 1);
        for (std::uint32_t k = 0; k < n; ++k) {
          std::uint32_t idx = F[k] + p - tt[k];
          if (idx >= p) idx -= p;
          counts[idx]++;
        }
      }
      if (p == 2) {
        t.data_[a] = static_cast<std::int32_t>(counts[0] - counts[1]);
      } else {
        for (std::uint32_t j = 0; j < p; ++j) t.data_[std::size_t(a) * p + j] = static_cast<std::int32_t>(counts[j]);
      }
    }
    return t;
  }

  // Fast path: exact size-p transform along each coordinate of F_p^m.
  const auto& kern = kernels::active();
  const auto chars = character_elements(field);
  std::vector<std::uint32_t> tr(q);
  tr[0] = 0;
  for (std::uint32_t code = 1; code < q; ++code) tr[code] = F[field.log(code)];

  if (p == 2) {
    std::vector<std::int32_t> v(q);
    for (std::uint32_t x = 0; x < q; ++x) v[x] = 1 - 2 * static_cast<std::int32_t>(tr[x]);
    kern.wht_i32(v.data(), q);
    for (std::uint32_t c = 0; c < q; ++c) t.data_[chars[c]] = v[c];
    return t;
  }

  // Plane-major buffers: buf[c * q + x] counts the trace value c at x.
  std::vector<std::int32_t> cur(std::size_t(p) * q, 0), nxt;
  // First axis: every input row is a unit vector, so scatter directly.
  for (std::uint32_t base = 0; base < q; base += p) {
    for (std::uint32_t j = 0; j < p; ++j) {
      const std::uint32_t tj = tr[base + j];
      std::uint32_t jk = 0;
      for (std::uint32_t k = 0; k < p; ++k) {
        std::uint32_t c = tj >= jk ? tj - jk : tj + p - jk;
        cur[std::size_t(c) * q + base + k] += 1;
        jk += j;
        if (jk >= p) jk -= p;
      }
    }
  }
  std::size_t stride = p;
  for (std::uint32_t axis = 1; axis < m; ++axis, stride *= p) {
    nxt.assign(std::size_t(p) * q, 0);
    const std::size_t block = stride * p;
    for (std::size_t base = 0; base < q; base += block)
      for (std::uint32_t k = 0; k < p; ++k)
        for (std::uint32_t j = 0; j < p; ++j)
          kern.rotate_accumulate_i32(nxt.data() + base + k * stride, cur.data() + base + j * stride, q, p,
                                     static_cast<std::uint32_t>((std::uint64_t(j) * k) % p), stride);
    cur.swap(nxt);
  }
  for (std::uint32_t c = 0; c < q; ++c) {
    std::int32_t* dst = t.data_.data() + std::size_t(chars[c]) * p;
    for (std::uint32_t j = 0; j < p; ++j) dst[j] = cur[std::size_t(j) * q + c];
  }
  return t;
}

CycInt weil_sum(const FiniteField& field, std::uint64_t s, Elem a) {
  if (s == 0) throw Error(Errc::InvalidArgument, "exponent must be positive");
  const std::uint32_t p = field.p(), n = field.units();
  std::vector<std::int64_t> counts(p, 0);
  counts[0] = 1;
  for (std::uint32_t k = 0; k < n; ++k) {
    Elem x = field.from_log(k);
    Elem fx = field.from_log((std::uint64_t(k) * (s % n)) % n);
    counts[field.trace(field.sub(fx, field.mul(a, x)))]++;
  }
  return CycInt::from_counts(p, counts);
}

std::uint64_t Spectrum::multiplicity(const CycInt& v) const {
  for (const auto& [val, mult] : reduced)
    if (val == v) return mult;
  return 0;
}

Spectrum summarize(const WeilTable& table) {
  const auto& field = table.field();
  Spectrum sp;
  sp.p = field.p();
  sp.m = field.m();
  sp.q = field.q();
  sp.field = field.descriptor();
  sp.s = table.s();
  sp.at_zero = table.value(0);
  if (sp.p == 2) {
    std::vector<std::int32_t> vals(sp.q - 1);
    for (Elem a = 1; a < sp.q; ++a) vals[a - 1] = table.raw(a)[0];
    std::sort(vals.begin(), vals.end());
    for (std::size_t i = 0; i < vals.size();) {
      std::size_t j = i;
      while (j < vals.size() && vals[j] == vals[i]) ++j;
      sp.reduced.emplace_back(CycInt::from_integer(2, vals[i]), j - i);
      i = j;
    }
    return sp;
  }
  std::unordered_map<std::string, std::pair<Elem, std::uint64_t>> seen;
  for (Elem a = 1; a < sp.q; ++a) {
    auto [it, fresh] = seen.try_emplace(canonical_key(table.raw(a)), a, 0);
    it->second.second++;
  }
  // Same order as embedding_less, with the embeddings computed once.
  struct Entry {
    CycInt value;
    std::uint64_t mult;
    std::complex<double> z;
    bool rational;
  };
  std::vector<Entry> entries;
  entries.reserve(seen.size());
  for (const auto& [key, rep] : seen) {
    CycInt v = table.value(rep.first);
    const bool rational = v.is_rational_integer();
    const auto z = v.approx_complex();
    entries.push_back({std::move(v), rep.second, z, rational});
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& x, const Entry& y) {
    if (x.rational && y.rational) return x.value.coord(0) < y.value.coord(0);
    if (x.z.real() != y.z.real()) return x.z.real() < y.z.real();
    if (x.z.imag() != y.z.imag()) return x.z.imag() < y.z.imag();
    return coords_less(x.value, y.value);
  });
  sp.reduced.reserve(entries.size());
  for (auto& e : entries) sp.reduced.emplace_back(std::move(e.value), e.mult);
  return sp;
}

Spectrum full_spectrum(const FiniteField& field, std::uint64_t s, Algorithm algo) {
  return summarize(weil_table(field, s, algo));
}

std::size_t distinct_value_count(const WeilTable& table, std::size_t limit) {
  const std::uint32_t q = table.q();
  if (table.p() == 2) {
    std::vector<std::int32_t> seen;
    for (Elem a = 1; a < q; ++a) {
      std::int32_t v = table.raw(a)[0];
      if (std::find(seen.begin(), seen.end(), v) == seen.end()) {
        seen.push_back(v);
        if (seen.size() > limit) return seen.size();
      }
    }
    return seen.size();
  }
  std::unordered_set<std::string> seen;
  for (Elem a = 1; a < q; ++a) {
    seen.insert(canonical_key(table.raw(a)));
    if (seen.size() > limit) return seen.size();
  }
  return seen.size();
}

nlohmann::json to_json(const Spectrum& spectrum) {
  nlohmann::json values = nlohmann::json::array();
  for (const auto& [v, mult] : spectrum.reduced) values.push_back({{"value", v.to_string()}, {"multiplicity", mult}});
  return {{"field", spectrum.field}, {"s", spectrum.s}, {"at_zero", spectrum.at_zero.to_string()}, {"values", values}};
}

SpectrumStats spectrum_stats(const Spectrum& spectrum) {
  if (spectrum.s == 0 || gcd_u64(spectrum.s, spectrum.q - 1) != 1)
    throw Error(Errc::NotInvertible, "exponent " + std::to_string(spectrum.s) + " is not invertible");
  SpectrumStats st;
  st.value_count = spectrum.value_count();
  st.is_singular = spectrum.contains(CycInt(spectrum.p));
  st.is_integer_valued = std::all_of(spectrum.reduced.begin(), spectrum.reduced.end(),
                                     [](const auto& e) { return e.first.is_rational_integer(); }) &&
                         spectrum.at_zero.is_rational_integer();
  st.s_mod_pminus1 = spectrum.p == 2 ? 0 : spectrum.s % (spectrum.p - 1);
  const bool congruent = spectrum.p == 2 || spectrum.s % (spectrum.p - 1) == 1 % (spectrum.p - 1);
  st.integrality_consistent = st.is_integer_valued == congruent;
  return st;
}

OrbitDecomposition galois_orbits(const Spectrum& spectrum) {
  OrbitDecomposition out;
  const std::uint32_t p = spectrum.p;
  std::unordered_map<CycInt, std::size_t, CycIntHash> index;
  for (std::size_t i = 0; i < spectrum.reduced.size(); ++i) index.emplace(spectrum.reduced[i].first, i);
  std::vector<bool> visited(spectrum.reduced.size(), false);
  const std::uint64_t g = primitive_root_mod(p);
  for (std::size_t i = 0; i < spectrum.reduced.size(); ++i) {
    if (visited[i]) continue;
    const auto& [v, mult] = spectrum.reduced[i];
    GaloisOrbit orbit{v, 0, mult};
    CycInt w = v;
    do {
      auto it = index.find(w);
      if (it == index.end() || spectrum.reduced[it->second].second != mult) {
        out.stable = false;
      } else {
        visited[it->second] = true;
      }
      ++orbit.size;
      w = p == 2 ? w : w.galois_apply(g);
    } while (!(w == v));
    out.orbits.push_back(std::move(orbit));
  }
  return out;
}

BigInt trace_of_product(const CycInt& a, const CycInt& b) {
  if (a.p() != b.p()) throw Error(Errc::CharacteristicMismatch, "trace of mixed characteristics");
  const std::uint32_t p = a.p();
  if (a.is_small() && b.is_small() && p > 2) {
    auto x = a.small_coords();
    auto y = b.small_coords();
    // Coordinates below 2^31 keep every sum inside 128 bits (p < 2^24).
    const auto narrow = [](std::int64_t v) { return v < (std::int64_t(1) << 31) && v > -(std::int64_t(1) << 31); };
    if (std::all_of(x.begin(), x.end(), narrow) && std::all_of(y.begin(), y.end(), narrow)) {
      __int128 conv0 = __int128(x[0]) * y[0], sx = 0, sy = 0;
      for (std::uint32_t i = 1; i + 1 < p; ++i) conv0 += __int128(x[i]) * y[p - i];
      for (auto c : x) sx += c;
      for (auto c : y) sy += c;
      const __int128 r = __int128(p) * conv0 - sx * sy;
      if (r == static_cast<long>(r)) return BigInt(static_cast<long>(r));
    }
  }
  auto x = a.coords();
  auto y = b.coords();
  if (p == 2) return x[0] * y[0];
  BigInt conv0 = x[0] * y[0];
  for (std::uint32_t i = 1; i + 1 < p; ++i) mpz_addmul(conv0.get_mpz_t(), x[i].get_mpz_t(), y[p - i].get_mpz_t());
  BigInt sx = 0, sy = 0;
  for (const auto& c : x) sx += c;
  for (const auto& c : y) sy += c;
  return BigInt(p) * conv0 - sx * sy;
}

CycInt power_moment_direct(const Spectrum& spectrum, unsigned k) {
  CycInt total = cyc_pow(spectrum.at_zero, k);
  for (const auto& [v, mult] : spectrum.reduced) total += cyc_pow(v, k).scaled(BigInt(static_cast<unsigned long>(mult)));
  return total;
}

CycInt power_moment(const Spectrum& spectrum, unsigned k) {
  if (spectrum.s == 0 || gcd_u64(spectrum.s, spectrum.q - 1) != 1)
    throw Error(Errc::NotInvertible, "exponent " + std::to_string(spectrum.s) + " is not invertible");
  if (spectrum.p == 2 || k == 0) return power_moment_direct(spectrum, k);
  return power_moment(spectrum, k, galois_orbits(spectrum));
}

CycInt power_moment(const Spectrum& spectrum, unsigned k, const OrbitDecomposition& dec) {
  if (spectrum.s == 0 || gcd_u64(spectrum.s, spectrum.q - 1) != 1)
    throw Error(Errc::NotInvertible, "exponent " + std::to_string(spectrum.s) + " is not invertible");
  const std::uint32_t p = spectrum.p;
  if (p == 2 || k == 0) return power_moment_direct(spectrum, k);
  if (!dec.stable || !spectrum.at_zero.is_rational_integer()) return power_moment_direct(spectrum, k);
  BigInt total = 0;
  for (const auto& orb : dec.orbits) {
    const unsigned h = k / 2;
    BigInt tr;
    if (h == 0) {
      tr = trace_of_product(orb.representative, CycInt::from_integer(p, 1));
    } else {
      const CycInt lo = cyc_pow(orb.representative, h);
      tr = trace_of_product(lo, k - h == h ? lo : cyc_pow(orb.representative, k - h));
    }
    // Sum over the orbit = trace * |orbit| / (p - 1), exact.
    BigInt part = tr * BigInt(static_cast<unsigned long>(orb.size));
    mpz_divexact_ui(part.get_mpz_t(), part.get_mpz_t(), p - 1);
    total += part * BigInt(static_cast<unsigned long>(orb.multiplicity));
  }
  total += cyc_pow(spectrum.at_zero, k).to_integer();
  return CycInt::from_integer(p, total);
}

bool verify_scaling_law(const FiniteField& field, std::uint64_t s, Elem b) {
  require_invertible(field, s);
  if (b == 0) throw Error(Errc::ZeroScalar, "scaling by zero");
  const std::uint32_t n = field.units();
  const std::uint64_t inv_s = *inverse_mod(s % n, n);
  const Elem shift = field.inv(field.pow(b, inv_s));
  auto tf = weil_table(field, s);
  auto tb = weil_table(field, s, Algorithm::Fast, b);
  for (Elem a = 0; a < field.q(); ++a)
    if (!(tb.value(a) == tf.value(field.mul(a, shift)))) return false;
  return true;
}

bool verify_galois_law(const FiniteField& field, std::uint64_t s, std::uint64_t r) {
  require_invertible(field, s);
  if (r % field.p() == 0) throw Error(Errc::NonUnit, "r must be a unit mod p");
  const std::uint32_t n = field.units();
  const std::uint64_t inv_s = *inverse_mod(s % n, n);
  const std::uint64_t e = (1 + n - inv_s % n) % n;
  const Elem shift = field.pow(field.from_int(static_cast<std::int64_t>(r % field.p())), e);
  auto t = weil_table(field, s);
  for (Elem a = 0; a < field.q(); ++a)
    if (!(t.value(a).galois_apply(r) == t.value(field.mul(a, shift)))) return false;
  return true;
}

namespace {

// Counts form of f^[n]: result[code][j] = #{(x_1..x_n): sum x = code,
// Tr(sum f(x_i)) = j}.
template <typename T>
std::vector<std::vector<T>> convolution_counts(const FiniteField& field, const std::vector<std::uint32_t>& tr,
                                               unsigned n) {
  const std::uint32_t p = field.p(), q = field.q();
  std::vector<std::vector<T>> cur(q, std::vector<T>(p, T(0)));
  cur[0][0] = T(1);
  for (unsigned step = 0; step < n; ++step) {
    std::vector<std::vector<T>> nxt(q, std::vector<T>(p, T(0)));
    for (std::uint32_t y = 0; y < q; ++y) {
      const auto& src = cur[y];
      bool empty = std::all_of(src.begin(), src.end(), [](const T& v) { return v == T(0); });
      if (empty) continue;
      for (std::uint32_t x = 0; x < q; ++x) {
        auto& dst = nxt[field.code_add(y, x)];
        const std::uint32_t t = tr[x];
        for (std::uint32_t j = 0; j < p; ++j) {
          std::uint32_t k = j + t;
          if (k >= p) k -= p;
          dst[k] += src[j];
        }
      }
    }
    cur.swap(nxt);
  }
  return cur;
}

std::vector<std::uint32_t> trace_by_code(const FiniteField& field, std::uint64_t s) {
  auto F = trace_of_power(field, s, 1);
  std::vector<std::uint32_t> tr(field.q(), 0);
  for (std::uint32_t code = 1; code < field.q(); ++code) tr[code] = F[field.log(code)];
  return tr;
}

}  // namespace

std::vector<CycInt> convolution_power(const FiniteField& field, std::uint64_t s, unsigned n) {
  const std::uint32_t p = field.p(), q = field.q();
  const auto tr = trace_by_code(field, s);
  std::vector<CycInt> out(q, CycInt(p));
  // Counts are bounded by q^(n-1).
  const double bits = n == 0 ? 1 : (n - 1) * std::log2(double(q)) + 1;
  if (bits < 62) {
    auto counts = convolution_counts<std::int64_t>(field, tr, n);
    for (std::uint32_t code = 0; code < q; ++code) out[field.from_code(code)] = CycInt::from_counts(p, counts[code]);
  } else {
    auto counts = convolution_counts<BigInt>(field, tr, n);
    for (std::uint32_t code = 0; code < q; ++code) {
      auto& c = counts[code];
      std::vector<BigInt> coords(CycInt::dim(p));
      if (p == 2) {
        coords[0] = c[0] - c[1];
      } else {
        for (std::uint32_t j = 0; j + 1 < p; ++j) coords[j] = c[j] - c[p - 1];
      }
      out[field.from_code(code)] = CycInt::from_coords(p, std::move(coords));
    }
  }
  return out;
}

namespace {

// Coefficients sigma_0..sigma_r of prod (T - A_i) = sum sigma_i T^(r-i).
std::vector<CycInt> signed_symmetric(std::uint32_t p, const std::vector<CycInt>& values) {
  std::vector<CycInt> sigma{CycInt::from_integer(p, 1)};
  for (const auto& a : values) {
    std::vector<CycInt> next(sigma.size() + 1, CycInt(p));
    for (std::size_t i = 0; i < sigma.size(); ++i) {
      next[i] += sigma[i];
      next[i + 1] -= sigma[i] * a;
    }
    sigma.swap(next);
  }
  return sigma;
}

CycInt character_sum(const FiniteField& field, const std::vector<Elem>& set, Elem z) {
  std::vector<std::int64_t> counts(field.p(), 0);
  for (Elem c : set) counts[field.trace(field.mul(c, z))]++;
  return CycInt::from_counts(field.p(), counts);
}

}  // namespace

AnnihilatorReport annihilating_identity(const FiniteField& field, std::uint64_t s) {
  require_invertible(field, s);
  const std::uint32_t p = field.p(), q = field.q();
  auto table = weil_table(field, s);
  auto sp = summarize(table);
  AnnihilatorReport rep;
  std::vector<CycInt> all, nonzero;
  for (const auto& [v, mult] : sp.reduced) {
    all.push_back(v);
    if (!v.is_zero()) nonzero.push_back(v);
  }
  rep.r = all.size();
  rep.nonzero_values = nonzero.size();
  const auto sigma = signed_symmetric(p, all);
  const auto sigma_nz = signed_symmetric(p, nonzero);
  const CycInt qq = CycInt::from_integer(p, static_cast<std::int64_t>(q));
  const CycInt& sigma_r = sigma.back();

  // P(W(a)) = sigma_r delta_0(a): evaluate at W(0) and at each distinct value.
  auto horner = [&](const std::vector<CycInt>& coeffs, const CycInt& x) {
    CycInt acc(p);
    for (const auto& c : coeffs) acc = acc * x + c;
    return acc;
  };
  rep.spectral_identity = horner(sigma, sp.at_zero) == sigma_r;
  for (const auto& v : all) rep.spectral_identity &= horner(sigma, v).is_zero();

  std::vector<std::vector<CycInt>> powers;
  powers.reserve(rep.r + 1);
  for (unsigned n = 0; n <= rep.r; ++n) powers.push_back(convolution_power(field, s, n));

  rep.convolution_identity = true;
  for (Elem z = 0; z < q && rep.convolution_identity; ++z) {
    CycInt acc(p);
    for (std::size_t i = 0; i <= rep.r; ++i) acc += sigma[i] * powers[rep.r - i][z];
    rep.convolution_identity = acc * qq == sigma_r;
  }
  rep.q_divides_sigma_r = sigma_r.divisible_by(BigInt(q));

  // q K(z) = sigma'_n sum_{c in Z} mu(cz), Z the zeros of W on L.
  std::vector<Elem> zeros;
  for (Elem a = 0; a < q; ++a)
    if (table.is_zero(a)) zeros.push_back(a);
  const std::size_t nn = rep.nonzero_values;
  rep.kernel_expansion = true;
  for (Elem z = 0; z < q && rep.kernel_expansion; ++z) {
    CycInt k(p);
    for (std::size_t i = 0; i <= nn; ++i) k += sigma_nz[nn - i] * powers[i][z];
    rep.kernel_expansion = k * qq == sigma_nz.back() * character_sum(field, zeros, z);
  }
  rep.prod_nonzero = CycInt::from_integer(p, 1);
  for (const auto& v : nonzero) rep.prod_nonzero *= v;
  rep.q_divides_prod_nonzero = rep.prod_nonzero.divisible_by(BigInt(q));
  return rep;
}

bool verify_annihilating_identity(const FiniteField& field, std::uint64_t s) {
  return annihilating_identity(field, s).ok();
}

bool determinant_match(std::complex<double> lhs, std::complex<double> rhs, double scale) {
  const double tiny = 1e-9 * scale;
  if (std::abs(lhs) <= tiny && std::abs(rhs) <= tiny) return true;
  return std::abs(lhs - rhs) <= 1e-6 * std::max(std::abs(lhs), std::abs(rhs));
}

DeterminantReport determinant_identities(const FiniteField& field, std::uint64_t s) {
  const std::uint32_t p = field.p(), q = field.q();
  if (q > 32) throw Error(Errc::FieldTooLarge, "determinant identities are limited to q <= 32");
  auto table = weil_table(field, s);
  const auto tr = trace_by_code(field, s);
  std::vector<std::complex<double>> mu(p);
  for (std::uint32_t j = 0; j < p; ++j) mu[j] = std::polar(1.0, 2.0 * std::numbers::pi * j / p);

  Eigen::MatrixXcd m1(q, q), m2(q, q);
  for (std::uint32_t x = 0; x < q; ++x)
    for (std::uint32_t y = 0; y < q; ++y) {
      auto v = mu[tr[field.code_sub(x, y)]];
      m1(x, y) = v;
      m2(x, y) = v - 1.0;
    }
  auto hadamard = [](const Eigen::MatrixXcd& mat) {
    double b = 1;
    for (Eigen::Index i = 0; i < mat.rows(); ++i) b *= mat.row(i).norm();
    return b;
  };

  DeterminantReport rep;
  CycInt all = table.value(0);
  rep.d_exact = CycInt::from_integer(p, 1);
  for (Elem a = 1; a < q; ++a) rep.d_exact *= table.value(a);
  all *= rep.d_exact;
  const CycInt shifted = (table.value(0) - CycInt::from_integer(p, static_cast<std::int64_t>(q))) * rep.d_exact;

  auto finish = [](DeterminantCheck& chk, const CycInt& exact, std::complex<double> det, double scale) {
    chk.lhs = exact.approx_complex();
    chk.rhs = det;
    chk.scale = scale;
    const double tiny = 1e-9 * scale;
    // The exact side decides whether this is a zero comparison.
    if (exact.is_zero())
      chk.match = std::abs(det) <= tiny;
    else
      chk.match = std::abs(chk.lhs - det) <= 1e-6 * std::max(std::abs(chk.lhs), std::abs(det));
  };
  finish(rep.eigen_product, all, m1.partialPivLu().determinant(), hadamard(m1));
  finish(rep.shifted, shifted, m2.partialPivLu().determinant(), hadamard(m2));
  return rep;
}

bool verify_poisson(const FiniteField& field, std::uint64_t s, std::span<const Elem> basis) {
  const std::uint32_t p = field.p(), q = field.q();
  // Span of the basis, as codes.
  std::vector<std::uint32_t> span_codes{0};
  for (Elem b : basis) {
    const std::uint32_t bc = field.to_code(b);
    std::vector<std::uint32_t> grown;
    for (auto c : span_codes) {
      std::uint32_t cur = c;
      for (std::uint32_t k = 0; k < p; ++k) {
        grown.push_back(cur);
        cur = field.code_add(cur, bc);
      }
    }
    std::sort(grown.begin(), grown.end());
    grown.erase(std::unique(grown.begin(), grown.end()), grown.end());
    span_codes.swap(grown);
  }
  const std::uint64_t size_s = span_codes.size();
  std::vector<Elem> perp;
  for (Elem a = 0; a < q; ++a) {
    bool orth = true;
    for (Elem b : basis) orth &= field.trace(field.mul(a, b)) == 0;
    if (orth) perp.push_back(a);
  }
  auto table = weil_table(field, s);
  const auto tr = trace_by_code(field, s);
  for (std::uint32_t xc = 0; xc < q; ++xc) {
    const Elem x = field.from_code(xc);
    std::vector<std::int64_t> lhs(p, 0), rhs(p, 0);
    for (Elem a : perp) {
      const std::uint32_t j = field.trace(field.mul(a, x));
      auto r = table.raw(a);
      if (p == 2) {
        lhs[j] += r[0];
      } else {
        for (std::uint32_t c = 0; c < p; ++c) lhs[(c + j) % p] += r[c];
      }
    }
    for (auto t : span_codes) rhs[tr[field.code_add(xc, t)]] += static_cast<std::int64_t>(q / size_s);
    if (!(CycInt::from_counts(p, lhs) == CycInt::from_counts(p, rhs))) return false;
  }
  return true;
}

namespace {

std::uint64_t p_adic(const BigInt& v, std::uint32_t p, BigInt* unit) {
  BigInt u = v;
  std::uint64_t e = 0;
  if (u != 0) e = mpz_remove(u.get_mpz_t(), u.get_mpz_t(), BigInt(p).get_mpz_t());
  if (unit) *unit = u;
  return e;
}

bool divides(const BigInt& d, const BigInt& n) { return d != 0 && mpz_divisible_p(n.get_mpz_t(), d.get_mpz_t()); }

BigInt gcd_big(const BigInt& a, const BigInt& b) {
  BigInt g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

}  // namespace

std::optional<ThreeValuedReport> three_valued_report(const Spectrum& sp) {
  if (sp.s == 0 || gcd_u64(sp.s, sp.q - 1) != 1)
    throw Error(Errc::NotInvertible, "exponent " + std::to_string(sp.s) + " is not invertible");
  if (sp.reduced.size() != 3) return std::nullopt;
  ThreeValuedReport r;
  const std::uint32_t p = sp.p;
  const bool congruent = p == 2 || sp.s % (p - 1) == 1;
  if (!congruent) r.violations.push_back("s is not 1 mod p-1");
  bool integral = true;
  for (const auto& [v, mult] : sp.reduced) integral &= v.is_rational_integer();
  if (!integral) {
    r.violations.push_back("values are not rational integers");
    return r;
  }
  std::vector<std::pair<BigInt, std::uint64_t>> nonzero;
  for (const auto& [v, mult] : sp.reduced) {
    BigInt x = v.to_integer();
    if (x == 0)
      r.N_0 = mult;
    else
      nonzero.emplace_back(x, mult);
  }
  if (nonzero.size() != 2) {
    r.violations.push_back("0 is not in the reduced spectrum");
    return r;
  }
  std::sort(nonzero.begin(), nonzero.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
  r.A = nonzero[0].first;
  r.N_A = nonzero[0].second;
  r.B = nonzero[1].first;
  r.N_B = nonzero[1].second;
  const BigInt Q(sp.q);
  const BigInt NA(static_cast<unsigned long>(r.N_A)), NB(static_cast<unsigned long>(r.N_B));
  r.a = p_adic(r.A, p, &r.alpha);
  r.b = p_adic(r.B, p, &r.beta);
  r.c = p_adic(r.A - r.B, p, &r.gamma);
  if (divides(Q, r.A * r.B))
    r.V = r.A + r.B - r.A * r.B / Q;
  else
    r.violations.push_back("q does not divide AB");
  if (NA * r.A + NB * r.B != Q) r.violations.push_back("first moment");
  if (NA * r.A * r.A + NB * r.B * r.B != Q * Q) r.violations.push_back("second moment");
  if (Q * (Q - r.B) != NA * r.A * (r.A - r.B)) r.violations.push_back("N_A formula");
  if (Q * (Q - r.A) != NB * r.B * (r.B - r.A)) r.violations.push_back("N_B formula");
  if (abs(gcd_big(r.alpha, r.beta)) != 1 || abs(gcd_big(r.alpha, r.gamma)) != 1 || abs(gcd_big(r.beta, r.gamma)) != 1)
    r.violations.push_back("alpha, beta, gamma not pairwise coprime");
  if (!divides(r.alpha * r.gamma, Q - r.B)) r.violations.push_back("alpha*gamma does not divide q-B");
  if (!divides(r.beta * r.gamma, Q - r.A)) r.violations.push_back("beta*gamma does not divide q-A");
  return r;
}

std::optional<ThreeValuedReport> three_valued_report(const FiniteField& field, std::uint64_t s) {
  require_invertible(field, s);
  auto table = weil_table(field, s);
  if (distinct_value_count(table, 3) != 3) return std::nullopt;
  return three_valued_report(summarize(table));
}

nlohmann::json to_json(const ThreeValuedReport& r) {
  return {{"A", r.A.get_str()},         {"B", r.B.get_str()},         {"N_A", r.N_A},
          {"N_B", r.N_B},               {"N_0", r.N_0},               {"a", r.a},
          {"b", r.b},                   {"c", r.c},                   {"alpha", r.alpha.get_str()},
          {"beta", r.beta.get_str()},   {"gamma", r.gamma.get_str()}, {"V", r.V.get_str()},
          {"violations", r.violations}};
}

namespace {

Finding conjecture_check(const FiniteField& field, const WeilTable& table, const char* name, auto&& accept) {
  Finding f;
  f.check = name;
  f.field = field.descriptor();
  f.s = table.s();
  const std::uint32_t p = field.p();
  if (field.q() <= 2 || gcd_u64(table.s(), field.units()) != 1 || (p > 2 && table.s() % (p - 1) != 1)) {
    f.kind = FindingKind::Skipped;
    f.payload["reason"] = "requires q > 2, invertible s, s = 1 mod p-1";
    return f;
  }
  for (Elem a = 1; a < field.q(); ++a) {
    if (accept(a)) {
      f.kind = FindingKind::Witness;
      f.payload["a"] = a;
      f.payload["a_code"] = field.to_code(a);
      f.payload["value"] = table.value(a).to_string();
      return f;
    }
  }
  f.kind = FindingKind::Counterexample;
  f.payload["spectrum"] = to_json(summarize(table));
  return f;
}

}  // namespace

Finding check_vanishing(const FiniteField& field, const WeilTable& table) {
  return conjecture_check(field, table, "vanishing", [&](Elem a) { return table.is_zero(a); });
}

Finding check_vanishing(const FiniteField& field, std::uint64_t s) {
  return check_vanishing(field, weil_table(field, s));
}

Finding check_mod3(const FiniteField& field, const WeilTable& table) {
  return conjecture_check(field, table, "mod3", [&](Elem a) { return table.value(a).divisible_by(BigInt(3)); });
}

Finding check_mod3(const FiniteField& field, std::uint64_t s) { return check_mod3(field, weil_table(field, s)); }

}  // namespace weilscope
