#include "weilscope/kernels.hpp"

namespace weilscope::kernels {

namespace {

void wht_scalar(std::int32_t* data, std::size_t n) {
  for (std::size_t h = 1; h < n; h <<= 1)
    for (std::size_t i = 0; i < n; i += 2 * h)
      for (std::size_t j = i; j < i + h; ++j) {
        std::int32_t a = data[j], b = data[j + h];
        data[j] = a + b;
        data[j + h] = a - b;
      }
}

void rotate_accumulate_scalar(std::int32_t* out, const std::int32_t* in, std::size_t stride, std::uint32_t p,
                              std::uint32_t shift, std::size_t len) {
  for (std::uint32_t c = 0; c < p; ++c) {
    std::uint32_t src = c + shift;
    if (src >= p) src -= p;
    std::int32_t* o = out + c * stride;
    const std::int32_t* s = in + src * stride;
    for (std::size_t i = 0; i < len; ++i) o[i] += s[i];
  }
}

void zech_profile_scalar(const std::uint32_t* zech, const std::uint32_t* ratio, std::uint32_t n, std::uint32_t s,
                         std::uint32_t begin, std::uint32_t end, std::uint32_t* out) {
  std::uint64_t ks = (std::uint64_t(begin) * s) % n;
  for (std::uint32_t k = begin; k < end; ++k) {
    std::uint32_t u = static_cast<std::uint32_t>((std::uint64_t(s) * ratio[k]) % n);
    std::uint32_t z = zech[u];
    if (z == 0xFFFFFFFFu) {
      out[k - begin] = z;
    } else {
      std::uint64_t l = ks + z;
      out[k - begin] = static_cast<std::uint32_t>(l >= n ? l - n : l);
    }
    ks += s;
    if (ks >= n) ks -= n;
  }
}

const KernelTable kScalar{Isa::Scalar, wht_scalar, rotate_accumulate_scalar, zech_profile_scalar};

}  // namespace

const KernelTable& scalar_kernels() noexcept { return kScalar; }

}  // namespace weilscope::kernels
