#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace weilscope::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa) noexcept;

struct KernelTable {
  Isa isa;

  // In-place unnormalized Walsh-Hadamard transform; n is a power of two.
  void (*wht_i32)(std::int32_t* data, std::size_t n);

  // For c in [0, p): out[c*stride + i] += in[((c + shift) mod p)*stride + i],
  // i in [0, len). One digit pair of the size-p character transform.
  void (*rotate_accumulate_i32)(std::int32_t* out, const std::int32_t* in, std::size_t stride,
                                std::uint32_t p, std::uint32_t shift, std::size_t len);

  // Differential profile logs for k in [begin, end):
  //   u = s * ratio[k] mod n; out[k - begin] = zech[u] == NONE ? NONE
  //                                         : (k*s + zech[u]) mod n.
  // zech has n entries and uses 0xFFFFFFFF as NONE; s < n < 2^24.
  void (*zech_profile_logs)(const std::uint32_t* zech, const std::uint32_t* ratio, std::uint32_t n,
                            std::uint32_t s, std::uint32_t begin, std::uint32_t end, std::uint32_t* out);
};

const KernelTable& scalar_kernels() noexcept;
// Null when the build has no AVX2 translation unit.
const KernelTable* avx2_kernels() noexcept;

bool isa_supported(Isa isa) noexcept;

// Best supported table, unless WEILSCOPE_ISA=scalar is set in the
// environment. Chosen once on first use.
const KernelTable& active() noexcept;

}  // namespace weilscope::kernels
