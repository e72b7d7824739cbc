#include <cstdlib>
#include <string>

#include "weilscope/kernels.hpp"

namespace weilscope::kernels {

std::string_view to_string(Isa isa) noexcept { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

bool isa_supported(Isa isa) noexcept {
  if (isa == Isa::Scalar) return true;
#if defined(__x86_64__) || defined(__i386__)
  return avx2_kernels() != nullptr && __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const KernelTable& active() noexcept {
  static const KernelTable& chosen = [] () -> const KernelTable& {
    const char* env = std::getenv("WEILSCOPE_ISA");
    if (env && std::string(env) == "scalar") return scalar_kernels();
    if (isa_supported(Isa::Avx2)) return *avx2_kernels();
    return scalar_kernels();
  }();
  return chosen;
}

}  // namespace weilscope::kernels
