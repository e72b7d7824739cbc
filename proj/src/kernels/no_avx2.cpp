#include "weilscope/kernels.hpp"

namespace weilscope::kernels {

const KernelTable* avx2_kernels() noexcept { return nullptr; }

}  // namespace weilscope::kernels
