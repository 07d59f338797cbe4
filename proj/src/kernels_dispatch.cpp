#include <cstdlib>
#include <string_view>

#include "riskmcdm/kernels.hpp"

namespace riskmcdm::kernels {

const KernelTable& active() {
  static const KernelTable& chosen = [] () -> const KernelTable& {
    const char* forced = std::getenv("RISKMCDM_KERNEL");
    if (forced != nullptr && std::string_view(forced) == "scalar") return scalar_table();
    if (const auto* t = avx2_table()) return *t;
    return scalar_table();
  }();
  return chosen;
}

}  // namespace riskmcdm::kernels
