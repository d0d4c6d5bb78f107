#include "sdereg/error.hpp"
#include "sdereg/kernels.hpp"

namespace sdereg::kernels {
namespace detail {

#if !(defined(__x86_64__) || defined(_M_X64))
const KernelTable* avx2_table() { return nullptr; }
#endif
#if !(defined(__aarch64__) || defined(_M_ARM64))
const KernelTable* neon_table() { return nullptr; }
#endif

}  // namespace detail

bool supported(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(__x86_64__) || defined(_M_X64)
      return detail::avx2_table() != nullptr && __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::neon:
      return detail::neon_table() != nullptr;
  }
  return false;
}

const KernelTable& table(Isa isa) {
  if (!supported(isa))
    throw PreconditionError("instruction set '" + std::string(to_string(isa)) +
                            "' is not available on this machine");
  switch (isa) {
    case Isa::avx2: return *detail::avx2_table();
    case Isa::neon: return *detail::neon_table();
    case Isa::scalar: break;
  }
  return detail::scalar_table();
}

const KernelTable& active() {
  static const KernelTable& best = [] () -> const KernelTable& {
    if (supported(Isa::avx2)) return table(Isa::avx2);
    if (supported(Isa::neon)) return table(Isa::neon);
    return detail::scalar_table();
  }();
  return best;
}

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "scalar";
}

}  // namespace sdereg::kernels
