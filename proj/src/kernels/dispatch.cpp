#include <cstdlib>
#include <cstring>

#include "perfolab/kernels.hpp"

namespace perfolab::kernels {

namespace {

constexpr KernelTable kScalarTable{&scalar::stencil_apply, &scalar::dot, &scalar::axpy,
                                   &scalar::xpby, &scalar::scale_dot};

#if defined(PERFOLAB_HAVE_AVX2)
constexpr KernelTable kAvx2Table{&avx2::stencil_apply, &avx2::dot, &avx2::axpy, &avx2::xpby,
                                 &avx2::scale_dot};
#endif

Isa detect() {
  const char* env = std::getenv("PERFOLAB_SIMD");
  if (env != nullptr && std::strcmp(env, "scalar") == 0) return Isa::kScalar;
  if (isa_available(Isa::kAvx2)) return Isa::kAvx2;
  return Isa::kScalar;
}

}  // namespace

std::string_view isa_name(Isa isa) { return isa == Isa::kAvx2 ? "avx2" : "scalar"; }

bool isa_available(Isa isa) {
  if (isa == Isa::kScalar) return true;
#if defined(PERFOLAB_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable& table(Isa isa) {
#if defined(PERFOLAB_HAVE_AVX2)
  if (isa == Isa::kAvx2 && isa_available(Isa::kAvx2)) return kAvx2Table;
#endif
  (void)isa;
  return kScalarTable;
}

Isa active_isa() {
  static const Isa isa = detect();
  return isa;
}

const KernelTable& active() {
  static const KernelTable& t = table(active_isa());
  return t;
}

}  // namespace perfolab::kernels
