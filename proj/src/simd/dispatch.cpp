#include "pcakit/simd/kernels.hpp"

#include <cstdlib>
#include <string>

namespace pcakit::simd {

namespace {

constexpr KernelTable kScalar{Isa::scalar, &scalar::dot, &scalar::squared_distance, &scalar::sum};
#if defined(__x86_64__) || defined(_M_X64)
constexpr KernelTable kAvx2{Isa::avx2, &avx2::dot, &avx2::squared_distance, &avx2::sum};
#endif
#if defined(__aarch64__)
constexpr KernelTable kNeon{Isa::neon, &neon::dot, &neon::squared_distance, &neon::sum};
#endif

const KernelTable& select_active() {
  if (const char* env = std::getenv("PCAKIT_SIMD")) {
    const std::string name(env);
    for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
      if (name == to_string(isa) && supported(isa)) return table(isa);
    }
  }
  if (supported(Isa::avx2)) return table(Isa::avx2);
  if (supported(Isa::neon)) return table(Isa::neon);
  return kScalar;
}

}  // namespace

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "scalar";
}

bool supported(Isa isa) {
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2:
#if (defined(__x86_64__) || defined(_M_X64)) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::neon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& table(Isa isa) {
  if (!supported(isa)) return kScalar;
  switch (isa) {
#if defined(__x86_64__) || defined(_M_X64)
    case Isa::avx2: return kAvx2;
#endif
#if defined(__aarch64__)
    case Isa::neon: return kNeon;
#endif
    default: return kScalar;
  }
}

const KernelTable& active() {
  static const KernelTable& selected = select_active();
  return selected;
}

}  // namespace pcakit::simd
