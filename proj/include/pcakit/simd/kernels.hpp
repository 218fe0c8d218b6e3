#pragma once
// Reduction kernels used by the pairwise kernel-matrix loops.
//
// Every instruction set provides the same three entry points. The scalar
// versions are the reference; vector versions reorder the summation and are
// only required to agree with the reference up to rounding.

#include <cstddef>
#include <span>
#include <string_view>

namespace pcakit::simd {

enum class Isa { scalar, avx2, neon };

std::string_view to_string(Isa isa);

struct KernelTable {
  Isa isa;
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*squared_distance)(const double* a, const double* b, std::size_t n);
  double (*sum)(const double* a, std::size_t n);
};

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
double squared_distance(const double* a, const double* b, std::size_t n);
double sum(const double* a, std::size_t n);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
double squared_distance(const double* a, const double* b, std::size_t n);
double sum(const double* a, std::size_t n);
}  // namespace avx2
#endif

#if defined(__aarch64__)
namespace neon {
double dot(const double* a, const double* b, std::size_t n);
double squared_distance(const double* a, const double* b, std::size_t n);
double sum(const double* a, std::size_t n);
}  // namespace neon
#endif

/// True when the running CPU can execute the given variant.
bool supported(Isa isa);

/// Table for a specific variant. Requesting an unsupported variant returns
/// the scalar table.
const KernelTable& table(Isa isa);

/// Table selected once per process: the best supported variant, unless the
/// PCAKIT_SIMD environment variable names another one ("scalar", "avx2",
/// "neon").
const KernelTable& active();

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size());
}

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
  return active().squared_distance(a.data(), b.data(), a.size());
}

inline double sum(std::span<const double> a) { return active().sum(a.data(), a.size()); }

}  // namespace pcakit::simd
