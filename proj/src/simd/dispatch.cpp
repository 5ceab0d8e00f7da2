#include <cstdlib>
#include <string_view>

#include "modwave/simd/kernels.hpp"

namespace modwave::simd {

namespace detail {
#if defined(MODWAVE_HAVE_AVX2)
const KernelTable& avx2_table_unchecked() noexcept;
#endif
#if defined(MODWAVE_HAVE_NEON)
const KernelTable& neon_table_unchecked() noexcept;
#endif
}  // namespace detail

const KernelTable* avx2_kernels() noexcept {
#if defined(MODWAVE_HAVE_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? &detail::avx2_table_unchecked() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable* neon_kernels() noexcept {
#if defined(MODWAVE_HAVE_NEON)
  return &detail::neon_table_unchecked();
#else
  return nullptr;
#endif
}

namespace {

const KernelTable& select() noexcept {
  if (const char* env = std::getenv("MODWAVE_SIMD"); env != nullptr && std::string_view(env) == "scalar")
    return scalar_kernels();
  if (const auto* t = avx2_kernels()) return *t;
  if (const auto* t = neon_kernels()) return *t;
  return scalar_kernels();
}

}  // namespace

const KernelTable& active() noexcept {
  static const KernelTable& table = select();
  return table;
}

std::size_t available(const KernelTable** out, std::size_t capacity) noexcept {
  std::size_t n = 0;
  auto push = [&](const KernelTable* t) {
    if (t != nullptr && n < capacity) out[n++] = t;
  };
  push(&scalar_kernels());
  push(avx2_kernels());
  push(neon_kernels());
  return n;
}

}  // namespace modwave::simd
