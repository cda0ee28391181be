#include <atomic>
#include <cstdlib>
#include <string>

#include "lrs/errors.hpp"
#include "lrs/kernels.hpp"

namespace lrs::kernels {
namespace {

std::atomic<const KernelTable*> g_active{nullptr};

const KernelTable* detect() {
  if (const char* env = std::getenv("LRS_SIMD"); env && *env) {
    const Isa want = parse_isa(env);
    if (isa_supported(want)) return want == Isa::Avx2 ? &avx2_table() : &scalar_table();
    return &scalar_table();
  }
  return isa_supported(Isa::Avx2) ? &avx2_table() : &scalar_table();
}

}  // namespace

bool isa_supported(Isa isa) {
  if (isa == Isa::Scalar) return true;
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
  static const bool avx2 = __builtin_cpu_supports("avx2");
  return avx2;
#else
  return false;
#endif
}

const KernelTable& active() {
  const KernelTable* t = g_active.load(std::memory_order_acquire);
  if (!t) {
    t = detect();
    g_active.store(t, std::memory_order_release);
  }
  return *t;
}

void set_isa(Isa isa) {
  if (!isa_supported(isa)) throw DomainError(std::string("instruction set not supported: ") + isa_name(isa));
  g_active.store(isa == Isa::Avx2 ? &avx2_table() : &scalar_table(), std::memory_order_release);
}

Isa parse_isa(const std::string& name) {
  if (name == "scalar") return Isa::Scalar;
  if (name == "avx2") return Isa::Avx2;
  throw DomainError("unknown SIMD selection '" + name + "' (expected scalar or avx2)");
}

const char* isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

}  // namespace lrs::kernels
