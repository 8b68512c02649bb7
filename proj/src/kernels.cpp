#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string_view>

#include "robustflow/kernels.hpp"

namespace robustflow::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(ROBUSTFLOW_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa initial_isa() {
  if (const char* forced = std::getenv("ROBUSTFLOW_ISA")) {
    if (std::string_view(forced) == "scalar") return Isa::scalar;
  }
  return cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

}  // namespace

const char* isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool isa_supported(Isa isa) { return isa == Isa::scalar || cpu_has_avx2(); }

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void set_isa(Isa isa) {
  if (!isa_supported(isa)) {
    throw std::runtime_error(std::string("instruction set not supported: ") + isa_name(isa));
  }
  current().store(isa, std::memory_order_relaxed);
}

#if defined(ROBUSTFLOW_HAVE_AVX2_KERNELS)
#define ROBUSTFLOW_DISPATCH(fn, ...) \
  (active_isa() == Isa::avx2 ? avx2::fn(__VA_ARGS__) : scalar::fn(__VA_ARGS__))
#else
#define ROBUSTFLOW_DISPATCH(fn, ...) scalar::fn(__VA_ARGS__)
#endif

void axpy(double a, std::span<const double> x, std::span<double> y) {
  ROBUSTFLOW_DISPATCH(axpy, a, x, y);
}

void scale(double a, std::span<double> y) { ROBUSTFLOW_DISPATCH(scale, a, y); }

double dot(std::span<const double> x, std::span<const double> y) {
  return ROBUSTFLOW_DISPATCH(dot, x, y);
}

void flush_small(double threshold, std::span<double> y) {
  ROBUSTFLOW_DISPATCH(flush_small, threshold, y);
}

#undef ROBUSTFLOW_DISPATCH

}  // namespace robustflow::kernels
