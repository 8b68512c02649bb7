#pragma once

// Dense double-precision vector kernels used by the float-mode simplex.
//
// Every kernel has a portable scalar reference in kernels::scalar and, on
// x86-64, an AVX2/FMA variant in kernels::avx2. The unqualified entry points
// dispatch at runtime to the best variant the CPU supports. Setting the
// environment variable ROBUSTFLOW_ISA=scalar forces the reference path.

#include <cstddef>
#include <span>

namespace robustflow::kernels {

enum class Isa { scalar, avx2 };

const char* isa_name(Isa isa);
bool isa_supported(Isa isa);
Isa active_isa();

/// Switches the dispatch target. Throws std::runtime_error if the CPU lacks
/// the instruction set.
void set_isa(Isa isa);

/// y += a * x
void axpy(double a, std::span<const double> x, std::span<double> y);
/// y *= a
void scale(double a, std::span<double> y);
double dot(std::span<const double> x, std::span<const double> y);
/// Sets entries with |y_i| <= threshold to exactly zero.
void flush_small(double threshold, std::span<double> y);

namespace scalar {
void axpy(double a, std::span<const double> x, std::span<double> y);
void scale(double a, std::span<double> y);
double dot(std::span<const double> x, std::span<const double> y);
void flush_small(double threshold, std::span<double> y);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define ROBUSTFLOW_HAVE_AVX2_KERNELS 1
namespace avx2 {
void axpy(double a, std::span<const double> x, std::span<double> y);
void scale(double a, std::span<double> y);
double dot(std::span<const double> x, std::span<const double> y);
void flush_small(double threshold, std::span<double> y);
}  // namespace avx2
#endif

}  // namespace robustflow::kernels
