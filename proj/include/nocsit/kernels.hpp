#pragma once

// Dense double-precision kernels behind the simplex pivot and batched
// inequality evaluation. Every kernel has a portable scalar reference and,
// where the build and CPU allow it, an AVX2 variant chosen at runtime.
//
// axpy and scale are bit-identical across variants (no FMA contraction on
// either side). dot changes summation order and so agrees only to rounding.

#include <cstddef>
#include <span>
#include <string_view>

namespace nocsit::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa);

/// Best ISA supported by both the build and the running CPU.
Isa detected_isa();

/// ISA currently used by the dispatching entry points. Defaults to
/// detected_isa() unless NOCSIT_ISA=scalar is set in the environment.
Isa active_isa();

/// Pins dispatch to `isa`; falls back to Scalar if `isa` is unavailable.
/// Returns the ISA actually selected.
Isa set_active_isa(Isa isa);

// y += a * x
void axpy(double a, std::span<const double> x, std::span<double> y);
// x *= a
void scale(double a, std::span<double> x);
double dot(std::span<const double> x, std::span<const double> y);

namespace scalar {
void axpy(double a, const double* x, double* y, std::size_t n);
void scale(double a, double* x, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
} // namespace scalar

namespace avx2 {
// Only callable when detected_isa() == Isa::Avx2.
void axpy(double a, const double* x, double* y, std::size_t n);
void scale(double a, double* x, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
} // namespace avx2

} // namespace nocsit::kernels
