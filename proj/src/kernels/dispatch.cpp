#include "nocsit/kernels.hpp"

#include <atomic>
#include <cassert>
#include <cstdlib>
#include <cstring>

namespace nocsit::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(NOCSIT_BUILD_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

Isa initial_isa() {
    const char* env = std::getenv("NOCSIT_ISA");
    if (env != nullptr && std::strcmp(env, "scalar") == 0) {
        return Isa::Scalar;
    }
    return detected_isa();
}

std::atomic<Isa>& current() {
    static std::atomic<Isa> isa{initial_isa()};
    return isa;
}

} // namespace

#if !defined(NOCSIT_BUILD_AVX2)
// Unreachable stubs: dispatch never selects Avx2 when it was not compiled in.
namespace avx2 {
void axpy(double a, const double* x, double* y, std::size_t n) { scalar::axpy(a, x, y, n); }
void scale(double a, double* x, std::size_t n) { scalar::scale(a, x, n); }
double dot(const double* x, const double* y, std::size_t n) { return scalar::dot(x, y, n); }
} // namespace avx2
#endif

std::string_view isa_name(Isa isa) {
    switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    }
    return "unknown";
}

Isa detected_isa() {
    static const bool avx2 = cpu_has_avx2();
    return avx2 ? Isa::Avx2 : Isa::Scalar;
}

Isa active_isa() {
    return current().load(std::memory_order_relaxed);
}

Isa set_active_isa(Isa isa) {
    if (isa == Isa::Avx2 && detected_isa() != Isa::Avx2) {
        isa = Isa::Scalar;
    }
    current().store(isa, std::memory_order_relaxed);
    return isa;
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
    assert(x.size() == y.size());
    if (active_isa() == Isa::Avx2) {
        avx2::axpy(a, x.data(), y.data(), y.size());
    } else {
        scalar::axpy(a, x.data(), y.data(), y.size());
    }
}

void scale(double a, std::span<double> x) {
    if (active_isa() == Isa::Avx2) {
        avx2::scale(a, x.data(), x.size());
    } else {
        scalar::scale(a, x.data(), x.size());
    }
}

double dot(std::span<const double> x, std::span<const double> y) {
    assert(x.size() == y.size());
    if (active_isa() == Isa::Avx2) {
        return avx2::dot(x.data(), y.data(), x.size());
    }
    return scalar::dot(x.data(), y.data(), x.size());
}

} // namespace nocsit::kernels
