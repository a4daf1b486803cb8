#pragma once

// Arithmetic inner loops used by the ensemble, metrics and toy backend.
//
// Every kernel has a portable scalar reference and, on x86-64, an AVX2
// variant. The variant is chosen once at first use from CPUID; setting
// UATTA_SIMD=scalar in the environment forces the reference path.
//
// Elementwise kernels (axpy, scale, column_moments) keep the scalar
// operation order per lane and are bitwise identical across variants.
// Reductions (dot, sum, squared_distance) reassociate and agree with the
// reference to a few ulps.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace uatta::kernels {

enum class Isa { kScalar, kAvx2 };

std::string_view isa_name(Isa isa) noexcept;

struct KernelTable {
    double (*dot)(const double* a, const double* b, std::size_t n);
    double (*sum)(const double* x, std::size_t n);
    double (*squared_distance)(const double* a, const double* b, std::size_t n);
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
    void (*scale)(double alpha, double* x, std::size_t n);
    // rows[j * stride + c] for j < count, c < width.
    void (*column_moments)(const double* rows, std::size_t count, std::size_t stride,
                           std::size_t width, double* mean, double* var);
};

bool isa_supported(Isa isa) noexcept;
/// Throws std::invalid_argument when the ISA was not compiled in or the CPU lacks it.
const KernelTable& table(Isa isa);
std::vector<Isa> supported_isas();

Isa active_isa() noexcept;
const KernelTable& active() noexcept;

double dot(std::span<const double> a, std::span<const double> b);
double sum(std::span<const double> x);
double squared_distance(std::span<const double> a, std::span<const double> b);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void scale(double alpha, std::span<double> x);
void column_moments(std::span<const double> rows, std::size_t count, std::size_t stride,
                    std::span<double> mean, std::span<double> var);

}  // namespace uatta::kernels
