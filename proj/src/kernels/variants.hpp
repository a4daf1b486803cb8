#pragma once

#include <cstddef>

#include "uatta/kernels.hpp"

namespace uatta::kernels {

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
double sum(const double* x, std::size_t n);
double squared_distance(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void scale(double alpha, double* x, std::size_t n);
void column_moments(const double* rows, std::size_t count, std::size_t stride,
                    std::size_t width, double* mean, double* var);
extern const KernelTable kTable;
}  // namespace scalar

#if defined(UATTA_HAVE_AVX2)
namespace avx2 {
extern const KernelTable kTable;
}  // namespace avx2
#endif

}  // namespace uatta::kernels
