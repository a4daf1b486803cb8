// Compiled with -mavx2 -mfma -ffp-contract=off; only reached after a CPUID check.
#include <immintrin.h>

#include "variants.hpp"

namespace uatta::kernels::avx2 {
namespace {

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double dot(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    }
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

double sum(const double* x, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x + i));
    double acc = hsum(acc0);
    for (; i < n; ++i) acc += x[i];
    return acc;
}

double squared_distance(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc0 = _mm256_fmadd_pd(d, d, acc0);
    }
    double acc = hsum(acc0);
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

// No FMA below: each lane must round exactly like the scalar reference.
void axpy(double alpha, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d prod = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
        _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), prod));
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void scale(double alpha, double* x, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) _mm256_storeu_pd(x + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), va));
    for (; i < n; ++i) x[i] *= alpha;
}

void column_moments(const double* rows, std::size_t count, std::size_t stride,
                    std::size_t width, double* mean, double* var) {
    const double k = static_cast<double>(count);
    const __m256d vk = _mm256_set1_pd(k);
    std::size_t c = 0;
    for (; c + 4 <= width; c += 4) {
        __m256d acc = _mm256_setzero_pd();
        for (std::size_t j = 0; j < count; ++j) {
            acc = _mm256_add_pd(acc, _mm256_loadu_pd(rows + j * stride + c));
        }
        const __m256d m = _mm256_div_pd(acc, vk);
        _mm256_storeu_pd(mean + c, m);
        __m256d sq = _mm256_setzero_pd();
        for (std::size_t j = 0; j < count; ++j) {
            const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(rows + j * stride + c), m);
            sq = _mm256_add_pd(sq, _mm256_mul_pd(d, d));
        }
        _mm256_storeu_pd(var + c, _mm256_div_pd(sq, vk));
    }
    if (c < width) {
        scalar::column_moments(rows + c, count, stride, width - c, mean + c, var + c);
    }
}

}  // namespace

const KernelTable kTable{&dot, &sum, &squared_distance, &axpy, &scale, &column_moments};

}  // namespace uatta::kernels::avx2
