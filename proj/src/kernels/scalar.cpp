#include "variants.hpp"

namespace uatta::kernels::scalar {

double dot(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

double sum(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i];
    return acc;
}

double squared_distance(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scale(double alpha, double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

void column_moments(const double* rows, std::size_t count, std::size_t stride,
                    std::size_t width, double* mean, double* var) {
    const double k = static_cast<double>(count);
    for (std::size_t c = 0; c < width; ++c) {
        double acc = 0.0;
        for (std::size_t j = 0; j < count; ++j) acc += rows[j * stride + c];
        mean[c] = acc / k;
    }
    for (std::size_t c = 0; c < width; ++c) {
        double acc = 0.0;
        for (std::size_t j = 0; j < count; ++j) {
            const double d = rows[j * stride + c] - mean[c];
            acc += d * d;
        }
        var[c] = acc / k;
    }
}

const KernelTable kTable{&dot, &sum, &squared_distance, &axpy, &scale, &column_moments};

}  // namespace uatta::kernels::scalar
