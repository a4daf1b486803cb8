#include <cstdlib>
#include <stdexcept>
#include <string>

#include "variants.hpp"

namespace uatta::kernels {
namespace {

bool cpu_has_avx2() noexcept {
#if defined(UATTA_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Isa select_isa() noexcept {
    if (const char* forced = std::getenv("UATTA_SIMD")) {
        if (std::string_view(forced) == "scalar") return Isa::kScalar;
    }
    return cpu_has_avx2() ? Isa::kAvx2 : Isa::kScalar;
}

void require_same_length(std::size_t a, std::size_t b, const char* what) {
    if (a != b) throw std::invalid_argument(std::string(what) + ": length mismatch");
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept {
    switch (isa) {
        case Isa::kScalar: return "scalar";
        case Isa::kAvx2: return "avx2";
    }
    return "unknown";
}

bool isa_supported(Isa isa) noexcept {
    switch (isa) {
        case Isa::kScalar: return true;
        case Isa::kAvx2: return cpu_has_avx2();
    }
    return false;
}

const KernelTable& table(Isa isa) {
    if (!isa_supported(isa)) {
        throw std::invalid_argument("kernel variant not available: " + std::string(isa_name(isa)));
    }
#if defined(UATTA_HAVE_AVX2)
    if (isa == Isa::kAvx2) return avx2::kTable;
#endif
    return scalar::kTable;
}

std::vector<Isa> supported_isas() {
    std::vector<Isa> out{Isa::kScalar};
    if (isa_supported(Isa::kAvx2)) out.push_back(Isa::kAvx2);
    return out;
}

Isa active_isa() noexcept {
    static const Isa isa = select_isa();
    return isa;
}

const KernelTable& active() noexcept {
    static const KernelTable& t = table(active_isa());
    return t;
}

double dot(std::span<const double> a, std::span<const double> b) {
    require_same_length(a.size(), b.size(), "dot");
    return active().dot(a.data(), b.data(), a.size());
}

double sum(std::span<const double> x) { return active().sum(x.data(), x.size()); }

double squared_distance(std::span<const double> a, std::span<const double> b) {
    require_same_length(a.size(), b.size(), "squared_distance");
    return active().squared_distance(a.data(), b.data(), a.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    require_same_length(x.size(), y.size(), "axpy");
    active().axpy(alpha, x.data(), y.data(), x.size());
}

void scale(double alpha, std::span<double> x) { active().scale(alpha, x.data(), x.size()); }

void column_moments(std::span<const double> rows, std::size_t count, std::size_t stride,
                    std::span<double> mean, std::span<double> var) {
    const std::size_t width = mean.size();
    require_same_length(width, var.size(), "column_moments");
    if (count == 0) throw std::invalid_argument("column_moments: no rows");
    if (width > stride || (count - 1) * stride + width > rows.size()) {
        throw std::invalid_argument("column_moments: rows out of range");
    }
    active().column_moments(rows.data(), count, stride, width, mean.data(), var.data());
}

}  // namespace uatta::kernels
