#include "geomineq/kernels.hpp"

#include <stdexcept>

#include "kernels_detail.hpp"

namespace geomineq::kernels {

namespace {

struct Table {
    void (*axpby)(double, const double*, double, const double*, double*,
                  std::size_t);
    double (*dot)(const double*, const double*, std::size_t);
    double (*sum)(const double*, std::size_t);
    void (*or_words)(std::uint64_t*, const std::uint64_t*, std::size_t);
    void (*or_shifted_bits)(std::uint64_t*, const std::uint64_t*, std::size_t,
                            std::size_t);
    Backend backend;
};

constexpr Table kScalar{detail::axpby_scalar,    detail::dot_scalar,
                        detail::sum_scalar,      detail::or_words_scalar,
                        detail::or_shifted_bits_scalar, Backend::scalar};

#if defined(__x86_64__) || defined(_M_X64)
constexpr Table kAvx2{detail::axpby_avx2,    detail::dot_avx2,
                      detail::sum_avx2,      detail::or_words_avx2,
                      detail::or_shifted_bits_avx2, Backend::avx2};
#endif

Table g_table = kScalar;
bool g_initialized = false;

void init_once() {
    if (g_initialized) return;
    g_initialized = true;
#if defined(__x86_64__) || defined(_M_X64)
    if (avx2_supported()) g_table = kAvx2;
#endif
}

} // namespace

bool avx2_supported() {
#if defined(__x86_64__) || defined(_M_X64)
    return __builtin_cpu_supports("avx2") != 0;
#else
    return false;
#endif
}

Backend active_backend() {
    init_once();
    return g_table.backend;
}

void force_backend(Backend b) {
    init_once();
    if (b == Backend::scalar) {
        g_table = kScalar;
        return;
    }
#if defined(__x86_64__) || defined(_M_X64)
    if (!avx2_supported()) throw std::runtime_error("avx2 not supported here");
    g_table = kAvx2;
#else
    throw std::runtime_error("avx2 backend unavailable on this architecture");
#endif
}

void axpby(double a, const double* x, double b, const double* y, double* out,
           std::size_t n) {
    init_once();
    g_table.axpby(a, x, b, y, out, n);
}

double dot(const double* w, const double* v, std::size_t n) {
    init_once();
    return g_table.dot(w, v, n);
}

double sum(const double* v, std::size_t n) {
    init_once();
    return g_table.sum(v, n);
}

void or_words(std::uint64_t* dst, const std::uint64_t* src, std::size_t n) {
    init_once();
    g_table.or_words(dst, src, n);
}

void or_shifted_bits(std::uint64_t* dst, const std::uint64_t* src, std::size_t n,
                     std::size_t shift_bits) {
    init_once();
    g_table.or_shifted_bits(dst, src, n, shift_bits);
}

std::uint64_t popcount(const std::uint64_t* v, std::size_t n) {
    // Hardware popcnt via the builtin is already word-parallel; no wider
    // variant is worth the accumulator complexity at these block sizes.
    std::uint64_t c = 0;
    for (std::size_t i = 0; i < n; ++i) c += static_cast<std::uint64_t>(__builtin_popcountll(v[i]));
    return c;
}

} // namespace geomineq::kernels
