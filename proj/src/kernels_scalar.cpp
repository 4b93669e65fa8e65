#include "kernels_detail.hpp"

// Reference backend. The striped four-lane accumulation is the contract:
// lane j owns indices i with i % 4 == j, lanes combine as (s0+s2)+(s1+s3).
// The AVX2 backend reproduces this order exactly.

namespace geomineq::kernels::detail {

void axpby_scalar(double a, const double* x, double b, const double* y,
                  double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = (a * x[i]) + (b * y[i]);
}

double dot_scalar(const double* w, const double* v, std::size_t n) {
    double acc[4] = {0.0, 0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) acc[i & 3] += w[i] * v[i];
    return (acc[0] + acc[2]) + (acc[1] + acc[3]);
}

double sum_scalar(const double* v, std::size_t n) {
    double acc[4] = {0.0, 0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) acc[i & 3] += v[i];
    return (acc[0] + acc[2]) + (acc[1] + acc[3]);
}

void or_words_scalar(std::uint64_t* dst, const std::uint64_t* src, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] |= src[i];
}

void or_shifted_bits_scalar(std::uint64_t* dst, const std::uint64_t* src,
                            std::size_t n, std::size_t shift_bits) {
    const std::size_t q = shift_bits / 64;
    const std::size_t r = shift_bits % 64;
    if (q >= n) return;
    if (r == 0) {
        for (std::size_t i = n; i-- > q;) dst[i] |= src[i - q];
        return;
    }
    for (std::size_t i = n; i-- > q;) {
        std::uint64_t w = src[i - q] << r;
        if (i > q) w |= src[i - q - 1] >> (64 - r);
        dst[i] |= w;
    }
}

} // namespace geomineq::kernels::detail
