#include "kernels_detail.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

// AVX2 backend. Vector lane j accumulates exactly the indices i = 4k + j,
// matching the scalar reference's striping, and the lane combine is the same
// (s0+s2)+(s1+s3); explicit mul/add intrinsics keep FMA contraction out, so
// results are bit-identical to the scalar backend.

namespace geomineq::kernels::detail {

void axpby_avx2(double a, const double* x, double b, const double* y,
                double* out, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    const __m256d vb = _mm256_set1_pd(b);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vx = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
        __m256d vy = _mm256_mul_pd(vb, _mm256_loadu_pd(y + i));
        _mm256_storeu_pd(out + i, _mm256_add_pd(vx, vy));
    }
    for (; i < n; ++i) out[i] = (a * x[i]) + (b * y[i]);
}

namespace {

inline double combine_lanes(__m256d acc, const double* w, const double* v,
                            std::size_t tail_start, std::size_t n) {
    alignas(32) double lane[4];
    _mm256_store_pd(lane, acc);
    for (std::size_t i = tail_start; i < n; ++i)
        lane[i & 3] += (w ? w[i] * v[i] : v[i]);
    return (lane[0] + lane[2]) + (lane[1] + lane[3]);
}

} // namespace

double dot_avx2(const double* w, const double* v, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d p = _mm256_mul_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(v + i));
        acc = _mm256_add_pd(acc, p);
    }
    return combine_lanes(acc, w, v, i, n);
}

double sum_avx2(const double* v, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(v + i));
    return combine_lanes(acc, nullptr, v, i, n);
}

void or_words_avx2(std::uint64_t* dst, const std::uint64_t* src, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256i d = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(dst + i));
        __m256i s = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i),
                            _mm256_or_si256(d, s));
    }
    for (; i < n; ++i) dst[i] |= src[i];
}

void or_shifted_bits_avx2(std::uint64_t* dst, const std::uint64_t* src,
                          std::size_t n, std::size_t shift_bits) {
    const std::size_t q = shift_bits / 64;
    const std::size_t r = shift_bits % 64;
    if (q >= n) return;
    if (r == 0) {
        std::size_t i = q;
        for (; i + 4 <= n; i += 4) {
            __m256i d = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(dst + i));
            __m256i s =
                _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i - q));
            _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i),
                                _mm256_or_si256(d, s));
        }
        for (; i < n; ++i) dst[i] |= src[i - q];
        return;
    }
    // dst[i] |= (src[i-q] << r) | (src[i-q-1] >> (64-r)); the i == q edge word
    // is handled scalar so the vector body always has a predecessor to load.
    dst[q] |= src[0] << r;
    std::size_t i = q + 1;
    const __m256i vr = _mm256_set1_epi64x(static_cast<long long>(r));
    const __m256i vl = _mm256_set1_epi64x(static_cast<long long>(64 - r));
    for (; i + 4 <= n; i += 4) {
        __m256i hi = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i - q));
        __m256i lo =
            _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i - q - 1));
        __m256i w = _mm256_or_si256(_mm256_sllv_epi64(hi, vr),
                                    _mm256_srlv_epi64(lo, vl));
        __m256i d = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(dst + i));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i),
                            _mm256_or_si256(d, w));
    }
    for (; i < n; ++i)
        dst[i] |= (src[i - q] << r) | (src[i - q - 1] >> (64 - r));
}

} // namespace geomineq::kernels::detail

#endif // x86_64
