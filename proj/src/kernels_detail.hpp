#pragma once

#include <cstddef>
#include <cstdint>

// Internal: per-backend entry points. Both backends implement the same
// fixed-order algorithm; see kernels.hpp.

namespace geomineq::kernels::detail {

void axpby_scalar(double a, const double* x, double b, const double* y,
                  double* out, std::size_t n);
double dot_scalar(const double* w, const double* v, std::size_t n);
double sum_scalar(const double* v, std::size_t n);
void or_words_scalar(std::uint64_t* dst, const std::uint64_t* src, std::size_t n);
void or_shifted_bits_scalar(std::uint64_t* dst, const std::uint64_t* src,
                            std::size_t n, std::size_t shift_bits);

#if defined(__x86_64__) || defined(_M_X64)
void axpby_avx2(double a, const double* x, double b, const double* y,
                double* out, std::size_t n);
double dot_avx2(const double* w, const double* v, std::size_t n);
double sum_avx2(const double* v, std::size_t n);
void or_words_avx2(std::uint64_t* dst, const std::uint64_t* src, std::size_t n);
void or_shifted_bits_avx2(std::uint64_t* dst, const std::uint64_t* src,
                          std::size_t n, std::size_t shift_bits);
#endif

} // namespace geomineq::kernels::detail
