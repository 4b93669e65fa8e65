#pragma once

#include <cstddef>
#include <cstdint>

// Data-parallel inner loops shared by the quadrature and voxel layers.
// Each kernel has a scalar reference implementation and an AVX2 variant
// selected at runtime; both use the same fixed accumulation order (four
// interleaved partial sums combined as (s0+s2)+(s1+s3), no FMA contraction),
// so results are bit-identical across backends and runs.

namespace geomineq::kernels {

enum class Backend { scalar, avx2 };

/// Backend actually in use (auto-detected at startup, may be overridden).
Backend active_backend();

/// True if the CPU supports the AVX2 variant.
bool avx2_supported();

/// Force a backend (tests). Requesting avx2 on unsupported hardware throws.
void force_backend(Backend b);

/// out[i] = a*x[i] + b*y[i]
void axpby(double a, const double* x, double b, const double* y, double* out,
           std::size_t n);

/// Weighted reduction sum_i w[i]*v[i] in the fixed striped order.
double dot(const double* w, const double* v, std::size_t n);

/// sum_i v[i] in the fixed striped order.
double sum(const double* v, std::size_t n);

/// dst[i] |= src[i]
void or_words(std::uint64_t* dst, const std::uint64_t* src, std::size_t n);

/// dst[i] |= (src <<bits shift) within one contiguous word block; bits shift
/// toward higher indices (bit k of word w moves to bit k+shift overall).
/// Out-of-range source bits are dropped.
void or_shifted_bits(std::uint64_t* dst, const std::uint64_t* src,
                     std::size_t n, std::size_t shift_bits);

/// Number of set bits over the block.
std::uint64_t popcount(const std::uint64_t* v, std::size_t n);

} // namespace geomineq::kernels
