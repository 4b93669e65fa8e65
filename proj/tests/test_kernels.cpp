#include "doctest.h"

#include "geomineq/common.hpp"
#include "geomineq/kernels.hpp"

#include <cstring>
#include <vector>

using namespace geomineq;
namespace k = geomineq::kernels;

namespace {

std::vector<double> random_doubles(Rng& rng, std::size_t n) {
    std::vector<double> v(n);
    for (auto& x : v) x = rng.uniform(-3.0, 3.0);
    return v;
}

std::vector<std::uint64_t> random_words(Rng& rng, std::size_t n) {
    std::vector<std::uint64_t> v(n);
    for (auto& x : v) x = rng.next_u64();
    return v;
}

/// Runs fn under both backends and requires bit-identical results.
template <typename Fn>
void both_backends(Fn&& fn) {
    const k::Backend before = k::active_backend();
    k::force_backend(k::Backend::scalar);
    auto scalar = fn();
    if (k::avx2_supported()) {
        k::force_backend(k::Backend::avx2);
        auto vec = fn();
        CHECK(std::memcmp(scalar.data(), vec.data(), scalar.size() * sizeof(scalar[0])) == 0);
    }
    k::force_backend(before);
}

} // namespace

TEST_CASE("kernel backends agree bit for bit on every size") {
    Rng rng(42);
    // Sizes straddle the stripe width and the vector tail handling.
    for (std::size_t n : {std::size_t(0), std::size_t(1), std::size_t(2), std::size_t(3),
                          std::size_t(4), std::size_t(5), std::size_t(7), std::size_t(8),
                          std::size_t(15), std::size_t(16), std::size_t(17), std::size_t(31),
                          std::size_t(64), std::size_t(100), std::size_t(1023)}) {
        const auto x = random_doubles(rng, n);
        const auto y = random_doubles(rng, n);
        const double a = rng.uniform(-2.0, 2.0);
        const double b = rng.uniform(-2.0, 2.0);

        both_backends([&] {
            std::vector<double> out(n, 0.0);
            k::axpby(a, x.data(), b, y.data(), out.data(), n);
            return out;
        });
        both_backends([&] {
            return std::vector<double>{k::dot(x.data(), y.data(), n)};
        });
        both_backends([&] {
            return std::vector<double>{k::sum(x.data(), n)};
        });
    }
}

TEST_CASE("bit kernels agree across backends") {
    Rng rng(7);
    for (std::size_t words : {std::size_t(1), std::size_t(2), std::size_t(3), std::size_t(5),
                              std::size_t(8), std::size_t(17), std::size_t(33)}) {
        const auto src = random_words(rng, words);
        const auto base = random_words(rng, words);

        both_backends([&] {
            auto dst = base;
            k::or_words(dst.data(), src.data(), words);
            return dst;
        });
        both_backends([&] {
            return std::vector<std::uint64_t>{k::popcount(src.data(), words)};
        });
        for (std::size_t shift : {std::size_t(0), std::size_t(1), std::size_t(13),
                                  std::size_t(63), std::size_t(64), std::size_t(65),
                                  std::size_t(64 * words - 1)}) {
            both_backends([&] {
                auto dst = base;
                k::or_shifted_bits(dst.data(), src.data(), words, shift);
                return dst;
            });
        }
    }
}

TEST_CASE("kernel semantics match a direct evaluation") {
    Rng rng(3);
    const std::size_t n = 137;
    const auto x = random_doubles(rng, n);
    const auto y = random_doubles(rng, n);

    std::vector<double> out(n);
    k::axpby(1.5, x.data(), -0.25, y.data(), out.data(), n);
    for (std::size_t i = 0; i < n; ++i)
        CHECK(out[i] == doctest::Approx(1.5 * x[i] - 0.25 * y[i]).epsilon(1e-15));

    double direct = 0.0;
    for (std::size_t i = 0; i < n; ++i) direct += x[i] * y[i];
    CHECK(k::dot(x.data(), y.data(), n) == doctest::Approx(direct).epsilon(1e-12));

    direct = 0.0;
    for (double v : x) direct += v;
    CHECK(k::sum(x.data(), n) == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("or_shifted_bits moves bits toward higher indices and drops overflow") {
    const std::size_t words = 2;
    std::vector<std::uint64_t> src = {std::uint64_t(1) << 63, 0};
    std::vector<std::uint64_t> dst = {0, 0};
    k::or_shifted_bits(dst.data(), src.data(), words, 1);
    CHECK(dst[0] == 0);
    CHECK(dst[1] == 1);

    // Shifting the top bit past the end drops it.
    dst = {0, 0};
    src = {0, std::uint64_t(1) << 63};
    k::or_shifted_bits(dst.data(), src.data(), words, 1);
    CHECK(dst[0] == 0);
    CHECK(dst[1] == 0);

    // Shift by zero is plain or.
    dst = {0xf0, 0};
    src = {0x0f, 0x10};
    k::or_shifted_bits(dst.data(), src.data(), words, 0);
    CHECK(dst[0] == 0xff);
    CHECK(dst[1] == 0x10);
}

TEST_CASE("reduction order is fixed, so sums are reproducible") {
    Rng rng(11);
    const auto x = random_doubles(rng, 999);
    const auto y = random_doubles(rng, 999);
    const double first = k::dot(x.data(), y.data(), x.size());
    for (int rep = 0; rep < 5; ++rep)
        CHECK(k::dot(x.data(), y.data(), x.size()) == first);
}
