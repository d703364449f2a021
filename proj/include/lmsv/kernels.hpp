#pragma once

// Data-parallel inner-loop kernels: reductions and exceedance counting.
//
// Every kernel has a scalar reference implementation plus SIMD variants
// (AVX2 on x86-64, NEON on aarch64) selected once at runtime.  All variants
// accumulate in four independent lanes and combine them in a fixed order
// ((l0+l1)+(l2+l3), then the scalar tail), so results are bit-identical
// across backends; the test suite asserts exact equivalence.

#include <cstddef>
#include <span>
#include <string>

namespace lmsv::kernels {

enum class Backend { scalar, avx2, neon };

// Backend chosen at startup (CPU probe, overridable via the
// LMSV_KERNEL_BACKEND environment variable: "scalar" | "avx2" | "neon").
Backend active_backend();
const char* backend_name(Backend b);

// Force a backend (tests); throws std::invalid_argument if unsupported here.
void force_backend(Backend b);

double sum(std::span<const double> x);
double dot(std::span<const double> a, std::span<const double> b);
// sum_{i=0}^{n-1-lag} x[i] * x[i+lag]; lag >= n gives 0.
double lagged_dot(std::span<const double> x, std::size_t lag);
// #{ i : x[i] > threshold }, strict inequality.
std::size_t count_greater(std::span<const double> x, double threshold);

namespace detail {
double sum_scalar(const double* x, std::size_t n);
double dot_scalar(const double* a, const double* b, std::size_t n);
std::size_t count_greater_scalar(const double* x, std::size_t n, double t);
}  // namespace detail

}  // namespace lmsv::kernels
