#pragma once

// Data-parallel inner loops. Each kernel has a scalar reference in
// kernels::scalar and, on x86-64, an AVX2/FMA variant in kernels::avx2; the
// unqualified entry points dispatch to the variant selected at runtime.
//
// Variants agree up to floating-point reassociation (see test_kernels.cpp),
// not bit for bit, so results are reproducible per ISA.

#include <cstdint>
#include <span>

namespace coalition::kernels {

enum class Isa { scalar, avx2 };

const char* to_string(Isa isa);

// Best variant this CPU and build support.
Isa detected_isa();
// Variant currently used by the dispatching entry points.
Isa active_isa();
// Force a variant (tests, benchmarks). Throws std::invalid_argument if the
// CPU or build cannot run it.
void set_active_isa(Isa isa);
bool isa_available(Isa isa);

// Rows of an ELL sparse matrix are padded to this width. Padding entries
// carry value 0 and any valid column index.
inline constexpr int kEllWidth = 8;

// sum_i a[i] * b[i] over the common length.
double dot(std::span<const double> a, std::span<const double> b);
// sum_i a[i]
double sum(std::span<const double> a);
// max_i |a[i] - b[i]|
double max_abs_diff(std::span<const double> a, std::span<const double> b);
// a[i] *= factor
void scale(std::span<double> a, double factor);
// y[r] = sum_{s < kEllWidth} vals[r*W + s] * x[cols[r*W + s]]
void ell_product(std::span<const std::int32_t> cols, std::span<const double> vals,
                 std::span<const double> x, std::span<double> y);

namespace scalar {
double dot(std::span<const double> a, std::span<const double> b);
double sum(std::span<const double> a);
double max_abs_diff(std::span<const double> a, std::span<const double> b);
void scale(std::span<double> a, double factor);
void ell_product(std::span<const std::int32_t> cols, std::span<const double> vals,
                 std::span<const double> x, std::span<double> y);
}  // namespace scalar

namespace avx2 {
double dot(std::span<const double> a, std::span<const double> b);
double sum(std::span<const double> a);
double max_abs_diff(std::span<const double> a, std::span<const double> b);
void scale(std::span<double> a, double factor);
void ell_product(std::span<const std::int32_t> cols, std::span<const double> vals,
                 std::span<const double> x, std::span<double> y);
}  // namespace avx2

}  // namespace coalition::kernels
