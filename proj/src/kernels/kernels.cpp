#include "coalition/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>

namespace coalition::kernels {

namespace scalar {

double dot(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = std::min(a.size(), b.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double sum(std::span<const double> a) {
  double acc = 0.0;
  for (double v : a) acc += v;
  return acc;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = std::min(a.size(), b.size());
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

void scale(std::span<double> a, double factor) {
  for (double& v : a) v *= factor;
}

void ell_product(std::span<const std::int32_t> cols, std::span<const double> vals,
                 std::span<const double> x, std::span<double> y) {
  for (std::size_t r = 0; r < y.size(); ++r) {
    const std::size_t base = r * kEllWidth;
    double acc = 0.0;
    for (int s = 0; s < kEllWidth; ++s) acc += vals[base + s] * x[cols[base + s]];
    y[r] = acc;
  }
}

}  // namespace scalar

#ifndef COALITION_HAVE_AVX2
// Non-x86 builds: the AVX2 entry points exist for linkage but never get
// selected, since isa_available(Isa::avx2) is false.
namespace avx2 {
double dot(std::span<const double> a, std::span<const double> b) { return scalar::dot(a, b); }
double sum(std::span<const double> a) { return scalar::sum(a); }
double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  return scalar::max_abs_diff(a, b);
}
void scale(std::span<double> a, double factor) { scalar::scale(a, factor); }
void ell_product(std::span<const std::int32_t> cols, std::span<const double> vals,
                 std::span<const double> x, std::span<double> y) {
  scalar::ell_product(cols, vals, x, y);
}
}  // namespace avx2
#endif

namespace {

struct Table {
  Isa isa;
  double (*dot)(std::span<const double>, std::span<const double>);
  double (*sum)(std::span<const double>);
  double (*max_abs_diff)(std::span<const double>, std::span<const double>);
  void (*scale)(std::span<double>, double);
  void (*ell_product)(std::span<const std::int32_t>, std::span<const double>,
                      std::span<const double>, std::span<double>);
};

constexpr Table kScalar{Isa::scalar, scalar::dot, scalar::sum, scalar::max_abs_diff,
                        scalar::scale, scalar::ell_product};
constexpr Table kAvx2{Isa::avx2, avx2::dot, avx2::sum, avx2::max_abs_diff, avx2::scale,
                      avx2::ell_product};

bool cpu_has_avx2() {
#if defined(COALITION_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Table* table_for(Isa isa) { return isa == Isa::avx2 ? &kAvx2 : &kScalar; }

std::atomic<const Table*>& active_table() {
  static std::atomic<const Table*> table{table_for(detected_isa())};
  return table;
}

const Table& current() { return *active_table().load(std::memory_order_relaxed); }

}  // namespace

const char* to_string(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool isa_available(Isa isa) {
  static const bool avx2 = cpu_has_avx2();
  return isa == Isa::scalar || avx2;
}

Isa detected_isa() { return isa_available(Isa::avx2) ? Isa::avx2 : Isa::scalar; }

Isa active_isa() { return current().isa; }

void set_active_isa(Isa isa) {
  if (!isa_available(isa))
    throw std::invalid_argument(std::string("kernel variant not available: ") + to_string(isa));
  active_table().store(table_for(isa), std::memory_order_relaxed);
}

double dot(std::span<const double> a, std::span<const double> b) { return current().dot(a, b); }
double sum(std::span<const double> a) { return current().sum(a); }
double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  return current().max_abs_diff(a, b);
}
void scale(std::span<double> a, double factor) { current().scale(a, factor); }
void ell_product(std::span<const std::int32_t> cols, std::span<const double> vals,
                 std::span<const double> x, std::span<double> y) {
  current().ell_product(cols, vals, x, y);
}

}  // namespace coalition::kernels
