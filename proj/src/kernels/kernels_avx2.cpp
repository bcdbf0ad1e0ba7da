// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.

#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "coalition/kernels.hpp"

namespace coalition::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline double hmax(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d m = _mm_max_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_max_sd(m, _mm_unpackhi_pd(m, m)));
}

}  // namespace

double dot(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = std::min(a.size(), b.size());
  const double* pa = a.data();
  const double* pb = b.data();
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(pa + i), _mm256_loadu_pd(pb + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(pa + i + 4), _mm256_loadu_pd(pb + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(pa + i), _mm256_loadu_pd(pb + i), acc0);
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += pa[i] * pb[i];
  return acc;
}

double sum(std::span<const double> a) {
  const std::size_t n = a.size();
  const double* p = a.data();
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(p + i));
    acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(p + i + 4));
  }
  for (; i + 4 <= n; i += 4) acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(p + i));
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += p[i];
  return acc;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = std::min(a.size(), b.size());
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d m = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i));
    m = _mm256_max_pd(m, _mm256_andnot_pd(sign, d));
  }
  double r = hmax(m);
  for (; i < n; ++i) r = std::max(r, std::abs(a[i] - b[i]));
  return r;
}

void scale(std::span<double> a, double factor) {
  const __m256d f = _mm256_set1_pd(factor);
  std::size_t i = 0;
  double* p = a.data();
  for (; i + 4 <= a.size(); i += 4) _mm256_storeu_pd(p + i, _mm256_mul_pd(_mm256_loadu_pd(p + i), f));
  for (; i < a.size(); ++i) p[i] *= factor;
}

void ell_product(std::span<const std::int32_t> cols, std::span<const double> vals,
                 std::span<const double> x, std::span<double> y) {
  static_assert(kEllWidth == 8, "AVX2 ELL kernel assumes two 4-lane halves");
  const double* px = x.data();
  for (std::size_t r = 0; r < y.size(); ++r) {
    const std::size_t base = r * kEllWidth;
    const __m128i idx0 = _mm_loadu_si128(reinterpret_cast<const __m128i*>(cols.data() + base));
    const __m128i idx1 = _mm_loadu_si128(reinterpret_cast<const __m128i*>(cols.data() + base + 4));
    const __m256d x0 = _mm256_i32gather_pd(px, idx0, 8);
    const __m256d x1 = _mm256_i32gather_pd(px, idx1, 8);
    __m256d acc = _mm256_mul_pd(_mm256_loadu_pd(vals.data() + base), x0);
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(vals.data() + base + 4), x1, acc);
    y[r] = hsum(acc);
  }
}

}  // namespace coalition::kernels::avx2
