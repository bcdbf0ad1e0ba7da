#include <cmath>
#include <random>
#include <vector>

#include "coalition/kernels.hpp"
#include "coalition/stochastic.hpp"
#include "doctest.h"

using namespace coalition;
namespace k = coalition::kernels;

namespace {

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

// Reassociation bound for sums of n terms of magnitude <= m.
double bound(std::size_t n, double m) { return 4.0 * (n + 1) * m * 1.2e-16; }

struct IsaGuard {
  k::Isa saved = k::active_isa();
  ~IsaGuard() { k::set_active_isa(saved); }
};

}  // namespace

TEST_CASE("scalar kernels against plain loops") {
  std::mt19937_64 rng(1);
  for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 8u, 9u, 31u, 64u, 101u}) {
    const auto a = random_vector(rng, n, -1, 1);
    const auto b = random_vector(rng, n, -1, 1);
    long double dot = 0, sum = 0, diff = 0;
    for (std::size_t i = 0; i < n; ++i) {
      dot += static_cast<long double>(a[i]) * b[i];
      sum += a[i];
      diff = std::max(diff, static_cast<long double>(std::abs(a[i] - b[i])));
    }
    CHECK(std::abs(k::scalar::dot(a, b) - static_cast<double>(dot)) < bound(n, 1));
    CHECK(std::abs(k::scalar::sum(a) - static_cast<double>(sum)) < bound(n, 1));
    CHECK(k::scalar::max_abs_diff(a, b) == static_cast<double>(diff));
  }
}

TEST_CASE("avx2 kernels agree with the scalar reference") {
  if (!k::isa_available(k::Isa::avx2)) {
    MESSAGE("AVX2 not available on this machine; equivalence not exercised");
    return;
  }
  std::mt19937_64 rng(2);
  for (std::size_t n = 0; n <= 70; ++n) {
    const auto a = random_vector(rng, n, -10, 10);
    const auto b = random_vector(rng, n + 3, -10, 10);
    CHECK(std::abs(k::avx2::dot(a, b) - k::scalar::dot(a, b)) < bound(n, 100));
    CHECK(std::abs(k::avx2::sum(a) - k::scalar::sum(a)) < bound(n, 10));
    CHECK(k::avx2::max_abs_diff(a, b) == k::scalar::max_abs_diff(a, b));
    auto s1 = a, s2 = a;
    k::avx2::scale(s1, 0.37);
    k::scalar::scale(s2, 0.37);
    CHECK(s1 == s2);
  }

  for (std::size_t rows : {1u, 2u, 5u, 64u, 333u}) {
    std::uniform_int_distribution<int> col(0, static_cast<int>(rows) - 1);
    std::vector<std::int32_t> cols(rows * k::kEllWidth);
    for (auto& c : cols) c = col(rng);
    const auto vals = random_vector(rng, cols.size(), 0, 1);
    const auto x = random_vector(rng, rows, 0, 1);
    std::vector<double> y1(rows), y2(rows);
    k::avx2::ell_product(cols, vals, x, y1);
    k::scalar::ell_product(cols, vals, x, y2);
    for (std::size_t r = 0; r < rows; ++r) CHECK(std::abs(y1[r] - y2[r]) < bound(8, 1));
  }
}

TEST_CASE("dispatch can be forced and restored") {
  IsaGuard guard;
  k::set_active_isa(k::Isa::scalar);
  CHECK(k::active_isa() == k::Isa::scalar);
  CHECK(k::isa_available(k::Isa::scalar));
  if (!k::isa_available(k::Isa::avx2)) CHECK_THROWS_AS(k::set_active_isa(k::Isa::avx2), std::invalid_argument);
}

TEST_CASE("stationary vector is the same under either variant") {
  if (!k::isa_available(k::Isa::avx2)) return;
  IsaGuard guard;
  auto p = GameParams::figure2(30, 2.0);
  const auto model = build_chain(p);
  k::set_active_isa(k::Isa::scalar);
  const auto a = stationary(model);
  k::set_active_isa(k::Isa::avx2);
  const auto b = stationary(model);
  CHECK(k::scalar::max_abs_diff(a.pi, b.pi) < 1e-9);
  CHECK(a.residual < 1e-10);
  CHECK(b.residual < 1e-10);
}
