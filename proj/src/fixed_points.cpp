#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "coalition/deterministic.hpp"

namespace coalition {

ContinuousField::ContinuousField(const GameParams& params) : table_(params) {}

double ContinuousField::level_value(int i_M, double x, int which) const {
  // Compositions on which each quantity exists: C needs i_C >= 1, D needs
  // i_C <= i_M - 1, the difference f_C - f_D needs both.
  const int lo = which == 0 || which == 3 ? 1 : 0;
  const int hi = which == 1 || which == 3 ? i_M - 1 : i_M;
  auto pick = [&](int i_C) {
    const auto& f = table_.at(i_C, i_M - i_C);
    return which == 0 ? f.f_C : which == 1 ? f.f_D : which == 2 ? f.f_O : f.f_C - f.f_D;
  };
  if (lo == hi) return pick(lo);
  const double u = std::clamp(x * i_M, static_cast<double>(lo), static_cast<double>(hi));
  int a = static_cast<int>(std::floor(u));
  if (a >= hi) a = hi - 1;
  const double t = u - a;
  return (1.0 - t) * pick(a) + t * pick(a + 1);
}

double ContinuousField::blend(double x, double y, int which) const {
  const int Z = table_.Z();
  const double u = y * Z;
  const int a = std::clamp(static_cast<int>(std::floor(u)), 2, Z - 1);
  const double t = std::clamp(u - a, 0.0, 1.0);
  return (1.0 - t) * level_value(a, x, which) + t * level_value(a + 1, x, which);
}

FitnessTriple ContinuousField::fitness(double x, double y) const {
  return {blend(x, y, 0), blend(x, y, 1), blend(x, y, 2)};
}

FieldVector ContinuousField::operator()(double x, double y) const {
  const auto f = fitness(x, y);
  return {x * (1.0 - x) * blend(x, y, 3),
          y * (1.0 - y) * (x * f.f_C + (1.0 - x) * f.f_D - f.f_O)};
}

const char* to_string(FixedPointKind k) {
  switch (k) {
    case FixedPointKind::stable_node: return "stable_node";
    case FixedPointKind::stable_spiral: return "stable_spiral";
    case FixedPointKind::unstable_node: return "unstable_node";
    case FixedPointKind::unstable_spiral: return "unstable_spiral";
    case FixedPointKind::saddle: return "saddle";
    case FixedPointKind::center: return "center";
  }
  return "?";
}

FixedPointKind classify_jacobian(const std::array<double, 4>& J,
                                 std::array<std::complex<double>, 2>* eigenvalues) {
  const double tr = J[0] + J[3];
  const double det = J[0] * J[3] - J[1] * J[2];
  const double disc = tr * tr - 4.0 * det;
  const double scale = std::abs(J[0]) + std::abs(J[1]) + std::abs(J[2]) + std::abs(J[3]);
  const double tol = 1e-12 * std::max(scale, 1e-300);
  if (eigenvalues) {
    if (disc >= 0.0) {
      const double r = std::sqrt(disc);
      (*eigenvalues)[0] = {(tr + r) / 2.0, 0.0};
      (*eigenvalues)[1] = {(tr - r) / 2.0, 0.0};
    } else {
      const double im = std::sqrt(-disc) / 2.0;
      (*eigenvalues)[0] = {tr / 2.0, im};
      (*eigenvalues)[1] = {tr / 2.0, -im};
    }
  }
  if (det < 0.0) return FixedPointKind::saddle;
  if (disc < 0.0) {
    if (tr < -tol) return FixedPointKind::stable_spiral;
    if (tr > tol) return FixedPointKind::unstable_spiral;
    return FixedPointKind::center;
  }
  if (tr < -tol) return FixedPointKind::stable_node;
  if (tr > tol) return FixedPointKind::unstable_node;
  return FixedPointKind::center;
}

namespace {

struct Point {
  double x, y;
};

double norm(const FieldVector& v) { return std::hypot(v.x_dot, v.y_dot); }

std::array<double, 4> jacobian(const ContinuousField& F, Point p, double h) {
  const auto xp = F(p.x + h, p.y), xm = F(p.x - h, p.y);
  const auto yp = F(p.x, p.y + h), ym = F(p.x, p.y - h);
  return {(xp.x_dot - xm.x_dot) / (2 * h), (yp.x_dot - ym.x_dot) / (2 * h),
          (xp.y_dot - xm.y_dot) / (2 * h), (yp.y_dot - ym.y_dot) / (2 * h)};
}

// Damped Newton kept inside the rectangle; returns the final point.
Point newton(const ContinuousField& F, Point p, double y_lo) {
  auto clamp = [&](Point q) {
    return Point{std::clamp(q.x, 0.0, 1.0), std::clamp(q.y, y_lo, 1.0)};
  };
  FieldVector v = F(p.x, p.y);
  for (int it = 0; it < 100 && norm(v) > 1e-14; ++it) {
    const auto J = jacobian(F, p, 1e-7);
    const double det = J[0] * J[3] - J[1] * J[2];
    if (det == 0.0 || !std::isfinite(det)) break;
    const double dx = -(J[3] * v.x_dot - J[1] * v.y_dot) / det;
    const double dy = -(-J[2] * v.x_dot + J[0] * v.y_dot) / det;
    double lambda = 1.0;
    bool moved = false;
    while (lambda > 1e-6) {
      const Point q = clamp({p.x + lambda * dx, p.y + lambda * dy});
      const auto w = F(q.x, q.y);
      if (norm(w) < norm(v)) {
        p = q;
        v = w;
        moved = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!moved || std::hypot(lambda * dx, lambda * dy) < 1e-15) break;
  }
  return p;
}

}  // namespace

std::vector<FixedPoint> find_fixed_points(const GameParams& params, int grid_resolution) {
  return find_fixed_points(ContinuousField(params), grid_resolution);
}

std::vector<FixedPoint> find_fixed_points(const ContinuousField& field, int grid_resolution) {
  if (grid_resolution < 20) throw std::invalid_argument("grid_resolution must be >= 20");
  // Nullclines bend on the lattice scale, so cells are split until the scan
  // is at least twice as fine as the lattice.
  const int split = (2 * field.Z() + grid_resolution - 1) / grid_resolution;
  const int R = grid_resolution * std::max(split, 1);
  const double y_lo = field.y_min();
  auto gx = [&](int i) { return static_cast<double>(i) / R; };
  auto gy = [&](int j) { return y_lo + (1.0 - y_lo) * j / R; };

  std::vector<FieldVector> corners(static_cast<std::size_t>(R + 1) * (R + 1));
  for (int j = 0; j <= R; ++j)
    for (int i = 0; i <= R; ++i) corners[j * (R + 1) + i] = field(gx(i), gy(j));

  const double edge = 1e-6;
  std::vector<FixedPoint> found;
  for (int j = 0; j < R; ++j) {
    for (int i = 0; i < R; ++i) {
      double lo_x = INFINITY, hi_x = -INFINITY, lo_y = INFINITY, hi_y = -INFINITY;
      for (int dj = 0; dj <= 1; ++dj)
        for (int di = 0; di <= 1; ++di) {
          const auto& v = corners[(j + dj) * (R + 1) + i + di];
          lo_x = std::min(lo_x, v.x_dot);
          hi_x = std::max(hi_x, v.x_dot);
          lo_y = std::min(lo_y, v.y_dot);
          hi_y = std::max(hi_y, v.y_dot);
        }
      if (lo_x > 0 || hi_x < 0 || lo_y > 0 || hi_y < 0) continue;

      const Point p = newton(field, {(gx(i) + gx(i + 1)) / 2, (gy(j) + gy(j + 1)) / 2}, y_lo);
      const auto v = field(p.x, p.y);
      const double res = norm(v);
      if (!(res < 1e-8)) continue;
      if (p.x <= edge || p.x >= 1 - edge || p.y <= y_lo + edge || p.y >= 1 - edge) continue;

      auto same = std::find_if(found.begin(), found.end(), [&](const FixedPoint& q) {
        return std::hypot(q.x - p.x, q.y - p.y) < 1e-6;
      });
      if (same != found.end()) {
        if (res < same->residual) *same = FixedPoint{p.x, p.y, res, {}, {}, {}};
        continue;
      }
      found.push_back({p.x, p.y, res, {}, {}, {}});
    }
  }

  const double h = 1.0 / field.Z();
  for (auto& fp : found) {
    fp.jacobian = jacobian(field, {fp.x, fp.y}, h);
    fp.kind = classify_jacobian(fp.jacobian, &fp.eigenvalues);
  }
  std::sort(found.begin(), found.end(), [](const FixedPoint& a, const FixedPoint& b) {
    return a.y != b.y ? a.y < b.y : a.x < b.x;
  });
  return found;
}

}  // namespace coalition
