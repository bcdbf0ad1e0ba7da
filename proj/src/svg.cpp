#include "coalition/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

namespace coalition::svg {

namespace {

constexpr double kWidth = 640.0;
constexpr double kMargin = 40.0;

struct Point {
  double x, y;
};

// Vertices: O bottom left, D bottom right, C top.
Point place(double i_C, double i_D, int Z) {
  const double side = kWidth - 2 * kMargin;
  const double h = side * std::sqrt(3.0) / 2;
  const Point O{kMargin, kMargin + h}, D{kMargin + side, kMargin + h}, C{kMargin + side / 2, kMargin};
  const double c = i_C / Z, d = i_D / Z, o = 1.0 - c - d;
  return {c * C.x + d * D.x + o * O.x, c * C.y + d * D.y + o * O.y};
}

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string ramp(double t) {
  static constexpr std::array<std::array<int, 3>, 5> stops{
      {{68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}}};
  t = std::clamp(t, 0.0, 1.0) * (stops.size() - 1);
  const auto i = std::min<std::size_t>(static_cast<std::size_t>(t), stops.size() - 2);
  const double f = t - i;
  char buf[8];
  int rgb[3];
  for (int k = 0; k < 3; ++k) rgb[k] = static_cast<int>(std::lround(stops[i][k] + f * (stops[i + 1][k] - stops[i][k])));
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
  return buf;
}

}  // namespace

void write_simplex(std::ostream& out, const StateIndex& index, std::span<const double> heat,
                   std::span<const Arrow> arrows, const std::string& title) {
  const int Z = index.Z();
  const double spacing = (kWidth - 2 * kMargin) / Z;
  const double height = kMargin * 2 + (kWidth - 2 * kMargin) * std::sqrt(3.0) / 2 + 20;
  double top = 0.0;
  for (double v : heat) top = std::max(top, v);

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(kWidth) << "\" height=\"" << fixed(height)
      << "\" viewBox=\"0 0 " << fixed(kWidth) << ' ' << fixed(height) << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << fixed(kMargin) << "\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\">" << title
      << "</text>\n";
  const Point C = place(Z, 0, Z), D = place(0, Z, Z), O = place(0, 0, Z);
  out << "<polygon points=\"" << fixed(C.x) << ',' << fixed(C.y) << ' ' << fixed(D.x) << ',' << fixed(D.y) << ' '
      << fixed(O.x) << ',' << fixed(O.y) << "\" fill=\"none\" stroke=\"black\"/>\n";
  out << "<text x=\"" << fixed(C.x - 4) << "\" y=\"" << fixed(C.y - 6) << "\" font-size=\"12\">C</text>\n";
  out << "<text x=\"" << fixed(D.x + 4) << "\" y=\"" << fixed(D.y + 12) << "\" font-size=\"12\">D</text>\n";
  out << "<text x=\"" << fixed(O.x - 14) << "\" y=\"" << fixed(O.y + 12) << "\" font-size=\"12\">O</text>\n";

  out << "<g stroke=\"none\">\n";
  const double r = 0.55 * spacing;
  for (std::size_t k = 0; k < index.size(); ++k) {
    const Point p = place(index.i_C(k), index.i_D(k), Z);
    const double t = top > 0 ? heat[k] / top : 0.0;
    out << "<circle cx=\"" << fixed(p.x) << "\" cy=\"" << fixed(p.y) << "\" r=\"" << fixed(r) << "\" fill=\""
        << ramp(t) << "\"/>\n";
  }
  out << "</g>\n";

  double longest = 0.0;
  for (const auto& a : arrows) longest = std::max(longest, std::hypot(a.d_iC, a.d_iD));
  if (longest > 0) {
    const int stride = std::max(1, Z / 20);
    const double scale = 0.8 * stride / longest;
    out << "<g stroke=\"black\" stroke-width=\"0.8\">\n";
    for (const auto& a : arrows) {
      if (a.i_C % stride != 0 || a.i_D % stride != 0) continue;
      const Point p = place(a.i_C, a.i_D, Z);
      const Point q = place(a.i_C + scale * a.d_iC, a.i_D + scale * a.d_iD, Z);
      out << "<line x1=\"" << fixed(p.x) << "\" y1=\"" << fixed(p.y) << "\" x2=\"" << fixed(q.x) << "\" y2=\""
          << fixed(q.y) << "\"/>\n";
      out << "<circle cx=\"" << fixed(q.x) << "\" cy=\"" << fixed(q.y) << "\" r=\"1.2\" fill=\"black\"/>\n";
    }
    out << "</g>\n";
  }
  out << "</svg>\n";
}

}  // namespace coalition::svg
