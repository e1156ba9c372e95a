#include "inkwarp/draw.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace inkwarp {

void draw_line(GrayImage& img, double x0, double y0, double x1, double y1, double thickness,
               std::uint8_t value) {
  const double half = thickness / 2.0;
  const int xa = std::max(0, static_cast<int>(std::floor(std::min(x0, x1) - half)));
  const int xb = std::min(img.width() - 1, static_cast<int>(std::ceil(std::max(x0, x1) + half)));
  const int ya = std::max(0, static_cast<int>(std::floor(std::min(y0, y1) - half)));
  const int yb = std::min(img.height() - 1, static_cast<int>(std::ceil(std::max(y0, y1) + half)));
  const double vx = x1 - x0, vy = y1 - y0;
  const double len2 = vx * vx + vy * vy;
  for (int y = ya; y <= yb; ++y)
    for (int x = xa; x <= xb; ++x) {
      double t = len2 > 0 ? ((x - x0) * vx + (y - y0) * vy) / len2 : 0.0;
      t = std::clamp(t, 0.0, 1.0);
      const double px = x0 + t * vx - x, py = y0 + t * vy - y;
      if (px * px + py * py <= half * half)
        img.at(x, y) = value;
    }
}

void draw_ellipse(GrayImage& img, double cx, double cy, double rx, double ry, double thickness,
                  double angle, std::uint8_t value) {
  constexpr int kSegments = 96;
  const double c = std::cos(angle), s = std::sin(angle);
  auto point = [&](int i, double& x, double& y) {
    const double t = 2.0 * std::numbers::pi * i / kSegments;
    const double ex = rx * std::cos(t), ey = ry * std::sin(t);
    x = cx + c * ex - s * ey;
    y = cy + s * ex + c * ey;
  };
  double px, py;
  point(0, px, py);
  for (int i = 1; i <= kSegments; ++i) {
    double x, y;
    point(i, x, y);
    draw_line(img, px, py, x, y, thickness, value);
    px = x;
    py = y;
  }
}

void fill_ellipse(GrayImage& img, double cx, double cy, double rx, double ry, std::uint8_t value) {
  const int xa = std::max(0, static_cast<int>(std::floor(cx - rx)));
  const int xb = std::min(img.width() - 1, static_cast<int>(std::ceil(cx + rx)));
  const int ya = std::max(0, static_cast<int>(std::floor(cy - ry)));
  const int yb = std::min(img.height() - 1, static_cast<int>(std::ceil(cy + ry)));
  for (int y = ya; y <= yb; ++y)
    for (int x = xa; x <= xb; ++x) {
      const double dx = (x - cx) / rx, dy = (y - cy) / ry;
      if (dx * dx + dy * dy <= 1.0)
        img.at(x, y) = value;
    }
}

} // namespace inkwarp
