#pragma once

#include "inkwarp/image.hpp"

#include <cstdint>

namespace inkwarp {

// Minimal rasterizers for line art. Coordinates are pixel centers; pixels
// within thickness/2 of the shape are painted.

void draw_line(GrayImage& img, double x0, double y0, double x1, double y1, double thickness,
               std::uint8_t value = 0);

/// Outline of an ellipse rotated by `angle` radians (clockwise on screen).
void draw_ellipse(GrayImage& img, double cx, double cy, double rx, double ry, double thickness,
                  double angle = 0.0, std::uint8_t value = 0);

void fill_ellipse(GrayImage& img, double cx, double cy, double rx, double ry,
                  std::uint8_t value = 0);

} // namespace inkwarp
