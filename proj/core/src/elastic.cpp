#include "inkwarp/elastic.hpp"

#include "inkwarp/error.hpp"
#include "inkwarp/parallel.hpp"
#include "inkwarp/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace inkwarp {

void validate(const ElasticSpec& spec) {
  if (!std::isfinite(spec.alpha) || spec.alpha < 0)
    throw InvalidSpec("elastic alpha must be finite and >= 0");
  if (!std::isfinite(spec.sigma) || spec.sigma <= 0.5)
    throw InvalidSpec("elastic sigma must be finite and > 0.5");
}

PixelPoint DisplacementField::at(double col, double row) const {
  col = std::clamp(col, 0.0, static_cast<double>(width - 1));
  row = std::clamp(row, 0.0, static_cast<double>(height - 1));
  const int x0 = static_cast<int>(col);
  const int y0 = static_cast<int>(row);
  const int x1 = std::min(x0 + 1, width - 1);
  const int y1 = std::min(y0 + 1, height - 1);
  const double tx = col - x0;
  const double ty = row - y0;
  auto lerp2 = [&](const std::vector<double>& f) {
    const double a = f[index(x0, y0)], b = f[index(x1, y0)];
    const double c = f[index(x0, y1)], d = f[index(x1, y1)];
    const double top = a + (b - a) * tx;
    const double bottom = c + (d - c) * tx;
    return top + (bottom - top) * ty;
  };
  return {lerp2(dx), lerp2(dy)};
}

double elastic_noise(std::uint64_t seed, std::uint64_t pixel_index, int axis) {
  const std::uint64_t key = mix_keys(mix_keys(seed, pixel_index), static_cast<std::uint64_t>(axis));
  return 2.0 * unit_interval(key) - 1.0;
}

std::vector<double> gaussian_kernel(double sigma) {
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0;
  for (int i = -radius; i <= radius; ++i) {
    const double w = std::exp(-(i * i) / (2.0 * sigma * sigma));
    k[static_cast<std::size_t>(i + radius)] = w;
    sum += w;
  }
  for (double& w : k)
    w /= sum;
  return k;
}

namespace {

// Separable edge-clamped convolution, rows then columns. Every output value
// is a fixed-order sum, so the schedule never changes a bit.
std::vector<double> smooth(const std::vector<double>& src, int w, int h,
                           const std::vector<double>& kernel, int jobs) {
  const int r = static_cast<int>(kernel.size() / 2);
  const auto W = static_cast<std::size_t>(w);
  std::vector<double> tmp(src.size());
  parallel_for(static_cast<std::size_t>(h), jobs, [&](std::size_t y) {
    const double* row = &src[y * W];
    for (int x = 0; x < w; ++x) {
      double acc = 0;
      for (int k = -r; k <= r; ++k)
        acc += kernel[static_cast<std::size_t>(k + r)] * row[std::clamp(x + k, 0, w - 1)];
      tmp[y * W + static_cast<std::size_t>(x)] = acc;
    }
  });
  std::vector<double> out(src.size());
  parallel_for(static_cast<std::size_t>(h), jobs, [&](std::size_t y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0;
      for (int k = -r; k <= r; ++k) {
        const auto yy = static_cast<std::size_t>(std::clamp(static_cast<int>(y) + k, 0, h - 1));
        acc += kernel[static_cast<std::size_t>(k + r)] * tmp[yy * W + static_cast<std::size_t>(x)];
      }
      out[y * W + static_cast<std::size_t>(x)] = acc;
    }
  });
  return out;
}

void normalize_and_scale(std::vector<double>& f, double alpha) {
  double peak = 0;
  for (const double v : f)
    peak = std::max(peak, std::abs(v));
  if (peak == 0)
    return;
  for (double& v : f)
    v = v / peak * alpha;
}

} // namespace

DisplacementField generate_field(int width, int height, const ElasticSpec& spec, int jobs) {
  validate(spec);
  if (width < 1 || height < 1)
    throw InvalidSpec("elastic field dimensions must be positive");

  const std::size_t n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  DisplacementField field;
  field.width = width;
  field.height = height;
  if (spec.alpha == 0) {
    field.dx.assign(n, 0.0);
    field.dy.assign(n, 0.0);
    return field;
  }

  std::vector<double> nx(n), ny(n);
  parallel_for(static_cast<std::size_t>(height), jobs, [&](std::size_t y) {
    for (std::size_t x = 0; x < static_cast<std::size_t>(width); ++x) {
      const std::size_t i = y * static_cast<std::size_t>(width) + x;
      nx[i] = elastic_noise(spec.seed, i, 0);
      ny[i] = elastic_noise(spec.seed, i, 1);
    }
  });
  const auto kernel = gaussian_kernel(spec.sigma);
  field.dx = smooth(nx, width, height, kernel, jobs);
  field.dy = smooth(ny, width, height, kernel, jobs);
  normalize_and_scale(field.dx, spec.alpha);
  normalize_and_scale(field.dy, spec.alpha);
  return field;
}

GrayImage apply_elastic(const GrayImage& img, const ElasticSpec& spec, int jobs) {
  const DisplacementField field = generate_field(img.width(), img.height(), spec, jobs);
  const SampleGrid grid = build_grid(
      img.width(), img.height(),
      [&](PixelPoint p) {
        const std::size_t i = static_cast<std::size_t>(p.row) * static_cast<std::size_t>(img.width()) +
                              static_cast<std::size_t>(p.col);
        return PixelPoint{p.col + field.dx[i], p.row + field.dy[i]};
      },
      jobs);
  return resample(img, grid, jobs);
}

double jacobian_min(const DisplacementField& field) {
  const int w = field.width;
  const int h = field.height;
  if (w < 2 || h < 2)
    throw Error("jacobian_min needs a field of at least 2x2");

  const bool interior = w >= 3 && h >= 3;
  const int x_lo = interior ? 1 : 0, x_hi = interior ? w - 1 : w;
  const int y_lo = interior ? 1 : 0, y_hi = interior ? h - 1 : h;
  double best = std::numeric_limits<double>::infinity();
  for (int y = y_lo; y < y_hi; ++y) {
    for (int x = x_lo; x < x_hi; ++x) {
      const int xm = std::max(x - 1, 0), xp = std::min(x + 1, w - 1);
      const int ym = std::max(y - 1, 0), yp = std::min(y + 1, h - 1);
      const double sx = xp - xm, sy = yp - ym;
      const double dxdx = (field.dx_at(xp, y) - field.dx_at(xm, y)) / sx;
      const double dxdy = (field.dx_at(x, yp) - field.dx_at(x, ym)) / sy;
      const double dydx = (field.dy_at(xp, y) - field.dy_at(xm, y)) / sx;
      const double dydy = (field.dy_at(x, yp) - field.dy_at(x, ym)) / sy;
      best = std::min(best, (1.0 + dxdx) * (1.0 + dydy) - dxdy * dydx);
    }
  }
  return best;
}

std::string to_string(const ElasticSpec& spec) {
  return "elastic(alpha=" + text::format_number(spec.alpha) +
         ",sigma=" + text::format_number(spec.sigma) + ",seed=" + std::to_string(spec.seed) + ")";
}

ElasticSpec elastic_from_call(const text::Call& call, std::uint64_t default_seed) {
  if (call.name != "elastic")
    throw InvalidSpec("expected elastic(...), got '" + call.name + "'");
  text::ArgReader args(call);
  ElasticSpec spec;
  spec.alpha = args.number("alpha", kElasticLinePreset.alpha);
  spec.sigma = args.number("sigma", kElasticLinePreset.sigma);
  spec.seed = args.integer("seed", default_seed);
  args.finish();
  validate(spec);
  return spec;
}

ElasticSpec parse_elastic(std::string_view text, std::uint64_t default_seed) {
  return elastic_from_call(text::parse(text), default_seed);
}

} // namespace inkwarp
