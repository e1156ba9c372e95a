#pragma once

// Helpers and independent oracles shared by the unit tests and the
// acceptance binary.

#include "inkwarp/image.hpp"
#include "inkwarp/random.hpp"
#include "inkwarp/sampling.hpp"
#include "inkwarp/warp.hpp"

#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

namespace inkwarp::testing {

namespace fs = std::filesystem;

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
  explicit TempDir(const std::string& tag = "t") {
    static int counter = 0;
    path_ = fs::temp_directory_path() /
            ("inkwarp_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

private:
  fs::path path_;
};

inline GrayImage random_image(SplitMix64& rng, int w, int h) {
  GrayImage img(w, h);
  for (auto& v : img.pixels())
    v = static_cast<std::uint8_t>(rng.next() & 0xFF);
  return img;
}

/// Random image restricted to a handful of levels, which stresses ties.
inline GrayImage random_levels_image(SplitMix64& rng, int w, int h, int levels) {
  std::vector<std::uint8_t> palette(static_cast<std::size_t>(levels));
  for (auto& p : palette)
    p = static_cast<std::uint8_t>(rng.next() & 0xFF);
  GrayImage img(w, h);
  for (auto& v : img.pixels())
    v = palette[rng.next() % palette.size()];
  return img;
}

/// Dark Gaussian blobs on white, centered well inside the unit disk.
inline GrayImage blob_image(int size, std::uint64_t seed, int blobs = 4) {
  SplitMix64 rng(seed);
  std::vector<std::array<double, 3>> centers;
  for (int i = 0; i < blobs; ++i) {
    const double ang = rng.uniform(0, 6.283185307179586);
    const double rad = rng.uniform(0.0, 0.35) * size / 2;
    centers.push_back({size / 2.0 + rad * std::cos(ang), size / 2.0 + rad * std::sin(ang),
                       rng.uniform(0.05, 0.08) * size});
  }
  GrayImage img(size, size);
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) {
      double ink = 0;
      for (const auto& c : centers) {
        const double dx = x - c[0], dy = y - c[1];
        ink += std::exp(-(dx * dx + dy * dy) / (2 * c[2] * c[2]));
      }
      img.at(x, y) = static_cast<std::uint8_t>(std::lround(255.0 * (1.0 - std::min(ink, 1.0))));
    }
  return img;
}

/// Darkness-weighted centroid (weights 255 - v); robust for faint marks.
inline bool darkness_centroid(const GrayImage& img, double& cx, double& cy) {
  double sw = 0, sx = 0, sy = 0;
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) {
      const double w = 255.0 - img.at(x, y);
      sw += w;
      sx += w * x;
      sy += w * y;
    }
  if (sw == 0)
    return false;
  cx = sx / sw;
  cy = sy / sw;
  return true;
}

// ---------------------------------------------------------------------------
// Otsu oracle: every cut recomputed from the raw pixels.

struct BruteOtsu {
  int threshold = 0;
  double variance = 0;
};

inline BruteOtsu brute_force_otsu(const GrayImage& img) {
  const auto px = img.pixels();
  const double n = static_cast<double>(px.size());
  int first_level = px[0];
  bool single = true;
  for (const auto v : px)
    if (v != first_level) {
      single = false;
      break;
    }
  if (single)
    return {first_level, 0.0};

  BruteOtsu best{0, -1.0};
  for (int t = 0; t < 256; ++t) {
    std::uint64_t n0 = 0, n1 = 0, s0 = 0, s1 = 0;
    for (const auto v : px) {
      if (v <= t) {
        ++n0;
        s0 += v;
      } else {
        ++n1;
        s1 += v;
      }
    }
    double var = 0.0;
    if (n0 && n1) {
      const double w0 = static_cast<double>(n0) / n;
      const double w1 = static_cast<double>(n1) / n;
      const double mu0 = static_cast<double>(s0) / static_cast<double>(n0);
      const double mu1 = static_cast<double>(s1) / static_cast<double>(n1);
      var = w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
    }
    if (var > best.variance) // strict: the lowest maximizing cut wins
      best = {t, var};
  }
  return best;
}

// ---------------------------------------------------------------------------
// Numeric inverses of the backward maps, used to undo a warp.

/// Solves f(t) = target for increasing f on [lo, hi] by bisection.
template <class F>
double bisect(F&& f, double target, double lo, double hi) {
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Point p with s(p) = q for one un-gated leaf map, solved per axis (or
/// radially) by bisection on its monotone component.
inline NormPoint invert_leaf(const WarpSpec& spec, NormPoint q) {
  auto square = spec;
  square.domain = DomainMode::Square;
  return std::visit(
      [&](const auto& k) -> NormPoint {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, XStretch>) {
          return {bisect([](double t) { return t * std::abs(t); }, q.x, -1, 1), q.y};
        } else if constexpr (std::is_same_v<T, YStretch>) {
          return {q.x, bisect([](double t) { return t * std::abs(t); }, q.y, -1, 1)};
        } else if constexpr (std::is_same_v<T, Spherical>) {
          const double y = q.y;
          return {bisect([y](double t) { return t * std::hypot(t, y); }, q.x, -2, 2), y};
        } else if constexpr (std::is_same_v<T, Daisy>) {
          const double r = std::hypot(q.x, q.y);
          if (r == 0)
            return q;
          const double p = k.exponent;
          const double r0 = bisect([p](double t) { return std::pow(t, p); }, r, 0, 2);
          return {q.x * r0 / r, q.y * r0 / r};
        } else {
          // Linear leaves: the forward matrix, written out from scratch.
          if constexpr (std::is_same_v<T, Affine>) {
            const double sx = k.scale_x * (k.flip_x ? -1 : 1);
            const double sy = k.scale_y * (k.flip_y ? -1 : 1);
            const double c = std::cos(k.rotation), s = std::sin(k.rotation);
            return {c * sx * q.x - s * sy * q.y + k.translate_x,
                    s * sx * q.x + c * sy * q.y + k.translate_y};
          } else if constexpr (std::is_same_v<T, Skew>) {
            return {q.x + k.shear_x * q.y, q.y + k.shear_y * q.x};
          } else {
            return q;
          }
        }
      },
      square.kind);
}

/// Inverse sampling map of a spec: composing the warp with a warp that uses
/// this map undoes it wherever the original map is injective.
inline NormPoint inverse_point(const WarpSpec& spec, NormPoint q) {
  if (const auto* c = std::get_if<Compose>(&spec.kind)) {
    // s = s1 o s2 o ... o sn, so s^-1 = sn^-1 o ... o s1^-1: invert s1 first.
    for (const auto& step : c->steps)
      q = inverse_point(step, q);
    return q;
  }
  const NormPoint p = invert_leaf(spec, q);
  if (spec.domain == DomainMode::Disk && std::hypot(p.x, p.y) > 1.0)
    return q;
  return p;
}

inline GrayImage apply_inverse_warp(const GrayImage& img, const WarpSpec& spec) {
  const SampleGrid grid = build_norm_grid(img.width(), img.height(),
                                          [&](NormPoint p) { return inverse_point(spec, p); });
  return resample(img, grid);
}

/// A random homeomorphism, affine, skew or two-step compose.
inline WarpSpec random_warp(SplitMix64& rng, int depth = 0) {
  const int kind = static_cast<int>(rng.next() % (depth == 0 ? 7 : 6));
  const DomainMode dom = rng.bernoulli(0.5) ? DomainMode::Disk : DomainMode::Square;
  switch (kind) {
  case 0:
    return WarpSpec(XStretch{}, dom);
  case 1:
    return WarpSpec(YStretch{}, dom);
  case 2:
    return WarpSpec(Spherical{}, dom);
  case 3:
    return WarpSpec(Daisy{rng.uniform(0.5, 3.0)}, dom);
  case 4: {
    Affine a;
    a.rotation = rng.uniform(-0.3, 0.3);
    a.scale_x = rng.uniform(0.85, 1.15);
    a.scale_y = rng.uniform(0.85, 1.15);
    a.translate_x = rng.uniform(-0.08, 0.08);
    a.translate_y = rng.uniform(-0.08, 0.08);
    a.flip_x = rng.bernoulli(0.5);
    a.flip_y = rng.bernoulli(0.2);
    return WarpSpec(a);
  }
  case 5:
    return WarpSpec(Skew{rng.uniform(-0.2, 0.2), rng.uniform(-0.2, 0.2)});
  default:
    return WarpSpec(Compose{{random_warp(rng, 1), random_warp(rng, 1)}});
  }
}

// ---------------------------------------------------------------------------

inline std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (const char c : s) {
    if (c == '\'')
      out += "'\\''";
    else
      out += c;
  }
  return out + "'";
}

/// Runs a shell command, returns its exit status (-1 if it did not exit).
inline int run_shell(const std::string& command) {
  const int status = std::system(command.c_str());
  if (status == -1 || !WIFEXITED(status))
    return -1;
  return WEXITSTATUS(status);
}

inline std::string read_file(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline void write_file(const fs::path& p, const std::string& content) {
  std::ofstream f(p, std::ios::binary | std::ios::trunc);
  f << content;
}

/// Relative path -> file bytes for every regular file under `root`.
inline std::vector<std::pair<std::string, std::string>> snapshot(const fs::path& root) {
  std::vector<std::pair<std::string, std::string>> files;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file())
      files.emplace_back(fs::relative(e.path(), root).string(), read_file(e.path()));
  std::sort(files.begin(), files.end());
  return files;
}

} // namespace inkwarp::testing
