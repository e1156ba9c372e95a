#include "inkwarp/synth.hpp"

#include "inkwarp/draw.hpp"
#include "inkwarp/error.hpp"
#include "inkwarp/png_io.hpp"
#include "inkwarp/random.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

namespace inkwarp {

namespace fs = std::filesystem;

std::string_view to_string(Character c) {
  switch (c) {
  case Character::Giraffe:
    return "giraffe";
  case Character::Flower:
    return "flower";
  case Character::Dragon:
    return "dragon";
  }
  return "giraffe";
}

Character parse_character(std::string_view name) {
  if (name == "giraffe")
    return Character::Giraffe;
  if (name == "flower")
    return Character::Flower;
  if (name == "dragon")
    return Character::Dragon;
  throw Error("unknown character '" + std::string(name) + "' (giraffe, flower, dragon)");
}

namespace {

// All drawing happens on a 256 canvas scaled by k; shapes stay within about
// 100 px of the center so disk-gated warps meet only white paper at r = 1.
struct Pen {
  GrayImage* img;
  double k;
  double thickness;

  void line(double x0, double y0, double x1, double y1) const {
    draw_line(*img, x0 * k, y0 * k, x1 * k, y1 * k, thickness * k);
  }
  void ellipse(double cx, double cy, double rx, double ry, double angle = 0.0) const {
    draw_ellipse(*img, cx * k, cy * k, rx * k, ry * k, thickness * k, angle);
  }
  void blot(double cx, double cy, double rx, double ry) const {
    fill_ellipse(*img, cx * k, cy * k, rx * k, ry * k);
  }
};

StageImages giraffe(SplitMix64& rng, int size) {
  const double k = size / 256.0;
  const double bx = rng.uniform(118, 132), by = rng.uniform(148, 158);
  const double brx = rng.uniform(36, 44), bry = rng.uniform(18, 24);
  const double neck_top_x = bx + rng.uniform(22, 36), neck_top_y = rng.uniform(64, 76);
  const double neck_x = bx + brx * 0.6, neck_y = by - bry * 0.6;
  const double leg_len = rng.uniform(42, 50);

  GrayImage a(size, size);
  Pen pen{&a, k, 2.5};
  pen.ellipse(bx, by, brx, bry);
  pen.line(neck_x, neck_y, neck_top_x, neck_top_y);
  pen.line(neck_x + 10, neck_y + 6, neck_top_x + 9, neck_top_y + 4);
  pen.ellipse(neck_top_x + 10, neck_top_y - 4, 14, 8, -0.2);
  pen.line(neck_top_x + 4, neck_top_y - 11, neck_top_x + 2, neck_top_y - 20);
  for (const double f : {-0.75, -0.45, 0.45, 0.75}) {
    const double lx = bx + f * brx;
    const double ly = by + bry * std::sqrt(1.0 - f * f);
    pen.line(lx, ly, lx + rng.uniform(-4, 4), ly + leg_len);
  }

  GrayImage b = a;
  pen.img = &b;
  const int strands = 6 + static_cast<int>(rng.uniform(0, 3));
  for (int i = 0; i < strands; ++i) {
    const double t = (i + 0.5) / strands;
    const double x = neck_x + t * (neck_top_x - neck_x);
    const double y = neck_y + t * (neck_top_y - neck_y);
    pen.line(x, y, x - 9, y - 3);
  }
  const double tx = bx - brx, ty = by - 4;
  pen.line(tx, ty, tx - 14, ty + 26);
  pen.blot(tx - 15, ty + 30, 4, 6);

  GrayImage c = b;
  pen.img = &c;
  const int spots = 7 + static_cast<int>(rng.uniform(0, 4));
  for (int i = 0; i < spots; ++i) {
    const double ang = rng.uniform(0, 2 * std::numbers::pi);
    const double rad = std::sqrt(rng.uniform(0.05, 0.55));
    pen.blot(bx + rad * brx * std::cos(ang), by + rad * bry * std::sin(ang), rng.uniform(3, 5),
             rng.uniform(2.5, 4));
  }
  for (const double t : {0.3, 0.6}) {
    pen.blot(neck_x + 5 + t * (neck_top_x - neck_x), neck_y + 3 + t * (neck_top_y - neck_y), 2.5,
             3);
  }
  return {std::move(a), std::move(b), std::move(c)};
}

StageImages flower(SplitMix64& rng, int size) {
  const double k = size / 256.0;
  const double cx = rng.uniform(118, 138), cy = rng.uniform(100, 116);
  const double cr = rng.uniform(12, 18);

  GrayImage a(size, size);
  Pen pen{&a, k, 2.5};
  pen.ellipse(cx, cy, cr, cr);
  const double sx = cx + rng.uniform(-10, 10);
  pen.line(cx, cy + cr, sx, 212);
  const double ly = rng.uniform(160, 185);
  const double lside = rng.bernoulli(0.5) ? 1.0 : -1.0;
  const double lx = cx + (sx - cx) * (ly - cy - cr) / (212 - cy - cr);
  pen.ellipse(lx + lside * 14, ly - 4, 14, 5, lside * -0.5);

  GrayImage b = a;
  pen.img = &b;
  const int petals = 5 + static_cast<int>(rng.uniform(0, 4));
  const double plen = rng.uniform(20, 30);
  const double phase = rng.uniform(0, 2 * std::numbers::pi);
  for (int i = 0; i < petals; ++i) {
    const double ang = phase + 2 * std::numbers::pi * i / petals;
    const double d = cr + plen * 0.55;
    pen.ellipse(cx + d * std::cos(ang), cy + d * std::sin(ang), plen * 0.55, plen * 0.25, ang);
  }
  return {std::move(a), std::move(b), std::nullopt};
}

StageImages dragon(SplitMix64& rng, int size) {
  const double k = size / 256.0;
  const double bx = rng.uniform(116, 130), by = rng.uniform(138, 150);
  const double brx = rng.uniform(38, 46), bry = rng.uniform(20, 26);
  const double hx = bx + brx + rng.uniform(14, 20), hy = by - bry - rng.uniform(8, 14);

  GrayImage a(size, size);
  Pen pen{&a, k, 2.5};
  pen.ellipse(bx, by, brx, bry, rng.uniform(-0.1, 0.1));
  pen.line(bx + brx * 0.8, by - bry * 0.5, hx - 6, hy + 4);
  pen.ellipse(hx, hy, 13, 8, 0.15);
  // tail as a polyline curling down and back
  double px = bx - brx, py = by;
  const double curl = rng.uniform(0.5, 0.9);
  for (int i = 1; i <= 6; ++i) {
    const double t = i / 6.0;
    const double x = bx - brx - 40 * t, y = by + 30 * std::sin(curl * std::numbers::pi * t);
    pen.line(px, py, x, y);
    px = x;
    py = y;
  }
  for (const double f : {-0.5, 0.5}) {
    const double lx = bx + f * brx, ly = by + bry * std::sqrt(1.0 - f * f);
    pen.line(lx, ly, lx + 6, ly + 22);
    pen.line(lx + 6, ly + 22, lx + 14, ly + 22);
  }

  GrayImage b = a;
  pen.img = &b;
  const int spikes = 5 + static_cast<int>(rng.uniform(0, 3));
  const double spike_h = rng.uniform(8, 13);
  for (int i = 0; i < spikes; ++i) {
    const double t0 = std::numbers::pi * (0.2 + 0.6 * i / spikes);
    const double t1 = std::numbers::pi * (0.2 + 0.6 * (i + 1) / spikes);
    const double x0 = bx - brx * std::cos(t0), y0 = by - bry * std::sin(t0);
    const double x1 = bx - brx * std::cos(t1), y1 = by - bry * std::sin(t1);
    const double mx = (x0 + x1) / 2, my = (y0 + y1) / 2 - spike_h;
    pen.line(x0, y0, mx, my);
    pen.line(mx, my, x1, y1);
  }

  GrayImage c = b;
  pen.img = &c;
  const double wx = bx + rng.uniform(-8, 8), wy = by - bry;
  const double span = rng.uniform(40, 55);
  pen.line(wx, wy, wx - 10, wy - span);
  pen.line(wx - 10, wy - span, wx + 30, wy - span * 0.6);
  pen.line(wx + 30, wy - span * 0.6, wx + 22, wy - 4);
  pen.line(wx - 10, wy - span, wx + 12, wy - 6);
  return {std::move(a), std::move(b), std::move(c)};
}

} // namespace

StageImages synth_drawing(Character kind, int index, int size) {
  if (size < 16)
    throw Error("synthetic drawings need size >= 16");
  SplitMix64 rng(mix_keys(fnv1a(to_string(kind)), static_cast<std::uint64_t>(index)));
  switch (kind) {
  case Character::Giraffe:
    return giraffe(rng, size);
  case Character::Flower:
    return flower(rng, size);
  case Character::Dragon:
    return dragon(rng, size);
  }
  return giraffe(rng, size);
}

std::vector<StageTuple> write_synth_set(Character kind, int count, const fs::path& dir, int size) {
  fs::create_directories(dir);
  std::vector<StageTuple> tuples;
  for (int i = 1; i <= count; ++i) {
    char id[64];
    std::snprintf(id, sizeof id, "%s%02d", std::string(to_string(kind)).c_str(), i);
    const StageImages img = synth_drawing(kind, i, size);
    StageTuple t{id, dir / (std::string(id) + "_A.png"), dir / (std::string(id) + "_B.png"), {}};
    save_png(img.a, t.stage_a);
    save_png(img.b, t.stage_b);
    if (img.c) {
      t.stage_c = dir / (std::string(id) + "_C.png");
      save_png(*img.c, *t.stage_c);
    }
    tuples.push_back(std::move(t));
  }
  return tuples;
}

} // namespace inkwarp
