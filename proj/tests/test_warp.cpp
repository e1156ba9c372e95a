#include "support.hpp"

#include "inkwarp/error.hpp"
#include "inkwarp/warp.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace inkwarp;
using namespace inkwarp::testing;

namespace {

constexpr double kPi = std::numbers::pi;

void expect_point(NormPoint got, double x, double y, double tol = 1e-12) {
  EXPECT_NEAR(got.x, x, tol);
  EXPECT_NEAR(got.y, y, tol);
}

} // namespace

TEST(SampleMap, XStretchHalvesAwayFromEdges) {
  expect_point(sample_map(WarpSpec(XStretch{}))({0.5, 0.3}), 0.25, 0.3);
}

TEST(SampleMap, SphericalFixesUnitCircle) {
  expect_point(sample_map(WarpSpec(Spherical{}))({0.6, 0.8}), 0.6, 0.8);
}

TEST(SampleMap, DaisyCubesRadiusKeepsAngle) {
  const NormPoint p{0.5 * std::cos(kPi / 4), 0.5 * std::sin(kPi / 4)};
  const NormPoint s = sample_map(WarpSpec(Daisy{3.0}))(p);
  EXPECT_NEAR(std::hypot(s.x, s.y), 0.125, 1e-12);
  EXPECT_NEAR(std::atan2(s.y, s.x), kPi / 4, 1e-12);
}

TEST(WarpPoint, YStretchKeepsSign) {
  expect_point(warp_point(WarpSpec(YStretch{}), {0.3, -0.5}), 0.3, -0.25);
}

TEST(WarpPoint, ComposedStretchesSquareTwice) {
  const WarpSpec twice(Compose{{WarpSpec(XStretch{}), WarpSpec(XStretch{})}});
  expect_point(warp_point(twice, {0.5, 0}), 0.0625, 0);
  expect_point(warp_point(twice, {-0.5, 0}), -0.0625, 0);
}

TEST(WarpPoint, AffineMatchesRotationMatrixOracle) {
  // Forward convention: counter-clockwise with y up, so (1, 0) -> (0, 1).
  // Sampling uses the inverse rotation.
  const double theta = kPi / 2;
  const double rinv[2][2] = {{std::cos(-theta), -std::sin(-theta)},
                             {std::sin(-theta), std::cos(-theta)}};
  const NormPoint got = warp_point(WarpSpec(Affine{theta}), {1, 0});
  expect_point(got, rinv[0][0] * 1 + rinv[0][1] * 0, rinv[1][0] * 1 + rinv[1][1] * 0);
  expect_point(got, 0, -1);
}

TEST(WarpPoint, AffineFullMatchesMatrixInverseOracle) {
  SplitMix64 rng(77);
  for (int i = 0; i < 200; ++i) {
    Affine a;
    a.rotation = rng.uniform(-3, 3);
    a.scale_x = rng.uniform(0.5, 2);
    a.scale_y = rng.uniform(0.5, 2);
    a.translate_x = rng.uniform(-0.2, 0.2);
    a.translate_y = rng.uniform(-0.2, 0.2);
    a.flip_x = rng.bernoulli(0.5);
    a.flip_y = rng.bernoulli(0.5);
    // forward M = R * F * S; sampling point = M^-1 (q - t)
    const double c = std::cos(a.rotation), s = std::sin(a.rotation);
    const double fsx = (a.flip_x ? -1 : 1) * a.scale_x, fsy = (a.flip_y ? -1 : 1) * a.scale_y;
    const double m00 = c * fsx, m01 = -s * fsy, m10 = s * fsx, m11 = c * fsy;
    const double det = m00 * m11 - m01 * m10;
    const NormPoint q{rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3)};
    const double dx = q.x - a.translate_x, dy = q.y - a.translate_y;
    const double ex = (m11 * dx - m01 * dy) / det, ey = (-m10 * dx + m00 * dy) / det;
    if (std::abs(ex) >= 1 || std::abs(ey) >= 1)
      continue; // clamped
    expect_point(warp_point(WarpSpec(a), q), ex, ey, 1e-12);
  }
}

TEST(WarpPoint, SkewInvertsForwardShear) {
  const Skew k{0.2, -0.1};
  const NormPoint p{0.3, -0.4};
  const NormPoint fwd{p.x + k.shear_x * p.y, p.y + k.shear_y * p.x};
  expect_point(warp_point(WarpSpec(k), fwd), p.x, p.y, 1e-12);
}

TEST(WarpPoint, DiskModeLeavesOutsideUntouched) {
  for (const WarpSpec& s : {WarpSpec(XStretch{}), WarpSpec(YStretch{}), WarpSpec(Spherical{}),
                            WarpSpec(Daisy{2.0})}) {
    expect_point(warp_point(s, {0.9, 0.9}), 0.9, 0.9, 0);
    expect_point(warp_point(s, {0, 0}), 0, 0, 0);
  }
}

TEST(WarpPoint, SquareModeClampsSource) {
  const WarpSpec s(Spherical{}, DomainMode::Square);
  const NormPoint p = warp_point(s, {0.95, 0.95});
  EXPECT_LE(p.x, 1.0);
  EXPECT_DOUBLE_EQ(p.x, 1.0);
}

TEST(WarpProperties, AxisMonotonicityOnDenseGrid) {
  const int n = 1024;
  for (const DomainMode dom : {DomainMode::Disk, DomainMode::Square}) {
    const WarpSpec xs(XStretch{}, dom), ys(YStretch{}, dom), daisy(Daisy{3.0}, dom);
    double prev_x = -2, prev_y = -2, prev_r = -1;
    for (int i = 0; i < n; ++i) {
      const double t = -1 + 2.0 * i / (n - 1);
      const double x = warp_point(xs, {t, 0}).x;
      const double y = warp_point(ys, {0, t}).y;
      EXPECT_GT(x, prev_x);
      EXPECT_GT(y, prev_y);
      prev_x = x;
      prev_y = y;
      const double r = i / (n - 1.0);
      const NormPoint d = warp_point(daisy, {r * 0.6, r * 0.8});
      const double rr = std::hypot(d.x, d.y);
      if (i > 0)
        EXPECT_GT(rr, prev_r);
      prev_r = rr;
    }
  }
}

TEST(WarpProperties, BoundaryAndCenterFixity) {
  SplitMix64 rng(9);
  for (int i = 0; i < 200; ++i) {
    const double th = rng.uniform(0, 2 * kPi);
    const NormPoint on_circle{std::cos(th), std::sin(th)};
    for (const WarpSpec& s : {WarpSpec(Spherical{}), WarpSpec(Daisy{rng.uniform(0.5, 3)})}) {
      const NormPoint q = warp_point(s, on_circle);
      EXPECT_LT(std::hypot(q.x - on_circle.x, q.y - on_circle.y), 1e-12);
    }
    // The stretches fix their own axis boundary: |x| = 1 (resp. |y| = 1).
    const double t = rng.uniform(-1, 1);
    const WarpSpec xs(XStretch{}, DomainMode::Square), ys(YStretch{}, DomainMode::Square);
    expect_point(warp_point(xs, {1, t}), 1, t, 1e-12);
    expect_point(warp_point(xs, {-1, t}), -1, t, 1e-12);
    expect_point(warp_point(ys, {t, 1}), t, 1, 1e-12);
    expect_point(warp_point(ys, {t, -1}), t, -1, 1e-12);
  }
  for (const WarpSpec& s : {WarpSpec(XStretch{}), WarpSpec(YStretch{}), WarpSpec(Spherical{}),
                            WarpSpec(Daisy{0.7})})
    EXPECT_EQ(warp_point(s, {0, 0}), (NormPoint{0, 0}));
}

TEST(WarpProperties, CompositionIsAssociative) {
  SplitMix64 rng(21);
  for (int i = 0; i < 100; ++i) {
    const WarpSpec a = random_warp(rng), b = random_warp(rng), c = random_warp(rng);
    const WarpSpec left(Compose{{a, WarpSpec(Compose{{b, c}})}});
    const WarpSpec right(Compose{{WarpSpec(Compose{{a, b}}), c}});
    const NormPoint p{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const NormPoint l = warp_point(left, p), r = warp_point(right, p);
    EXPECT_NEAR(l.x, r.x, 1e-12);
    EXPECT_NEAR(l.y, r.y, 1e-12);
  }
}

TEST(ApplyWarp, IdentityAffineIsPixelExact) {
  SplitMix64 rng(4);
  for (const int size : {16, 63, 256}) {
    const GrayImage img = random_image(rng, size, size);
    EXPECT_EQ(apply_warp(img, WarpSpec::identity()), img);
  }
}

TEST(ApplyWarp, WhiteStaysWhite) {
  SplitMix64 rng(8);
  const GrayImage white(256, 256);
  for (int i = 0; i < 20; ++i)
    EXPECT_EQ(apply_warp(white, random_warp(rng)), white);
}

TEST(ApplyWarp, XStretchMovesPixelToSquareRoot) {
  GrayImage img(256, 256);
  const int col = 160; // normalized x = 2 * 160.5 / 256 - 1
  img.at(col, 127) = 0;
  img.at(col, 128) = 0;
  const double x_src = 2.0 * (col + 0.5) / 256 - 1;
  const GrayImage out = apply_warp(img, WarpSpec(XStretch{}));
  double cx, cy;
  ASSERT_TRUE(darkness_centroid(out, cx, cy));
  const double x_out = 2.0 * (cx + 0.5) / 256 - 1;
  EXPECT_NEAR(x_out, std::sqrt(x_src), 2.0 / 256); // within one pixel
  EXPECT_NEAR(x_out, 0.5, 0.01);
  EXPECT_NEAR(cy, 127.5, 0.5);
}

TEST(ApplyWarp, RejectsNonSquareAndInvalidSpecs) {
  EXPECT_THROW(apply_warp(GrayImage(10, 12), WarpSpec(XStretch{})), NonSquareInput);
  EXPECT_THROW(apply_warp(GrayImage(8, 8), WarpSpec(Daisy{0})), InvalidSpec);
  EXPECT_THROW(apply_warp(GrayImage(8, 8), WarpSpec(Affine{0, -1})), InvalidSpec);
  EXPECT_THROW(apply_warp(GrayImage(8, 8), WarpSpec(Compose{})), InvalidSpec);
  EXPECT_THROW(validate(WarpSpec(Skew{2, 0.5})), InvalidSpec);
}

TEST(ApplyWarp, NumericInverseRecoversSmoothImages) {
  SplitMix64 rng(31);
  for (int i = 0; i < 25; ++i) {
    const WarpSpec spec = random_warp(rng);
    const GrayImage img = blob_image(128, rng.next());
    const GrayImage back = apply_inverse_warp(apply_warp(img, spec), spec);
    EXPECT_GE(psnr(img, back), 30.0) << to_string(spec);
  }
}

TEST(WarpText, CanonicalFormsRoundTrip) {
  EXPECT_EQ(to_string(WarpSpec(XStretch{})), "xstretch()");
  EXPECT_EQ(to_string(WarpSpec(XStretch{}, DomainMode::Square)), "xstretch(domain=square)");
  EXPECT_EQ(to_string(WarpSpec(Daisy{})), "daisy(p=3)");
  EXPECT_EQ(to_string(WarpSpec(Affine{0.1, 1.05, 0.95, 0.02})),
            "affine(rot=0.1,sx=1.05,sy=0.95,tx=0.02,ty=0,flipx=false,flipy=false)");
  EXPECT_EQ(to_string(WarpSpec(Compose{{WarpSpec(Affine{}), WarpSpec(Spherical{})}})),
            "compose[affine(rot=0,sx=1,sy=1,tx=0,ty=0,flipx=false,flipy=false);spherical()]");

  SplitMix64 rng(44);
  for (int i = 0; i < 200; ++i) {
    const WarpSpec spec = random_warp(rng);
    EXPECT_EQ(parse_warp(to_string(spec)), spec) << to_string(spec);
  }
}

TEST(WarpText, AcceptsSpacingAndDefaults) {
  EXPECT_EQ(parse_warp(" compose [ affine( rot = 0.5 ) ; ystretch( ) ] "),
            WarpSpec(Compose{{WarpSpec(Affine{0.5}), WarpSpec(YStretch{})}}));
  EXPECT_EQ(parse_warp("xstretch(domain=disk)"), WarpSpec(XStretch{}));
  EXPECT_EQ(parse_warp("affine(flipx=true)"), WarpSpec(Affine{0, 1, 1, 0, 0, true}));
}

TEST(WarpText, DiagnosticsNameTheBadToken) {
  auto message = [](const char* text) {
    try {
      parse_warp(text);
    } catch (const InvalidSpec& e) {
      return std::string(e.what());
    }
    return std::string("<no error>");
  };
  EXPECT_NE(message("bogus()").find("bogus"), std::string::npos);
  EXPECT_NE(message("compose[xstretch();wobble()]").find("wobble"), std::string::npos);
  EXPECT_NE(message("affine(spin=1)").find("spin"), std::string::npos);
  EXPECT_NE(message("affine(rot=1,rot=2)").find("rot"), std::string::npos);
  EXPECT_NE(message("daisy(p=abc)").find("abc"), std::string::npos);
  EXPECT_NE(message("xstretch(domain=cube)").find("cube"), std::string::npos);
  EXPECT_NE(message("xstretch(").find("<no error>"), 0u);
  EXPECT_NE(message("compose[]").find("<no error>"), 0u);
  EXPECT_NE(message("daisy(p=0)").find("<no error>"), 0u);
  EXPECT_NE(message("xstretch() trailing").find("<no error>"), 0u);
}
