#include "inkwarp/warp.hpp"

#include "inkwarp/error.hpp"

#include <algorithm>
#include <cmath>

namespace inkwarp {

bool operator==(const Compose& a, const Compose& b) {
  return a.steps == b.steps;
}

DomainMode default_domain(const WarpSpec::Kind& kind) {
  return std::visit(
      [](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, XStretch> || std::is_same_v<T, YStretch> ||
                      std::is_same_v<T, Spherical> || std::is_same_v<T, Daisy>)
          return DomainMode::Disk;
        else
          return DomainMode::Square;
      },
      kind);
}

WarpSpec::WarpSpec(Kind k) : kind(std::move(k)), domain(default_domain(kind)) {}

namespace {

bool finite(double v) { return std::isfinite(v); }

constexpr double kMinSkewDet = 1e-9;

void validate_impl(const WarpSpec& spec) {
  std::visit(
      [](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Daisy>) {
          if (!finite(k.exponent) || k.exponent <= 0)
            throw InvalidSpec("daisy exponent must be a positive finite number");
        } else if constexpr (std::is_same_v<T, Affine>) {
          if (!finite(k.rotation) || !finite(k.translate_x) || !finite(k.translate_y))
            throw InvalidSpec("affine parameters must be finite");
          if (!finite(k.scale_x) || !finite(k.scale_y) || k.scale_x <= 0 || k.scale_y <= 0)
            throw InvalidSpec("affine scale factors must be positive");
        } else if constexpr (std::is_same_v<T, Skew>) {
          if (!finite(k.shear_x) || !finite(k.shear_y))
            throw InvalidSpec("skew factors must be finite");
          if (std::abs(1.0 - k.shear_x * k.shear_y) < kMinSkewDet)
            throw InvalidSpec("skew is singular (shear_x * shear_y == 1)");
        } else if constexpr (std::is_same_v<T, Compose>) {
          if (k.steps.empty())
            throw InvalidSpec("compose needs at least one step");
          for (const auto& s : k.steps)
            validate_impl(s);
        }
      },
      spec.kind);
}

using Leaf = SampleMap::Leaf;

// Appends leaves in evaluation order: the last forward step is sampled first.
void flatten(const WarpSpec& spec, std::vector<Leaf>& out) {
  const bool disk = spec.domain == DomainMode::Disk;
  std::visit(
      [&](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        Leaf leaf{};
        leaf.disk = disk;
        if constexpr (std::is_same_v<T, XStretch>) {
          leaf.op = Leaf::Op::XStretch;
        } else if constexpr (std::is_same_v<T, YStretch>) {
          leaf.op = Leaf::Op::YStretch;
        } else if constexpr (std::is_same_v<T, Spherical>) {
          leaf.op = Leaf::Op::Spherical;
        } else if constexpr (std::is_same_v<T, Daisy>) {
          leaf.op = Leaf::Op::Daisy;
          leaf.exponent = k.exponent;
        } else if constexpr (std::is_same_v<T, Affine>) {
          // Inverse of T * R * F * S: S^-1 * F * R^-1 * (p - t).
          const double c = std::cos(k.rotation);
          const double s = std::sin(k.rotation);
          const double fx = k.flip_x ? -1.0 : 1.0;
          const double fy = k.flip_y ? -1.0 : 1.0;
          leaf.op = Leaf::Op::Linear;
          leaf.m00 = fx * c / k.scale_x;
          leaf.m01 = fx * s / k.scale_x;
          leaf.m10 = -fy * s / k.scale_y;
          leaf.m11 = fy * c / k.scale_y;
          leaf.tx = k.translate_x;
          leaf.ty = k.translate_y;
        } else if constexpr (std::is_same_v<T, Skew>) {
          const double det = 1.0 - k.shear_x * k.shear_y;
          leaf.op = Leaf::Op::Linear;
          leaf.m00 = 1.0 / det;
          leaf.m01 = -k.shear_x / det;
          leaf.m10 = -k.shear_y / det;
          leaf.m11 = 1.0 / det;
        } else if constexpr (std::is_same_v<T, Compose>) {
          for (auto it = k.steps.rbegin(); it != k.steps.rend(); ++it)
            flatten(*it, out);
          return;
        }
        out.push_back(leaf);
      },
      spec.kind);
}

NormPoint eval_leaf(const Leaf& leaf, NormPoint p) {
  if (leaf.disk && std::hypot(p.x, p.y) > 1.0)
    return {std::clamp(p.x, -1.0, 1.0), std::clamp(p.y, -1.0, 1.0)};

  NormPoint q = p;
  switch (leaf.op) {
  case Leaf::Op::XStretch:
    q.x = p.x * std::abs(p.x);
    break;
  case Leaf::Op::YStretch:
    q.y = p.y * std::abs(p.y);
    break;
  case Leaf::Op::Spherical:
    q.x = p.x * std::hypot(p.x, p.y);
    break;
  case Leaf::Op::Daisy: {
    const double r = std::hypot(p.x, p.y);
    if (r == 0.0)
      break;
    const double f = std::pow(r, leaf.exponent - 1.0);
    q.x = p.x * f;
    q.y = p.y * f;
    break;
  }
  case Leaf::Op::Linear: {
    const double dx = p.x - leaf.tx;
    const double dy = p.y - leaf.ty;
    q.x = leaf.m00 * dx + leaf.m01 * dy;
    q.y = leaf.m10 * dx + leaf.m11 * dy;
    break;
  }
  }
  return {std::clamp(q.x, -1.0, 1.0), std::clamp(q.y, -1.0, 1.0)};
}

} // namespace

void validate(const WarpSpec& spec) {
  validate_impl(spec);
}

SampleMap::SampleMap(const WarpSpec& spec) {
  validate(spec);
  flatten(spec, leaves_);
}

NormPoint SampleMap::operator()(NormPoint p) const {
  for (const Leaf& leaf : leaves_)
    p = eval_leaf(leaf, p);
  return p;
}

SampleMap sample_map(const WarpSpec& spec) {
  return SampleMap(spec);
}

NormPoint warp_point(const WarpSpec& spec, NormPoint p) {
  return SampleMap(spec)(p);
}

GrayImage apply_warp(const GrayImage& img, const WarpSpec& spec, int jobs) {
  const SampleMap map(spec);
  if (!img.is_square())
    throw NonSquareInput("apply_warp expects a square image, got " + std::to_string(img.width()) +
                         "x" + std::to_string(img.height()));
  const SampleGrid grid = build_norm_grid(img.width(), img.height(), map, jobs);
  return resample(img, grid, jobs);
}

// ---------------------------------------------------------------------------
// Text form

namespace {

const char* domain_name(DomainMode d) {
  return d == DomainMode::Disk ? "disk" : "square";
}

std::string bool_text(bool b) { return b ? "true" : "false"; }

void append(std::string& out, const WarpSpec& spec) {
  using text::format_number;
  std::vector<std::string> args;
  std::string name;
  std::visit(
      [&](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, XStretch>) {
          name = "xstretch";
        } else if constexpr (std::is_same_v<T, YStretch>) {
          name = "ystretch";
        } else if constexpr (std::is_same_v<T, Spherical>) {
          name = "spherical";
        } else if constexpr (std::is_same_v<T, Daisy>) {
          name = "daisy";
          args.push_back("p=" + format_number(k.exponent));
        } else if constexpr (std::is_same_v<T, Affine>) {
          name = "affine";
          args.push_back("rot=" + format_number(k.rotation));
          args.push_back("sx=" + format_number(k.scale_x));
          args.push_back("sy=" + format_number(k.scale_y));
          args.push_back("tx=" + format_number(k.translate_x));
          args.push_back("ty=" + format_number(k.translate_y));
          args.push_back("flipx=" + bool_text(k.flip_x));
          args.push_back("flipy=" + bool_text(k.flip_y));
        } else if constexpr (std::is_same_v<T, Skew>) {
          name = "skew";
          args.push_back("kx=" + format_number(k.shear_x));
          args.push_back("ky=" + format_number(k.shear_y));
        } else if constexpr (std::is_same_v<T, Compose>) {
          name = "compose";
        }
      },
      spec.kind);

  if (const auto* c = std::get_if<Compose>(&spec.kind)) {
    out += "compose[";
    for (std::size_t i = 0; i < c->steps.size(); ++i) {
      if (i)
        out += ';';
      append(out, c->steps[i]);
    }
    out += ']';
    return;
  }
  if (spec.domain != default_domain(spec.kind))
    args.push_back(std::string("domain=") + domain_name(spec.domain));
  out += name;
  out += '(';
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i)
      out += ',';
    out += args[i];
  }
  out += ')';
}

DomainMode read_domain(text::ArgReader& args, DomainMode fallback) {
  const std::string d = args.word("domain", domain_name(fallback));
  if (d == "disk")
    return DomainMode::Disk;
  if (d == "square")
    return DomainMode::Square;
  throw InvalidSpec("domain must be 'disk' or 'square', got '" + d + "'");
}

} // namespace

std::string to_string(const WarpSpec& spec) {
  std::string out;
  append(out, spec);
  return out;
}

bool is_warp_name(std::string_view name) {
  return name == "xstretch" || name == "ystretch" || name == "spherical" || name == "daisy" ||
         name == "affine" || name == "skew" || name == "compose";
}

WarpSpec warp_from_call(const text::Call& call) {
  if (call.name == "compose") {
    Compose c;
    for (const auto& child : call.children)
      c.steps.push_back(warp_from_call(child));
    WarpSpec spec(std::move(c));
    validate(spec);
    return spec;
  }

  text::ArgReader args(call);
  WarpSpec::Kind kind;
  if (call.name == "xstretch") {
    kind = XStretch{};
  } else if (call.name == "ystretch") {
    kind = YStretch{};
  } else if (call.name == "spherical") {
    kind = Spherical{};
  } else if (call.name == "daisy") {
    kind = Daisy{args.number("p", 3.0)};
  } else if (call.name == "affine") {
    Affine a;
    a.rotation = args.number("rot", 0.0);
    a.scale_x = args.number("sx", 1.0);
    a.scale_y = args.number("sy", 1.0);
    a.translate_x = args.number("tx", 0.0);
    a.translate_y = args.number("ty", 0.0);
    a.flip_x = args.flag("flipx", false);
    a.flip_y = args.flag("flipy", false);
    kind = a;
  } else if (call.name == "skew") {
    kind = Skew{args.number("kx", 0.0), args.number("ky", 0.0)};
  } else {
    throw InvalidSpec("unknown transform '" + call.name + "' at offset " +
                      std::to_string(call.offset));
  }
  const DomainMode domain = read_domain(args, default_domain(kind));
  args.finish();
  WarpSpec spec(std::move(kind), domain);
  validate(spec);
  return spec;
}

WarpSpec parse_warp(std::string_view text) {
  return warp_from_call(text::parse(text));
}

} // namespace inkwarp
