#include "inkwarp/transform.hpp"

#include "inkwarp/error.hpp"

namespace inkwarp {
namespace {

void collect(const text::Call& call, std::uint64_t default_seed, Transform& out) {
  if (call.name == "compose") {
    if (call.children.empty())
      throw InvalidSpec("compose needs at least one step");
    for (const auto& child : call.children)
      collect(child, default_seed, out);
    return;
  }
  if (call.name == "elastic")
    out.steps.emplace_back(elastic_from_call(call, default_seed));
  else
    out.steps.emplace_back(warp_from_call(call));
}

} // namespace

Transform parse_transform(std::string_view text, std::uint64_t default_seed) {
  Transform t;
  collect(text::parse(text), default_seed, t);
  return t;
}

std::string to_string(const Transform& t) {
  auto step_text = [](const TransformStep& s) {
    return std::visit([](const auto& spec) { return to_string(spec); }, s);
  };
  if (t.steps.size() == 1)
    return step_text(t.steps.front());
  std::string out = "compose[";
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    if (i)
      out += ';';
    out += step_text(t.steps[i]);
  }
  out += ']';
  return out;
}

TransformSampler::TransformSampler(const Transform& t, int width, int height, int jobs)
    : width_(width), height_(height) {
  if (t.steps.empty())
    throw InvalidSpec("transform has no steps");
  if (width < 1 || height < 1)
    throw InvalidSpec("transform canvas must be non-empty");
  steps_.reserve(t.steps.size());
  for (const auto& s : t.steps) {
    Step step;
    if (const auto* w = std::get_if<WarpSpec>(&s))
      step.warp.emplace(*w);
    else
      step.field.emplace(generate_field(width, height, std::get<ElasticSpec>(s), jobs));
    steps_.push_back(std::move(step));
  }
}

NormPoint TransformSampler::operator()(NormPoint p) const {
  for (auto it = steps_.rbegin(); it != steps_.rend(); ++it) {
    if (it->warp) {
      p = (*it->warp)(p);
    } else {
      const PixelPoint px = to_pixel(p, width_, height_);
      const PixelPoint d = it->field->at(px.col, px.row);
      p = to_norm(PixelPoint{px.col + d.col, px.row + d.row}, width_, height_);
    }
  }
  return p;
}

SampleGrid TransformSampler::grid(int jobs) const {
  // A lone elastic step samples its field at exact pixel centers.
  if (steps_.size() == 1 && steps_.front().field) {
    const DisplacementField& f = *steps_.front().field;
    return build_grid(
        width_, height_,
        [&](PixelPoint p) {
          const int x = static_cast<int>(p.col), y = static_cast<int>(p.row);
          return PixelPoint{p.col + f.dx_at(x, y), p.row + f.dy_at(x, y)};
        },
        jobs);
  }
  return build_norm_grid(width_, height_, *this, jobs);
}

GrayImage apply_transform(const GrayImage& img, const Transform& t, int jobs) {
  for (const auto& s : t.steps)
    if (const auto* w = std::get_if<WarpSpec>(&s))
      validate(*w);
  if (!img.is_square())
    throw NonSquareInput("apply_transform expects a square image, got " +
                         std::to_string(img.width()) + "x" + std::to_string(img.height()));
  const TransformSampler sampler(t, img.width(), img.height(), jobs);
  return resample(img, sampler.grid(jobs), jobs);
}

} // namespace inkwarp
