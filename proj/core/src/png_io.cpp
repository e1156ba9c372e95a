#include "inkwarp/png_io.hpp"

#include "inkwarp/error.hpp"

#include <png.h>

#include <cstdio>
#include <memory>
#include <string>

namespace inkwarp {
namespace {

struct ImageGuard {
  png_image* image;
  ~ImageGuard() { png_image_free(image); }
};

struct FileCloser {
  void operator()(std::FILE* f) const noexcept { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

// Composite one 8-bit channel over white.
int over_white(int c, int a) {
  return (c * a + 255 * (255 - a) + 127) / 255;
}

} // namespace

GrayImage load_png(const std::filesystem::path& path) {
  FilePtr file(std::fopen(path.c_str(), "rb"));
  if (!file)
    throw IoError("cannot open '" + path.string() + "' for reading");

  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  ImageGuard guard{&image};
  if (!png_image_begin_read_from_stdio(&image, file.get()))
    throw DecodeError("'" + path.string() + "': " + image.message);
  if (image.width == 0 || image.height == 0)
    throw DecodeError("'" + path.string() + "': empty image");

  image.format = PNG_FORMAT_RGBA;
  std::vector<png_byte> rgba(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, rgba.data(), 0, nullptr))
    throw DecodeError("'" + path.string() + "': " + image.message);

  const int w = static_cast<int>(image.width);
  const int h = static_cast<int>(image.height);
  std::vector<std::uint8_t> gray(static_cast<std::size_t>(w) * static_cast<std::size_t>(h));
  for (std::size_t i = 0; i < gray.size(); ++i) {
    const png_byte* p = &rgba[4 * i];
    const int a = p[3];
    const int r = over_white(p[0], a);
    const int g = over_white(p[1], a);
    const int b = over_white(p[2], a);
    gray[i] = static_cast<std::uint8_t>((299 * r + 587 * g + 114 * b + 500) / 1000);
  }
  return GrayImage(w, h, std::move(gray));
}

void save_png(const GrayImage& img, const std::filesystem::path& path) {
  if (img.empty())
    throw IoError("refusing to write an empty image to '" + path.string() + "'");
  FilePtr file(std::fopen(path.c_str(), "wb"));
  if (!file)
    throw IoError("cannot open '" + path.string() + "' for writing");

  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width());
  image.height = static_cast<png_uint_32>(img.height());
  image.format = PNG_FORMAT_GRAY;
  ImageGuard guard{&image};
  if (!png_image_write_to_stdio(&image, file.get(), 0, img.pixels().data(), img.width(),
                                nullptr))
    throw IoError("'" + path.string() + "': " + image.message);
  if (std::fflush(file.get()) != 0)
    throw IoError("'" + path.string() + "': write failed");
}

} // namespace inkwarp
