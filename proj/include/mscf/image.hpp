#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace mscf {

/// 8-bit RGB, row-major, interleaved.
class Image {
 public:
  Image() = default;
  Image(int width, int height, std::uint8_t fill = 0);
  Image(int width, int height, std::vector<std::uint8_t> rgb);

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return pixels_.empty(); }

  std::uint8_t* pixel(int x, int y) { return pixels_.data() + 3 * (static_cast<std::size_t>(y) * width_ + x); }
  const std::uint8_t* pixel(int x, int y) const {
    return pixels_.data() + 3 * (static_cast<std::size_t>(y) * width_ + x);
  }
  const std::vector<std::uint8_t>& bytes() const { return pixels_; }
  std::vector<std::uint8_t>& bytes() { return pixels_; }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

/// Decodes PNG/JPEG/PPM (anything the codec layer understands) into RGB.
Image read_image(const std::filesystem::path& path);
/// Encoding chosen from the extension; PNG is lossless.
void write_image(const std::filesystem::path& path, const Image& img);

}  // namespace mscf
