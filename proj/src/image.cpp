#include "mscf/image.hpp"

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include <stdexcept>

namespace mscf {

Image::Image(int width, int height, std::uint8_t fill)
    : width_(width), height_(height), pixels_(static_cast<std::size_t>(width) * height * 3, fill) {
  if (width < 1 || height < 1) throw std::invalid_argument("image dimensions must be >= 1");
}

Image::Image(int width, int height, std::vector<std::uint8_t> rgb)
    : width_(width), height_(height), pixels_(std::move(rgb)) {
  if (width < 1 || height < 1) throw std::invalid_argument("image dimensions must be >= 1");
  if (pixels_.size() != static_cast<std::size_t>(width) * height * 3) {
    throw std::invalid_argument("image buffer must hold width*height*3 bytes");
  }
}

Image read_image(const std::filesystem::path& path) {
  cv::Mat bgr = cv::imread(path.string(), cv::IMREAD_COLOR);
  if (bgr.empty()) throw std::runtime_error("cannot decode image '" + path.string() + "'");
  cv::Mat rgb;
  cv::cvtColor(bgr, rgb, cv::COLOR_BGR2RGB);
  if (!rgb.isContinuous()) rgb = rgb.clone();
  std::vector<std::uint8_t> bytes(rgb.data, rgb.data + rgb.total() * 3);
  return Image(rgb.cols, rgb.rows, std::move(bytes));
}

void write_image(const std::filesystem::path& path, const Image& img) {
  cv::Mat rgb(img.height(), img.width(), CV_8UC3, const_cast<std::uint8_t*>(img.bytes().data()));
  cv::Mat bgr;
  cv::cvtColor(rgb, bgr, cv::COLOR_RGB2BGR);
  if (!cv::imwrite(path.string(), bgr)) throw std::runtime_error("cannot write image '" + path.string() + "'");
}

}  // namespace mscf
