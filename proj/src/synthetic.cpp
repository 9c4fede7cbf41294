#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

#include <json.hpp>

#include "mscf/harness.hpp"

namespace mscf {
namespace {

using json = nlohmann::json;

constexpr int kBlock = 4;  // texture block edge, pixels

// Raw engine output only, so the byte stream does not depend on the
// standard library's distribution implementations.
std::uint8_t next_byte(std::mt19937& rng) { return static_cast<std::uint8_t>(rng() >> 24); }

struct Texture {
  int w = 0;
  int h = 0;
  std::vector<std::uint8_t> rgb;
  const std::uint8_t* at(int x, int y) const { return rgb.data() + 3 * (static_cast<std::size_t>(y) * w + x); }
};

Texture block_texture(int w, int h, std::uint32_t seed) {
  std::mt19937 rng(seed);
  const int bw = (w + kBlock - 1) / kBlock;
  const int bh = (h + kBlock - 1) / kBlock;
  std::vector<std::uint8_t> blocks(static_cast<std::size_t>(bw) * bh * 3);
  for (auto& b : blocks) b = next_byte(rng);
  Texture t{w, h, std::vector<std::uint8_t>(static_cast<std::size_t>(w) * h * 3)};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::uint8_t* src = blocks.data() + 3 * (static_cast<std::size_t>(y / kBlock) * bw + x / kBlock);
      std::copy(src, src + 3, t.rgb.data() + 3 * (static_cast<std::size_t>(y) * w + x));
    }
  }
  return t;
}

// Zero-mean mix with correlation `s` against the target texture.
Texture correlated_texture(const Texture& target, double s, std::uint32_t seed) {
  const Texture noise = block_texture(target.w, target.h, seed);
  const double k = std::sqrt(std::max(0.0, 1.0 - s * s));
  Texture out = target;
  for (std::size_t i = 0; i < out.rgb.size(); ++i) {
    const double v = 127.5 + s * (target.rgb[i] - 127.5) + k * (noise.rgb[i] - 127.5);
    out.rgb[i] = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
  }
  return out;
}

Image noise_background(int w, int h, std::uint32_t seed) {
  std::mt19937 rng(seed);
  Image img(w, h);
  for (auto& b : img.bytes()) b = static_cast<std::uint8_t>(112 + (rng() >> 27));
  return img;
}

void paste(Image& img, const Texture& t, int left, int top) {
  for (int y = 0; y < t.h; ++y) {
    const int fy = top + y;
    if (fy < 0 || fy >= img.height()) continue;
    for (int x = 0; x < t.w; ++x) {
      const int fx = left + x;
      if (fx < 0 || fx >= img.width()) continue;
      std::copy(t.at(x, y), t.at(x, y) + 3, img.pixel(fx, fy));
    }
  }
}

// Position on [0, span] after reflecting at both ends.
double reflect(double p, double span) {
  if (span <= 0.0) return 0.0;
  double q = std::fmod(p, 2.0 * span);
  if (q < 0.0) q += 2.0 * span;
  return q > span ? 2.0 * span - q : q;
}

}  // namespace

void SynthSpec::validate() const {
  if (frame_width < 1 || frame_height < 1) throw ConfigError("frame_size must be positive");
  if (target_width < 1 || target_height < 1) throw ConfigError("target_size must be positive");
  if (target_width > frame_width || target_height > frame_height) throw ConfigError("target does not fit in frame");
  if (n_frames < 1) throw ConfigError("n_frames must be >= 1");
  if (!std::isfinite(velocity_x) || !std::isfinite(velocity_y)) throw ConfigError("velocity must be finite");
  if (distractor) {
    if (distractor->appear_frame < 1) throw ConfigError("distractor.appear_frame must be >= 1");
    if (!(distractor->similarity >= -1.0 && distractor->similarity <= 1.0)) {
      throw ConfigError("distractor.similarity must lie in [-1,1]");
    }
  }
}

SyntheticSequence generate_synthetic(const SynthSpec& spec) {
  spec.validate();
  const auto seed = static_cast<std::uint32_t>(spec.texture_seed ^ (spec.texture_seed >> 32));
  const Texture target = block_texture(spec.target_width, spec.target_height, seed);
  const Image background = noise_background(spec.frame_width, spec.frame_height, seed ^ 0x9e3779b9u);
  std::optional<Texture> distractor;
  if (spec.distractor) distractor = correlated_texture(target, spec.distractor->similarity, seed ^ 0x85ebca6bu);

  const double span_x = spec.frame_width - spec.target_width;
  const double span_y = spec.frame_height - spec.target_height;
  const double x0 = std::floor(span_x / 2.0);
  const double y0 = std::floor(span_y / 2.0);

  SyntheticSequence out;
  out.frames.reserve(spec.n_frames);
  out.truth.reserve(spec.n_frames);
  for (int k = 0; k < spec.n_frames; ++k) {
    const double x = std::round(reflect(x0 + spec.velocity_x * k, span_x));
    const double y = std::round(reflect(y0 + spec.velocity_y * k, span_y));
    Image frame = background;
    if (distractor && k + 1 >= spec.distractor->appear_frame) {
      paste(frame, *distractor, static_cast<int>(std::lround(x + spec.distractor->offset_x)),
            static_cast<int>(std::lround(y + spec.distractor->offset_y)));
    }
    paste(frame, target, static_cast<int>(x), static_cast<int>(y));
    out.frames.push_back(std::move(frame));
    out.truth.push_back({x, y, static_cast<double>(spec.target_width), static_cast<double>(spec.target_height)});
  }
  return out;
}

SynthSpec parse_synth_spec(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), 0);
  }
  SynthSpec s;
  try {
    if (doc.contains("frame_size")) {
      s.frame_width = doc["frame_size"].at(0).get<int>();
      s.frame_height = doc["frame_size"].at(1).get<int>();
    }
    if (doc.contains("target_size")) {
      s.target_width = doc["target_size"].at(0).get<int>();
      s.target_height = doc["target_size"].at(1).get<int>();
    }
    if (doc.contains("velocity")) {
      s.velocity_x = doc["velocity"].at(0).get<double>();
      s.velocity_y = doc["velocity"].at(1).get<double>();
    }
    s.texture_seed = doc.value("texture_seed", s.texture_seed);
    s.n_frames = doc.value("n_frames", s.n_frames);
    if (doc.contains("distractor") && !doc["distractor"].is_null()) {
      const json& d = doc["distractor"];
      Distractor dist;
      dist.appear_frame = d.value("appear_frame", dist.appear_frame);
      if (d.contains("offset")) {
        dist.offset_x = d["offset"].at(0).get<double>();
        dist.offset_y = d["offset"].at(1).get<double>();
      }
      dist.similarity = d.value("similarity", dist.similarity);
      s.distractor = dist;
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("synthetic spec: ") + e.what());
  }
  s.validate();
  return s;
}

std::string synth_spec_json(const SynthSpec& s) {
  json doc = {{"frame_size", {s.frame_width, s.frame_height}},
              {"target_size", {s.target_width, s.target_height}},
              {"velocity", {s.velocity_x, s.velocity_y}},
              {"texture_seed", s.texture_seed},
              {"n_frames", s.n_frames}};
  if (s.distractor) {
    doc["distractor"] = {{"appear_frame", s.distractor->appear_frame},
                         {"offset", {s.distractor->offset_x, s.distractor->offset_y}},
                         {"similarity", s.distractor->similarity}};
  }
  return doc.dump(1) + "\n";
}

void write_synthetic(const SyntheticSequence& seq, const SynthSpec& spec, const fs::path& out_dir) {
  const fs::path img_dir = out_dir / "img";
  fs::create_directories(img_dir);
  char name[32];
  for (std::size_t i = 0; i < seq.frames.size(); ++i) {
    std::snprintf(name, sizeof(name), "%04zu.png", i + 1);
    write_image(img_dir / name, seq.frames[i]);
  }
  std::ofstream gt(out_dir / "groundtruth_rect.txt");
  for (const auto& b : seq.truth) gt << format_groundtruth_row(b) << '\n';
  std::ofstream(out_dir / "spec.json") << synth_spec_json(spec);
  if (!gt) throw std::runtime_error("failed to write " + (out_dir / "groundtruth_rect.txt").string());
}

}  // namespace mscf
