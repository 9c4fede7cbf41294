#include "mscf/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mscf/features.hpp"

namespace mscf {
namespace {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingPath(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool is_separator(char c) { return c == ',' || c == ' ' || c == '\t' || c == '\r' || c == ';'; }

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_separator(line[i])) ++i;
    const std::size_t start = i;
    while (i < line.size() && !is_separator(line[i])) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

bool parse_double(std::string_view s, double& v) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool is_image_file(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg" || ext == ".bmp" || ext == ".ppm" || ext == ".pgm";
}

std::optional<long long> stem_number(const fs::path& p) {
  const std::string stem = p.stem().string();
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(stem.data(), stem.data() + stem.size(), v);
  if (ec != std::errc() || ptr != stem.data() + stem.size()) return std::nullopt;
  return v;
}

json box_json(const BoundingBox& b) { return json::array({b.x, b.y, b.w, b.h}); }

BoundingBox box_from_json(const json& j) {
  if (!j.is_array() || j.size() != 4) throw std::invalid_argument("box must be [x,y,w,h]");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
}

}  // namespace

std::vector<TruthBox> parse_groundtruth(std::string_view text) {
  std::vector<TruthBox> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    const auto fields = split_fields(line);
    if (fields.empty()) continue;
    if (fields.size() != 4) throw ParseError("expected 4 fields x,y,w,h", line_no);
    double v[4];
    bool absent = false;
    for (int i = 0; i < 4; ++i) {
      if (!parse_double(fields[i], v[i])) throw ParseError("not a number: '" + std::string(fields[i]) + "'", line_no);
      if (std::isnan(v[i])) absent = true;
      else if (!std::isfinite(v[i])) throw ParseError("infinite value", line_no);
    }
    if (absent) {
      out.emplace_back(std::nullopt);
      continue;
    }
    if (!(v[2] > 0.0 && v[3] > 0.0)) {
      // zero-size rows are the other common absent-target marker
      out.emplace_back(std::nullopt);
      continue;
    }
    out.emplace_back(BoundingBox{v[0] - 1.0, v[1] - 1.0, v[2], v[3]});
  }
  return out;
}

std::vector<TruthBox> load_groundtruth(const fs::path& path) { return parse_groundtruth(read_text(path)); }

std::string format_groundtruth_row(const TruthBox& box) {
  if (!box) return "NaN,NaN,NaN,NaN";
  std::ostringstream os;
  os.precision(17);
  os << box->x + 1.0 << ',' << box->y + 1.0 << ',' << box->w << ',' << box->h;
  return os.str();
}

std::vector<fs::path> list_frames(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw MissingPath(dir);
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && is_image_file(e.path())) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end(), [](const fs::path& a, const fs::path& b) {
    const auto na = stem_number(a);
    const auto nb = stem_number(b);
    if (na && nb && *na != *nb) return *na < *nb;
    if (na.has_value() != nb.has_value()) return na.has_value();
    return a.filename() < b.filename();
  });
  return files;
}

fs::path frames_dir_of(const fs::path& dir) {
  const fs::path img = dir / "img";
  return fs::is_directory(img) ? img : dir;
}

fs::path find_groundtruth(const fs::path& dir) {
  if (!fs::is_directory(dir)) return {};
  std::vector<fs::path> hits;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().filename().string().find("groundtruth") != std::string::npos) {
      hits.push_back(e.path());
    }
  }
  std::sort(hits.begin(), hits.end());
  return hits.empty() ? fs::path{} : hits.front();
}

std::vector<std::string> load_attributes(const fs::path& dir) {
  const fs::path p = dir / "attributes.txt";
  if (!fs::is_regular_file(p)) return {};
  std::string text = read_text(p);
  std::replace(text.begin(), text.end(), '\n', ' ');
  std::vector<std::string> tags;
  for (auto f : split_fields(text)) tags.emplace_back(f);
  return tags;
}

std::vector<SequenceSpec> discover_sequences(const fs::path& root) {
  if (!fs::is_directory(root)) throw MissingPath(root);
  std::vector<SequenceSpec> out;
  for (const auto& e : fs::directory_iterator(root)) {
    if (!e.is_directory()) continue;
    const fs::path gt = find_groundtruth(e.path());
    if (gt.empty()) continue;
    out.push_back({frames_dir_of(e.path()), gt, e.path().filename().string(), load_attributes(e.path())});
  }
  std::sort(out.begin(), out.end(), [](const SequenceSpec& a, const SequenceSpec& b) { return a.name < b.name; });
  return out;
}

LoadedSequence load_sequence(const SequenceSpec& spec, std::vector<std::string>* warnings) {
  if (!fs::exists(spec.groundtruth)) throw MissingPath(spec.groundtruth);
  if (!fs::is_directory(spec.frames_dir)) throw MissingPath(spec.frames_dir);
  LoadedSequence seq{spec.name, FrameSource(list_frames(spec.frames_dir)), load_groundtruth(spec.groundtruth),
                     spec.attributes};
  if (seq.frames.size() != seq.truth.size()) {
    const std::size_t n = std::min(seq.frames.size(), seq.truth.size());
    if (warnings) {
      warnings->push_back("sequence '" + spec.name + "': " + std::to_string(seq.frames.size()) + " frames but " +
                          std::to_string(seq.truth.size()) + " truth rows; truncated to " + std::to_string(n));
    }
    seq.frames.truncate(n);
    seq.truth.resize(n);
  }
  if (seq.truth.empty()) throw std::invalid_argument("sequence '" + spec.name + "' has no frames");
  return seq;
}

std::shared_ptr<const CnTable> load_cn_for(const MscfConfig& cfg) {
  if (!cfg.use_cn || cfg.cn_table.empty()) return nullptr;
  if (!fs::exists(cfg.cn_table)) throw MissingPath(cfg.cn_table);
  return std::make_shared<const CnTable>(CnTable::load(cfg.cn_table));
}

namespace {

template <typename LoadFrame>
TrackRun run_frames(const std::string& name, std::size_t n, LoadFrame&& load, const BoundingBox& first,
                    const MscfConfig& cfg, std::shared_ptr<const CnTable> cn) {
  TrackRun run;
  run.name = name;
  run.reports.reserve(n);
  const Image f0 = load(0);
  const auto start = Clock::now();
  TrackerState state = init(f0, first, cfg, std::move(cn));
  FrameReport first_report;
  first_report.box = first;
  first_report.trained = true;
  first_report.elapsed = std::chrono::duration<double>(Clock::now() - start).count();
  run.reports.push_back(first_report);
  for (std::size_t i = 1; i < n; ++i) run.reports.push_back(track(state, load(i)));
  return run;
}

}  // namespace

TrackRun run_tracker(const LoadedSequence& seq, const MscfConfig& cfg, std::shared_ptr<const CnTable> cn) {
  if (seq.truth.empty() || !seq.truth.front()) {
    throw std::invalid_argument("sequence '" + seq.name + "': first ground-truth row must hold a box");
  }
  return run_frames(seq.name, seq.frames.size(), [&](std::size_t i) { return seq.frames.load(i); },
                    *seq.truth.front(), cfg, std::move(cn));
}

TrackRun run_tracker(const std::string& name, const std::vector<Image>& frames, const BoundingBox& first,
                     const MscfConfig& cfg, std::shared_ptr<const CnTable> cn) {
  if (frames.empty()) throw std::invalid_argument("no frames");
  return run_frames(name, frames.size(), [&](std::size_t i) -> const Image& { return frames[i]; }, first, cfg,
                    std::move(cn));
}

std::string track_json(const TrackRun& run, bool omit_timing) {
  json frames = json::array();
  for (const auto& r : run.reports) {
    frames.push_back({{"box", box_json(r.box)},
                      {"response_max", r.response_max},
                      {"mtf", r.mtf},
                      {"trained", r.trained},
                      {"elapsed", omit_timing ? 0.0 : r.elapsed}});
  }
  json doc = {{"schema", 1}, {"sequence", run.name}, {"frames", std::move(frames)}};
  return doc.dump(1) + "\n";
}

TrackRun parse_track_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), 0);
  }
  if (!doc.is_object() || doc.value("schema", 0) != 1) throw std::invalid_argument("unsupported prediction schema");
  TrackRun run;
  run.name = doc.value("sequence", std::string{});
  for (const auto& f : doc.at("frames")) {
    FrameReport r;
    r.box = box_from_json(f.at("box"));
    r.response_max = f.at("response_max").get<double>();
    r.mtf = f.at("mtf").get<double>();
    r.trained = f.at("trained").get<bool>();
    r.elapsed = f.at("elapsed").get<double>();
    run.reports.push_back(r);
  }
  return run;
}

SequenceResult make_result(const TrackRun& run, const std::vector<TruthBox>& truth) {
  const std::size_t n = std::min(run.reports.size(), truth.size());
  SequenceResult res;
  for (std::size_t i = 0; i < n; ++i) {
    res.predicted.push_back(run.reports[i].box);
    res.truth.push_back(truth[i]);
    res.elapsed_per_frame.push_back(run.reports[i].elapsed);
  }
  return res;
}

std::string summary_json(const SequenceMetrics& m) {
  json doc = {{"schema", 1},       {"sequence", m.name},     {"precision20", m.precision20},
              {"auc", m.auc},      {"fps", m.fps},           {"mean_cle", m.mean_cle},
              {"frames", m.frames}, {"excluded", m.excluded}};
  return doc.dump(1) + "\n";
}

}  // namespace mscf
