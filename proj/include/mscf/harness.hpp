#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mscf/core.hpp"
#include "mscf/eval.hpp"
#include "mscf/image.hpp"
#include "mscf/tracker.hpp"

namespace mscf {

namespace fs = std::filesystem;

/// Ground truth entry; nullopt marks a frame whose target is absent.
using TruthBox = std::optional<BoundingBox>;

struct SequenceSpec {
  fs::path frames_dir;
  fs::path groundtruth;
  std::string name;
  std::vector<std::string> attributes;
};

/// One box per line, x,y,w,h separated by commas, tabs or spaces. Input is
/// 1-based and returned 0-based. A row containing NaN yields nullopt. Blank
/// lines are skipped. Throws ParseError carrying the 1-based line number.
std::vector<TruthBox> parse_groundtruth(std::string_view text);
std::vector<TruthBox> load_groundtruth(const fs::path& path);

/// Inverse of parse_groundtruth for a single row (NaN row for nullopt).
std::string format_groundtruth_row(const TruthBox& box);

/// Image files of a directory sorted by the number in their stem (name order
/// breaks ties and orders non-numeric names last).
std::vector<fs::path> list_frames(const fs::path& dir);

/// Frames are decoded on demand.
class FrameSource {
 public:
  explicit FrameSource(std::vector<fs::path> paths) : paths_(std::move(paths)) {}
  std::size_t size() const { return paths_.size(); }
  Image load(std::size_t i) const { return read_image(paths_.at(i)); }
  const fs::path& path(std::size_t i) const { return paths_.at(i); }
  void truncate(std::size_t n) { paths_.resize(std::min(n, paths_.size())); }

 private:
  std::vector<fs::path> paths_;
};

struct LoadedSequence {
  std::string name;
  FrameSource frames;
  std::vector<TruthBox> truth;
  std::vector<std::string> attributes;
};

/// Throws std::runtime_error naming the path when a file is missing. On a
/// frame/truth count mismatch both are truncated to the shorter length and a
/// message is appended to `warnings`.
LoadedSequence load_sequence(const SequenceSpec& spec, std::vector<std::string>* warnings = nullptr);

/// Frames directory of a sequence: `dir/img` when present, else `dir`.
fs::path frames_dir_of(const fs::path& dir);

/// First regular file in `dir` whose name contains "groundtruth"; empty if none.
fs::path find_groundtruth(const fs::path& dir);

/// Tags from the optional `attributes.txt` sidecar (comma or whitespace separated).
std::vector<std::string> load_attributes(const fs::path& dir);

/// Every subdirectory of `root` holding frames and a ground-truth file, by name.
std::vector<SequenceSpec> discover_sequences(const fs::path& root);

/// Missing input file or directory; the CLI maps this to exit code 2.
class MissingPath : public std::runtime_error {
 public:
  explicit MissingPath(const fs::path& p)
      : std::runtime_error("no such file or directory: " + p.string()), path_(p) {}
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

// ---- tracking runs ------------------------------------------------------

struct TrackRun {
  std::string name;
  std::vector<FrameReport> reports;
};

/// Runs one-pass tracking from the first truth box. Timing covers init/track
/// only. Throws std::invalid_argument if the first truth row is absent.
TrackRun run_tracker(const LoadedSequence& seq, const MscfConfig& cfg, std::shared_ptr<const CnTable> cn = nullptr);

/// Same run over frames already in memory.
TrackRun run_tracker(const std::string& name, const std::vector<Image>& frames, const BoundingBox& first,
                     const MscfConfig& cfg, std::shared_ptr<const CnTable> cn = nullptr);

/// Loads the color-name table named by the config, or returns null when none is set.
std::shared_ptr<const CnTable> load_cn_for(const MscfConfig& cfg);

/// {"schema":1,"sequence":...,"frames":[{box,response_max,mtf,trained,elapsed}]}.
/// Boxes are 0-based [x,y,w,h]. With omit_timing every elapsed is written as 0.
std::string track_json(const TrackRun& run, bool omit_timing = false);
TrackRun parse_track_json(std::string_view text);

SequenceResult make_result(const TrackRun& run, const std::vector<TruthBox>& truth);

std::string summary_json(const SequenceMetrics& m);

// ---- synthetic sequences ------------------------------------------------

struct Distractor {
  int appear_frame = 40;  // 1-based frame number of first appearance
  double offset_x = 40.0;  // relative to the target's top-left, pixels
  double offset_y = 0.0;
  double similarity = 0.9;  // texture correlation with the target
};

struct SynthSpec {
  int frame_width = 128;
  int frame_height = 128;
  int target_width = 24;
  int target_height = 24;
  double velocity_x = 2.0;
  double velocity_y = 1.0;
  std::uint64_t texture_seed = 1;
  int n_frames = 100;
  std::optional<Distractor> distractor;

  /// Throws ConfigError when the target does not fit or a count is non-positive.
  void validate() const;
};

struct SyntheticSequence {
  std::vector<Image> frames;
  std::vector<BoundingBox> truth;  // 0-based, exact
};

/// Textured rectangle moving at constant velocity (reflecting at the borders)
/// over static noise. Positions are rounded to whole pixels. Bit-identical for
/// equal specs.
SyntheticSequence generate_synthetic(const SynthSpec& spec);

SynthSpec parse_synth_spec(std::string_view json_text);
std::string synth_spec_json(const SynthSpec& spec);

/// Writes img/0001.png ..., groundtruth_rect.txt (1-based) and spec.json.
void write_synthetic(const SyntheticSequence& seq, const SynthSpec& spec, const fs::path& out_dir);

}  // namespace mscf
