#include "mscf/cli.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "mscf/config_io.hpp"
#include "mscf/eval.hpp"
#include "mscf/harness.hpp"

namespace mscf {
namespace {

using json = nlohmann::json;

struct CliFailure {
  int code;
  std::string kind;
  std::string message;
  std::string path;
};

void fail_line(std::ostream& err, const CliFailure& f) {
  json j = {{"error", f.kind}, {"message", f.message}};
  if (!f.path.empty()) j["path"] = f.path;
  err << j.dump() << '\n';
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw MissingPath(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + p.string());
}

MscfConfig resolve_config(const std::string& path, std::ostream& err) {
  std::vector<std::string> warnings;
  MscfConfig cfg;
  if (!path.empty()) {
    if (!fs::exists(path)) throw MissingPath(path);
    cfg = load_config(path, &warnings);
  }
  apply_env_overrides(cfg, &warnings);
  cfg.validate();
  for (const auto& w : warnings) err << "warning: " << w << '\n';
  return cfg;
}

SequenceSpec spec_for(const fs::path& seq_dir, const fs::path& gt) {
  return {frames_dir_of(seq_dir), gt, seq_dir.filename().string(), load_attributes(seq_dir)};
}

int cmd_track(const std::string& seq, const std::string& gt, const std::string& config, const std::string& out_path,
              bool omit_timing, std::ostream& out, std::ostream& err) {
  if (!fs::is_directory(seq)) throw MissingPath(seq);
  if (!fs::exists(gt)) throw MissingPath(gt);
  const MscfConfig cfg = resolve_config(config, err);
  std::vector<std::string> warnings;
  const LoadedSequence loaded = load_sequence(spec_for(seq, gt), &warnings);
  for (const auto& w : warnings) err << "warning: " << w << '\n';
  const TrackRun run = run_tracker(loaded, cfg, load_cn_for(cfg));
  write_file(out_path, track_json(run, omit_timing));
  out << "tracked " << run.reports.size() << " frames -> " << out_path << '\n';
  return kExitOk;
}

void write_eval(const std::string& prefix, const SequenceResult& res, const std::string& name) {
  write_file(prefix + "_precision.csv", curve_csv(precision_curve(res)));
  write_file(prefix + "_success.csv", curve_csv(success_auc(res).curve));
  write_file(prefix + "_summary.json", summary_json(summarize(name, res)));
}

int cmd_eval(const std::string& pred, const std::string& gt, const std::string& prefix, std::ostream& out) {
  if (!fs::exists(pred)) throw MissingPath(pred);
  if (!fs::exists(gt)) throw MissingPath(gt);
  const TrackRun run = parse_track_json(slurp(pred));
  const auto truth = load_groundtruth(gt);
  const SequenceResult res = make_result(run, truth);
  write_eval(prefix, res, run.name);
  const SequenceMetrics m = summarize(run.name, res);
  out << "precision20=" << m.precision20 << " auc=" << m.auc << " fps=" << m.fps << '\n';
  return kExitOk;
}

json metrics_json(const SequenceMetrics& m) {
  return {{"name", m.name},       {"precision20", m.precision20}, {"auc", m.auc},          {"fps", m.fps},
          {"mean_cle", m.mean_cle}, {"frames", m.frames},         {"excluded", m.excluded}};
}

int cmd_bench(const std::string& root, const std::string& out_dir, const std::string& config,
              const std::vector<std::string>& attrs, int jobs, bool omit_timing, std::ostream& out,
              std::ostream& err) {
  const MscfConfig cfg = resolve_config(config, err);
  std::vector<SequenceSpec> specs = discover_sequences(root);
  if (!attrs.empty()) {
    std::erase_if(specs, [&](const SequenceSpec& s) {
      return std::none_of(attrs.begin(), attrs.end(), [&](const std::string& a) {
        return std::find(s.attributes.begin(), s.attributes.end(), a) != s.attributes.end();
      });
    });
  }
  if (specs.empty()) throw std::invalid_argument("no sequences found under " + root);
  const auto cn = load_cn_for(cfg);
  fs::create_directories(out_dir);

  std::vector<SequenceMetrics> metrics(specs.size());
  std::vector<std::string> errors(specs.size());
  std::vector<std::vector<std::string>> warnings(specs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < specs.size(); i = next++) {
      try {
        const LoadedSequence seq = load_sequence(specs[i], &warnings[i]);
        TrackRun run = run_tracker(seq, cfg, cn);
        // reproducible output: fps is then reported as 0 as well
        if (omit_timing) {
          for (auto& r : run.reports) r.elapsed = 0.0;
        }
        write_file(fs::path(out_dir) / (seq.name + ".json"), track_json(run));
        const SequenceResult res = make_result(run, seq.truth);
        write_eval((fs::path(out_dir) / seq.name).string(), res, seq.name);
        metrics[i] = summarize(seq.name, res);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  const int n_workers = std::clamp(jobs, 1, static_cast<int>(specs.size()));
  std::vector<std::thread> pool;
  for (int w = 1; w < n_workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (std::size_t i = 0; i < specs.size(); ++i) {
    for (const auto& w : warnings[i]) err << "warning: " << w << '\n';
    if (!errors[i].empty()) throw std::runtime_error("sequence '" + specs[i].name + "': " + errors[i]);
  }
  json per_seq = json::array();
  for (std::size_t i = 0; i < specs.size(); ++i) {
    json j = metrics_json(metrics[i]);
    j["attributes"] = specs[i].attributes;
    per_seq.push_back(std::move(j));
  }
  const SequenceMetrics mean = aggregate(metrics);
  json doc = {{"schema", 1}, {"sequences", std::move(per_seq)}, {"mean", metrics_json(mean)}};
  write_file(fs::path(out_dir) / "summary.json", doc.dump(1) + "\n");
  out << specs.size() << " sequences: precision20=" << mean.precision20 << " auc=" << mean.auc << '\n';
  return kExitOk;
}

int cmd_synth(const std::string& spec_path, const std::string& out_dir, std::ostream& out) {
  SynthSpec spec;
  if (!spec_path.empty()) spec = parse_synth_spec(slurp(spec_path));
  const SyntheticSequence seq = generate_synthetic(spec);
  write_synthetic(seq, spec, out_dir);
  out << "wrote " << seq.frames.size() << " frames -> " << out_dir << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mutation-sensitive correlation filter tracker", "mscf"};
  app.require_subcommand(1);

  std::string seq, gt, config, out_path, pred, prefix, root, spec_path;
  std::vector<std::string> attrs;
  bool omit_timing = false;
  int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  auto* track = app.add_subcommand("track", "Track one sequence and write per-frame reports as JSON");
  track->add_option("--seq", seq, "Sequence directory (frames, or a directory with img/)")->required();
  track->add_option("--gt", gt, "Ground-truth file; its first row initializes the tracker")->required();
  track->add_option("--config", config, "Config file (key = value)");
  track->add_option("--out", out_path, "Output JSON")->required();
  track->add_flag("--omit-timing", omit_timing, "Write elapsed as 0 for reproducible output");

  auto* ev = app.add_subcommand("eval", "Precision/success curves and summary for a prediction file");
  ev->add_option("--pred", pred, "Prediction JSON written by track")->required();
  ev->add_option("--gt", gt, "Ground-truth file")->required();
  ev->add_option("--out-csv", prefix, "Output prefix for <prefix>_precision.csv, _success.csv, _summary.json")
      ->required();

  auto* bench = app.add_subcommand("bench", "Track and evaluate every sequence under a dataset root");
  bench->add_option("--root", root, "Dataset root (one directory per sequence)")->required();
  bench->add_option("--out", out_path, "Output directory")->required();
  bench->add_option("--config", config, "Config file (key = value)");
  bench->add_option("--attr", attrs, "Keep only sequences carrying one of these attribute tags");
  bench->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  bench->add_flag("--omit-timing", omit_timing, "Write elapsed and fps as 0 for reproducible output");

  auto* synth = app.add_subcommand("synth", "Render a synthetic sequence");
  synth->add_option("--spec", spec_path, "Synthetic spec JSON (defaults when omitted)");
  synth->add_option("--out", out_path, "Output directory")->required();

  std::vector<const char*> argv{"mscf"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    fail_line(err, {kExitUsage, "usage", e.what(), ""});
    return kExitUsage;
  }

  CliFailure failure{kExitOk, "", "", ""};
  try {
    if (*track) return cmd_track(seq, gt, config, out_path, omit_timing, out, err);
    if (*ev) return cmd_eval(pred, gt, prefix, out);
    if (*bench) return cmd_bench(root, out_path, config, attrs, jobs, omit_timing, out, err);
    if (*synth) return cmd_synth(spec_path, out_path, out);
  } catch (const MissingPath& e) {
    failure = {kExitMissingPath, "missing_path", e.what(), e.path().string()};
  } catch (const ParseError& e) {
    failure = {kExitBadInput, "parse", e.what(), ""};
  } catch (const ConfigError& e) {
    failure = {kExitBadInput, "config", e.what(), ""};
  } catch (const std::invalid_argument& e) {
    failure = {kExitBadInput, "invalid_input", e.what(), ""};
  } catch (const std::exception& e) {
    failure = {kExitFailure, "failure", e.what(), ""};
  }
  fail_line(err, failure);
  return failure.code;
}

}  // namespace mscf
