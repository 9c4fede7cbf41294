#include "mscf/config_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace mscf {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double to_double(std::string_view key, std::string_view v) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw ConfigError("config key '" + std::string(key) + "': not a number: '" + std::string(v) + "'");
  }
  return out;
}

int to_int(std::string_view key, std::string_view v) {
  int out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw ConfigError("config key '" + std::string(key) + "': not an integer: '" + std::string(v) + "'");
  }
  return out;
}

bool to_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("config key '" + std::string(key) + "': not a boolean: '" + std::string(v) + "'");
}

std::string fmt_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

using Setter = std::function<void(MscfConfig&, std::string_view, std::string_view)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = [] {
    std::map<std::string, Setter, std::less<>> m;
    auto real = [&m](const char* name, double MscfConfig::*field) {
      m[name] = [field](MscfConfig& c, std::string_view k, std::string_view v) { c.*field = to_double(k, v); };
    };
    auto integer = [&m](const char* name, int MscfConfig::*field) {
      m[name] = [field](MscfConfig& c, std::string_view k, std::string_view v) { c.*field = to_int(k, v); };
    };
    auto flag = [&m](const char* name, bool MscfConfig::*field) {
      m[name] = [field](MscfConfig& c, std::string_view k, std::string_view v) { c.*field = to_bool(k, v); };
    };
    real("lambda1", &MscfConfig::lambda1);
    real("lambda2", &MscfConfig::lambda2);
    real("phi", &MscfConfig::phi);
    real("mu0", &MscfConfig::mu0);
    real("mu_max", &MscfConfig::mu_max);
    real("beta", &MscfConfig::beta);
    integer("admm_iters", &MscfConfig::admm_iters);
    real("theta", &MscfConfig::theta);
    real("eta", &MscfConfig::theta);
    real("nu", &MscfConfig::nu);
    real("delta", &MscfConfig::delta);
    real("pedestal_ratio", &MscfConfig::pedestal_ratio);
    real("pedestal_altitude", &MscfConfig::pedestal_altitude);
    real("learning_rate", &MscfConfig::learning_rate);
    integer("train_interval", &MscfConfig::train_interval);
    integer("cell_size", &MscfConfig::cell_size);
    real("search_padding", &MscfConfig::search_padding);
    real("output_sigma_factor", &MscfConfig::output_sigma_factor);
    real("d_min", &MscfConfig::d_min);
    integer("max_grid_cells", &MscfConfig::max_grid_cells);
    flag("use_hog", &MscfConfig::use_hog);
    flag("use_cn", &MscfConfig::use_cn);
    flag("use_gray", &MscfConfig::use_gray);
    flag("mtf_feedback", &MscfConfig::mtf_feedback);
    flag("subpixel", &MscfConfig::subpixel);
    m["d_min_mode"] = [](MscfConfig& c, std::string_view k, std::string_view v) {
      if (v == "half_diagonal") {
        c.d_min_mode = DMinMode::HalfDiagonal;
      } else if (v == "fixed") {
        c.d_min_mode = DMinMode::Fixed;
      } else {
        throw ConfigError("config key '" + std::string(k) + "': expected half_diagonal or fixed");
      }
    };
    m["cn_table"] = [](MscfConfig& c, std::string_view, std::string_view v) { c.cn_table = std::string(v); };
    return m;
  }();
  return table;
}

}  // namespace

void set_config_value(MscfConfig& cfg, std::string_view key, std::string_view value,
                      std::vector<std::string>* warnings) {
  if (key == "gamma" || key == "gamma_max") {
    if (warnings) warnings->push_back("config key '" + std::string(key) + "' has no effect and is ignored");
    return;
  }
  const auto& table = setters();
  auto it = table.find(key);
  if (it == table.end()) throw ConfigError("unknown config key '" + std::string(key) + "'");
  it->second(cfg, key, value);
}

MscfConfig parse_config(std::string_view text, std::vector<std::string>* warnings) {
  MscfConfig cfg;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    try {
      set_config_value(cfg, key, value, warnings);
    } catch (const ConfigError& e) {
      throw ConfigError("config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  cfg.validate();
  return cfg;
}

MscfConfig load_config(const std::filesystem::path& path, std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), warnings);
}

std::string format_config(const MscfConfig& c) {
  std::ostringstream os;
  auto b = [](bool v) { return v ? "true" : "false"; };
  os << "lambda1 = " << fmt_double(c.lambda1) << '\n'
     << "lambda2 = " << fmt_double(c.lambda2) << '\n'
     << "phi = " << fmt_double(c.phi) << '\n'
     << "mu0 = " << fmt_double(c.mu0) << '\n'
     << "mu_max = " << fmt_double(c.mu_max) << '\n'
     << "beta = " << fmt_double(c.beta) << '\n'
     << "admm_iters = " << c.admm_iters << '\n'
     << "theta = " << fmt_double(c.theta) << '\n'
     << "nu = " << fmt_double(c.nu) << '\n'
     << "delta = " << fmt_double(c.delta) << '\n'
     << "pedestal_ratio = " << fmt_double(c.pedestal_ratio) << '\n'
     << "pedestal_altitude = " << fmt_double(c.pedestal_altitude) << '\n'
     << "learning_rate = " << fmt_double(c.learning_rate) << '\n'
     << "train_interval = " << c.train_interval << '\n'
     << "cell_size = " << c.cell_size << '\n'
     << "search_padding = " << fmt_double(c.search_padding) << '\n'
     << "output_sigma_factor = " << fmt_double(c.output_sigma_factor) << '\n'
     << "d_min_mode = " << (c.d_min_mode == DMinMode::HalfDiagonal ? "half_diagonal" : "fixed") << '\n'
     << "d_min = " << fmt_double(c.d_min) << '\n'
     << "max_grid_cells = " << c.max_grid_cells << '\n'
     << "use_hog = " << b(c.use_hog) << '\n'
     << "use_cn = " << b(c.use_cn) << '\n'
     << "use_gray = " << b(c.use_gray) << '\n'
     << "cn_table = " << c.cn_table << '\n'
     << "mtf_feedback = " << b(c.mtf_feedback) << '\n'
     << "subpixel = " << b(c.subpixel) << '\n';
  return os.str();
}

void apply_env_overrides(MscfConfig& cfg, std::vector<std::string>* warnings) {
  for (const auto& [key, setter] : setters()) {
    std::string var = "MSCF_" + key;
    std::transform(var.begin(), var.end(), var.begin(), [](unsigned char ch) { return std::toupper(ch); });
    if (const char* v = std::getenv(var.c_str())) {
      set_config_value(cfg, key, trim(v), warnings);
    }
  }
  cfg.validate();
}

}  // namespace mscf
