#include "tflux/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <vector>

#include "tflux/diagnostics.hpp"

#ifndef TFLUX_VERSION
#define TFLUX_VERSION "unknown"
#endif

namespace tflux {

std::string_view library_version() { return TFLUX_VERSION; }

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

// Splits a number from its unit suffix.
std::pair<double, std::string_view> number_and_unit(std::string_view text) {
  text = trim(text);
  std::string_view num = text;
  if (!num.empty() && num.front() == '+') num.remove_prefix(1);
  double v = 0.0;
  const auto r = std::from_chars(num.data(), num.data() + num.size(), v);
  if (r.ec != std::errc() || !std::isfinite(v)) throw ConfigError("malformed number '" + std::string(text) + "'");
  return {v, trim(std::string_view(r.ptr, static_cast<std::size_t>(num.data() + num.size() - r.ptr)))};
}

double time_unit(std::string_view u) {
  if (u == "s" || u == "sec") return 1.0;
  if (u == "ms") return 1e-3;
  if (u == "min") return 60.0;
  if (u == "h") return 3600.0;
  return 0.0;
}

double parse_real(std::string_view text) {
  auto [v, unit] = number_and_unit(text);
  if (!unit.empty()) throw ConfigError("unexpected suffix in '" + std::string(text) + "'");
  return v;
}

std::int64_t parse_int(std::string_view text) {
  text = trim(text);
  std::int64_t v = 0;
  const auto r = std::from_chars(text.data(), text.data() + text.size(), v);
  if (r.ec != std::errc() || r.ptr != text.data() + text.size()) {
    throw ConfigError("malformed integer '" + std::string(text) + "'");
  }
  return v;
}

std::uint64_t parse_uint(std::string_view text) {
  text = trim(text);
  std::uint64_t v = 0;
  const auto r = std::from_chars(text.data(), text.data() + text.size(), v);
  if (r.ec != std::errc() || r.ptr != text.data() + text.size()) {
    throw ConfigError("malformed unsigned integer '" + std::string(text) + "'");
  }
  return v;
}

bool parse_bool(std::string_view text) {
  text = trim(text);
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError("malformed boolean '" + std::string(text) + "'");
}

Vec3 parse_vec3(std::string_view text) {
  double c[3];
  for (int i = 0; i < 3; ++i) {
    const std::size_t comma = text.find(',');
    if ((i < 2) == (comma == std::string_view::npos)) throw ConfigError("expected 'x,y,z', got '" + std::string(text) + "'");
    c[i] = parse_real(text.substr(0, comma));
    text = i < 2 ? text.substr(comma + 1) : std::string_view{};
  }
  return {c[0], c[1], c[2]};
}

std::string fmt(double v) { return format_double(v); }
std::string fmt_opt(const std::optional<double>& v) { return v ? fmt(*v) : "none"; }
bool is_none(std::string_view v) { return trim(v) == "none"; }

struct Key {
  std::string name;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, std::string_view)> set;
};

template <class T>
std::pair<std::function<std::string(const RunConfig&)>, std::function<void(RunConfig&, std::string_view)>>
real_field(T RunConfig::*m) {
  return {[m](const RunConfig& c) { return fmt(c.*m); }, [m](RunConfig& c, std::string_view v) { c.*m = parse_real(v); }};
}

const std::vector<Key>& keys() {
  static const std::vector<Key> table = [] {
    std::vector<Key> k;
    auto real = [&k](std::string name, double RunConfig::*m) {
      auto [g, s] = real_field(m);
      k.push_back({std::move(name), g, s});
    };
    auto freq = [&k](std::string name, double RunConfig::*m) {
      k.push_back({std::move(name), [m](const RunConfig& c) { return fmt(c.*m); },
                   [m](RunConfig& c, std::string_view v) { c.*m = parse_frequency(v); }});
    };
    auto dur = [&k](std::string name, double RunConfig::*m) {
      k.push_back({std::move(name), [m](const RunConfig& c) { return fmt(c.*m); },
                   [m](RunConfig& c, std::string_view v) { c.*m = parse_duration(v); }});
    };
    auto integer = [&k](std::string name, int RunConfig::*m) {
      k.push_back({std::move(name), [m](const RunConfig& c) { return std::to_string(c.*m); },
                   [m](RunConfig& c, std::string_view v) {
                     const auto x = parse_int(v);
                     if (x < -1000000000 || x > 1000000000) throw ConfigError("integer out of range");
                     c.*m = static_cast<int>(x);
                   }});
    };
    auto flag = [&k](std::string name, bool RunConfig::*m) {
      k.push_back({std::move(name), [m](const RunConfig& c) { return std::string(c.*m ? "true" : "false"); },
                   [m](RunConfig& c, std::string_view v) { c.*m = parse_bool(v); }});
    };

    k.push_back({"geometry.delta", [](const RunConfig& c) { return fmt(c.geometry.delta); },
                 [](RunConfig& c, std::string_view v) {
                   const double R = c.geometry.R;
                   const double d = parse_real(v);
                   c.geometry = GyroGeometry::from_delta(d, R);
                 }});
    k.push_back({"geometry.radius", [](const RunConfig& c) { return fmt(c.geometry.R); },
                 [](RunConfig& c, std::string_view v) {
                   const double R = parse_real(v);
                   c.geometry = GyroGeometry::from_delta(c.geometry.delta, R);
                 }});

    freq("dynamics.spin", &RunConfig::spin_hz);
    freq("dynamics.roll", &RunConfig::roll_hz);
    k.push_back({"dynamics.polhode", [](const RunConfig& c) { return fmt_opt(c.polhode_hz); },
                 [](RunConfig& c, std::string_view v) {
                   c.polhode_hz = is_none(v) ? std::nullopt : std::optional<double>(parse_frequency(v));
                 }});
    k.push_back({"dynamics.inertia_ratio", [](const RunConfig& c) { return fmt_opt(c.inertia_ratio); },
                 [](RunConfig& c, std::string_view v) {
                   c.inertia_ratio = is_none(v) ? std::nullopt : std::optional<double>(parse_real(v));
                 }});
    real("dynamics.gamma_B", &RunConfig::gamma_B);
    real("dynamics.alpha", &RunConfig::alpha);
    real("dynamics.beta0", &RunConfig::beta0);
    real("dynamics.theta_s0", &RunConfig::theta_s0);
    real("dynamics.theta_p0", &RunConfig::theta_p0);
    real("dynamics.theta_r0", &RunConfig::theta_r0);

    k.push_back({"population.mode", [](const RunConfig& c) { return std::string(to_string(c.population.mode)); },
                 [](RunConfig& c, std::string_view v) { c.population.mode = parse_population_mode(trim(v)); }});
    k.push_back({"population.pairs", [](const RunConfig& c) { return std::to_string(c.population.n_pairs); },
                 [](RunConfig& c, std::string_view v) { c.population.n_pairs = static_cast<int>(parse_int(v)); }});
    k.push_back({"population.seed", [](const RunConfig& c) { return std::to_string(c.population.seed); },
                 [](RunConfig& c, std::string_view v) { c.population.seed = parse_uint(v); }});
    k.push_back({"population.bias_pairs", [](const RunConfig& c) { return std::to_string(c.population.bias_pairs); },
                 [](RunConfig& c, std::string_view v) { c.population.bias_pairs = static_cast<int>(parse_int(v)); }});
    k.push_back({"population.bias_flux", [](const RunConfig& c) { return fmt(c.population.bias_flux); },
                 [](RunConfig& c, std::string_view v) { c.population.bias_flux = parse_real(v); }});
    k.push_back({"population.bias_axis",
                 [](const RunConfig& c) {
                   if (!c.population.bias_axis) return std::string("none");
                   const Vec3& a = *c.population.bias_axis;
                   return fmt(a.x) + "," + fmt(a.y) + "," + fmt(a.z);
                 },
                 [](RunConfig& c, std::string_view v) {
                   c.population.bias_axis = is_none(v) ? std::nullopt : std::optional<Vec3>(parse_vec3(v));
                 }});
    k.push_back({"population.file", [](const RunConfig& c) { return c.population.file; },
                 [](RunConfig& c, std::string_view v) { c.population.file = std::string(trim(v)); }});

    k.push_back({"transfer.method", [](const RunConfig& c) { return std::string(to_string(c.method)); },
                 [](RunConfig& c, std::string_view v) { c.method = parse_transfer_method(trim(v)); }});
    integer("transfer.series_terms", &RunConfig::series_terms);

    freq("sampling.rate", &RunConfig::sample_rate);
    dur("sampling.duration", &RunConfig::duration);
    dur("sampling.t_start", &RunConfig::t_start);
    dur("sampling.block", &RunConfig::block_seconds);
    k.push_back({"sampling.path", [](const RunConfig& c) { return std::string(to_string(c.path)); },
                 [](RunConfig& c, std::string_view v) { c.path = parse_kinematics_path(trim(v)); }});
    flag("sampling.parallel", &RunConfig::parallel);
    k.push_back({"sampling.block_budget", [](const RunConfig& c) { return std::to_string(c.block_budget); },
                 [](RunConfig& c, std::string_view v) { c.block_budget = parse_uint(v); }});

    k.push_back({"output.signal", [](const RunConfig& c) { return c.signal_path; },
                 [](RunConfig& c, std::string_view v) { c.signal_path = std::string(trim(v)); }});
    k.push_back({"output.format",
                 [](const RunConfig& c) { return std::string(c.signal_format == SignalFormat::csv ? "csv" : "binary"); },
                 [](RunConfig& c, std::string_view v) { c.signal_format = parse_signal_format(trim(v)); }});

    k.push_back({"analysis.window", [](const RunConfig& c) { return std::string(to_string(c.window)); },
                 [](RunConfig& c, std::string_view v) { c.window = parse_window(trim(v)); }});
    integer("analysis.k_max", &RunConfig::k_max);
    integer("analysis.tau_points", &RunConfig::tau_points);
    flag("analysis.signed_envelope", &RunConfig::signed_envelope);
    integer("analysis.curve_points", &RunConfig::curve_points);
    return k;
  }();
  return table;
}

const Key* find_key(std::string_view name) {
  for (const Key& k : keys()) {
    if (k.name == name) return &k;
  }
  return nullptr;
}

void set_key(RunConfig& cfg, std::string_view name, std::string_view value) {
  const Key* k = find_key(name);
  if (!k) throw ConfigError("unknown key '" + std::string(name) + "'");
  try {
    k->set(cfg, value);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(name) + ": " + e.what());
  } catch (const DomainError& e) {
    throw ConfigError(std::string(name) + ": " + e.what());
  }
}

}  // namespace

double parse_frequency(std::string_view text) {
  auto [v, unit] = number_and_unit(text);
  double hz;
  if (unit.empty() || unit == "Hz") {
    hz = v;
  } else if (unit == "kHz") {
    hz = v * 1e3;
  } else if (const double scale = time_unit(unit); scale > 0.0) {
    if (!(v > 0.0)) throw ConfigError("period must be positive in '" + std::string(text) + "'");
    hz = 1.0 / (v * scale);
  } else {
    throw ConfigError("unknown frequency unit in '" + std::string(text) + "'");
  }
  if (!std::isfinite(hz) || hz < 0.0) throw ConfigError("bad frequency '" + std::string(text) + "'");
  return hz;
}

double parse_duration(std::string_view text) {
  auto [v, unit] = number_and_unit(text);
  if (unit.empty()) return v;
  const double scale = time_unit(unit);
  if (scale == 0.0) throw ConfigError("unknown time unit in '" + std::string(text) + "'");
  return v * scale;
}

RotorDynamics RunConfig::dynamics() const {
  RotorDynamics d;
  d.omega_s = 2.0 * pi * spin_hz;
  d.omega_r = 2.0 * pi * roll_hz;
  d.inertia_ratio = inertia_ratio;
  if (polhode_hz) d.omega_p_override = 2.0 * pi * *polhode_hz;
  d.gamma_B = gamma_B;
  d.alpha = alpha;
  d.beta0 = beta0;
  d.theta_s0 = theta_s0;
  d.theta_p0 = theta_p0;
  d.theta_r0 = theta_r0;
  return d;
}

StreamOptions RunConfig::stream_options() const {
  StreamOptions o;
  o.t_start = t_start;
  o.duration = duration;
  o.sample_rate = sample_rate;
  o.block_seconds = block_seconds;
  o.path = path;
  o.parallel = parallel;
  o.block_byte_budget = static_cast<std::size_t>(block_budget);
  return o;
}

TransferCurve RunConfig::curve() const { return TransferCurve(geometry.delta, method, series_terms); }

void RunConfig::validate() const {
  try {
    geometry.validate();
    dynamics().validate();
    if (population.n_pairs < 0) throw DomainError("population.pairs must be non-negative");
    if (population.bias_pairs < 0 || population.bias_pairs > population.n_pairs) {
      throw DomainError("population.bias_pairs must lie in [0, pairs]");
    }
    if (population.bias_axis && !(norm(*population.bias_axis) > 0.0)) {
      throw DomainError("population.bias_axis must be non-zero");
    }
    if (population.mode == PopulationMode::file && population.file.empty()) {
      throw DomainError("population.file is required in file mode");
    }
    if (series_terms < 1) throw DomainError("transfer.series_terms must be positive");
    StreamOptions o = stream_options();
    o.samples_per_block();
    o.total_samples();
    if (!std::isfinite(t_start)) throw DomainError("sampling.t_start must be finite");
    if (k_max < 0) throw DomainError("analysis.k_max must be non-negative");
    if (tau_points < 1) throw DomainError("analysis.tau_points must be positive");
    if (curve_points < 2) throw DomainError("analysis.curve_points must be at least 2");
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
}

bool RunConfig::operator==(const RunConfig& o) const { return serialize_config(*this) == serialize_config(o); }

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::set<std::string, std::less<>> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  // geometry.radius must be applied before geometry.delta so that r_g follows both.
  std::vector<std::pair<std::string, std::string>> assignments;
  std::vector<std::size_t> lines;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    ++line_no;
    pos = end + 1;
    if (const auto h = line.find('#'); h != std::string_view::npos) line = line.substr(0, h);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.starts_with("manifest.")) continue;
    if (!find_key(key)) throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    if (!seen.insert(key).second) throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    assignments.emplace_back(key, value);
    lines.push_back(line_no);
  }
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t i = 0; i < assignments.size(); ++i) {
      if ((assignments[i].first == "geometry.radius") != (pass == 0)) continue;
      try {
        set_key(cfg, assignments[i].first, assignments[i].second);
      } catch (const ConfigError& e) {
        throw ConfigError("line " + std::to_string(lines[i]) + ": " + e.what());
      }
    }
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void apply_setting(RunConfig& cfg, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) throw ConfigError("expected key=value, got '" + std::string(assignment) + "'");
  set_key(cfg, trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

std::string serialize_config(const RunConfig& cfg) {
  std::string out;
  for (const Key& k : keys()) out += k.name + " = " + k.get(cfg) + "\n";
  return out;
}

std::string manifest_text(const RunConfig& cfg, std::string_view command) {
  return "manifest.version = " + std::string(library_version()) + "\nmanifest.command = " + std::string(command) +
         "\n" + serialize_config(cfg);
}

}  // namespace tflux
