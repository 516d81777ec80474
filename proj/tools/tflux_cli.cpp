#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <vector>

#include "tflux/amplitudes.hpp"
#include "tflux/config.hpp"
#include "tflux/diagnostics.hpp"
#include "tflux/population.hpp"
#include "tflux/signal.hpp"
#include "tflux/signal_io.hpp"
#include "tflux/spectrum.hpp"
#include "tflux/transfer.hpp"

using namespace tflux;

namespace {

constexpr int kExitOther = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Common {
  std::string config;
  std::vector<std::string> sets;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string input;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config, "Configuration file (section.key = value lines)");
  app->add_option("--set", c.sets, "Override one setting, key=value (repeatable)");
  app->add_option("--seed", c.seed, "Population seed");
  app->add_option("--out", c.out, "Output file ('-' or empty for stdout where applicable)");
}

RunConfig load(const Common& c) {
  RunConfig cfg = c.config.empty() ? RunConfig{} : load_config(c.config);
  for (const auto& s : c.sets) apply_setting(cfg, s);
  if (c.seed) cfg.population.seed = *c.seed;
  cfg.validate();
  return cfg;
}

// Writes to the named file, or stdout for "" and "-".
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_ = std::make_unique<std::ofstream>(path);
    if (!*file_) throw std::runtime_error("cannot write '" + path + "'");
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }
  void finish() {
    stream().flush();
    if (!stream()) throw std::runtime_error("write failed");
  }

 private:
  std::unique_ptr<std::ofstream> file_;
};

std::string num(double v) { return format_double(v); }

double max_rel_error(const std::vector<double>& approx, const std::vector<double>& exact) {
  double m = 0;
  for (std::size_t i = 0; i < exact.size(); ++i) {
    if (exact[i] != 0.0) m = std::max(m, std::abs(approx[i] - exact[i]) / std::abs(exact[i]));
  }
  return m;
}

double max_abs_error(const std::vector<double>& approx, const std::vector<double>& exact) {
  double m = 0;
  for (std::size_t i = 0; i < exact.size(); ++i) m = std::max(m, std::abs(approx[i] - exact[i]));
  return m;
}

int cmd_curve(const Common& c, bool delta_table, int table_points) {
  const RunConfig cfg = load(c);
  Output out(c.out);
  auto& os = out.stream();
  if (delta_table) {
    os << "delta,f_delta,kappa_delta,delta_width,a_delta\n";
    for (int i = 0; i < table_points; ++i) {
      const double d = 0.01 * std::pow(50.0, table_points == 1 ? 0.0 : static_cast<double>(i) / (table_points - 1));
      const TransferCurve t(d);
      os << num(d) << ',' << num(t.f_delta()) << ',' << num(t.kappa_delta()) << ',' << num(t.delta_width()) << ','
         << num(t.a_delta()) << '\n';
    }
    out.finish();
    return 0;
  }

  const double delta = cfg.geometry.delta;
  const TransferCurve ref(delta, TransferMethod::integral);
  const bool with_series = delta >= 0.05;
  if (!with_series) warn("curve: series column omitted for delta < 0.05 (slow convergence)");
  const std::vector<TransferMethod> methods{TransferMethod::closed_form, TransferMethod::piecewise_linear,
                                            TransferMethod::arctan, TransferMethod::arctan_adjusted};
  const int n = cfg.curve_points;
  std::vector<double> s(static_cast<std::size_t>(n)), exact(s.size());
  std::vector<std::vector<double>> cols(methods.size(), std::vector<double>(s.size()));
  std::vector<double> series(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    s[i] = -1.0 + 2.0 * static_cast<double>(i) / (n - 1);
    exact[i] = ref(s[i]);
    for (std::size_t m = 0; m < methods.size(); ++m) cols[m][i] = TransferCurve(delta, methods[m])(s[i]);
    if (with_series) series[i] = f_series(s[i], delta, cfg.series_terms);
  }

  os << "# delta = " << num(delta) << "\n# f_delta = " << num(ref.f_delta()) << "\n# kappa_delta = "
     << num(ref.kappa_delta()) << "\n# delta_width = " << num(ref.delta_width()) << "\n# a_delta = "
     << num(ref.a_delta()) << '\n';
  os << "# max_abs_error piecewise_linear = " << num(max_abs_error(cols[1], exact)) << '\n';
  os << "# max_rel_error arctan = " << num(max_rel_error(cols[2], exact)) << '\n';
  os << "# max_rel_error arctan_adjusted = " << num(max_rel_error(cols[3], exact)) << '\n';
  os << "s,integral,series";
  for (auto m : methods) os << ',' << to_string(m);
  for (auto m : methods) os << ",dev_" << to_string(m);
  os << '\n';
  for (std::size_t i = 0; i < s.size(); ++i) {
    os << num(s[i]) << ',' << num(exact[i]) << ',' << (with_series ? num(series[i]) : "");
    for (const auto& col : cols) os << ',' << num(col[i]);
    for (const auto& col : cols) os << ',' << num(col[i] - exact[i]);
    os << '\n';
  }
  out.finish();
  return 0;
}

int cmd_generate(const Common& c, const std::string& fluxon_out) {
  RunConfig cfg = load(c);
  if (!c.out.empty()) cfg.signal_path = c.out;
  const TransferCurve curve = cfg.curve();
  const FluxonPopulation pop = generate_population(cfg.population, curve);
  if (!fluxon_out.empty()) write_fluxon_file(fluxon_out, pop);
  const StreamOptions opts = cfg.stream_options();
  SignalWriter writer(cfg.signal_path, cfg.signal_format, opts.t_start, 1.0 / opts.sample_rate);
  const std::size_t blocks =
      generate_stream(pop, curve, cfg.dynamics(), opts, [&](const SampledSignal& b) { writer.write(b); });
  writer.close();
  {
    std::ofstream m(cfg.signal_path + ".manifest");
    m << manifest_text(cfg, "generate");
    if (!m) throw std::runtime_error("cannot write manifest");
  }
  std::cout << "wrote " << writer.count() << " samples in " << blocks << " blocks from " << pop.size()
            << " fluxons to " << cfg.signal_path << '\n';
  return 0;
}

int cmd_envelope(const Common& c, std::optional<double> lag_seconds) {
  const RunConfig cfg = load(c);
  const std::string input = c.input.empty() ? cfg.signal_path : c.input;
  SignalReader reader(input);
  const auto block = static_cast<std::size_t>(std::llround(cfg.block_seconds / reader.dt()));
  EnvelopeBuilder env(std::max<std::size_t>(block, 1), cfg.signed_envelope);
  SampledSignal chunk;
  while (reader.read(1 << 16, chunk)) env.push(chunk);
  const auto points = env.finish();
  Output out(c.out);
  auto& os = out.stream();
  os << "t," << (cfg.signed_envelope ? "max_flux" : "max_abs_flux") << '\n';
  for (const auto& p : points) os << num(p.t) << ',' << num(p.value) << '\n';
  if (lag_seconds) {
    const auto lag = static_cast<std::size_t>(std::llround(*lag_seconds / cfg.block_seconds));
    std::vector<double> v;
    for (const auto& p : points) v.push_back(p.value);
    os << "# autocorrelation lag_blocks = " << lag << " r = " << num(autocorrelation(v, lag)) << '\n';
  }
  out.finish();
  return 0;
}

int cmd_spectrum(const Common& c, double f_max) {
  const RunConfig cfg = load(c);
  const std::string input = c.input.empty() ? cfg.signal_path : c.input;
  const auto spec = power_spectrum(read_signal(input), cfg.window);
  Output out(c.out);
  auto& os = out.stream();
  os << "frequency_hz,power\n";
  for (const auto& b : spec) {
    if (f_max > 0 && b.frequency > f_max) break;
    os << num(b.frequency) << ',' << num(b.power) << '\n';
  }
  out.finish();
  return 0;
}

int cmd_amplitudes(const Common& c, std::optional<int> fluxon_index) {
  const RunConfig cfg = load(c);
  const TransferCurve curve = cfg.curve();
  const RotorDynamics dyn = cfg.dynamics();
  const FluxonPopulation pop = generate_population(cfg.population, curve);
  std::vector<double> tau(static_cast<std::size_t>(cfg.tau_points));
  for (std::size_t j = 0; j < tau.size(); ++j) tau[j] = 2.0 * pi * static_cast<double>(j) / static_cast<double>(tau.size());

  SlowAmplitudes amp;
  if (fluxon_index) {
    if (*fluxon_index < 0 || static_cast<std::size_t>(*fluxon_index) >= pop.size()) {
      throw ConfigError("--fluxon index out of range");
    }
    amp = slow_fourier_amplitudes(pop.fluxons[static_cast<std::size_t>(*fluxon_index)], curve, dyn, tau, cfg.k_max);
  } else {
    amp = slow_fourier_amplitudes(pop, curve, dyn, tau, cfg.k_max);
  }
  Output out(c.out);
  auto& os = out.stream();
  if (fluxon_index) {
    os << "# per-fluxon coefficients: F(a_sr sin x) = a_sr sum A_k sin((2k+1)x); F'(a_sr sin x) = sum B_k cos(2kx)\n";
  } else {
    os << "# A_k: flux amplitude (Phi_0) of the (2k+1)(f_s - f_r) line\n"
       << "# B_k: coefficient of (beta0 sin theta_r + alpha) on the 2k(f_s - f_r) line; line amplitudes are alpha*B_k = "
       << num(cfg.alpha) << "*B_k and beta0/2*B_k = " << num(0.5 * cfg.beta0) << "*B_k at +-f_r\n";
  }
  const double wp = dyn.omega_p();
  os << "tau,t";
  if (fluxon_index) os << ",a_sr,q_sr,a";
  for (int k = 0; k <= cfg.k_max; ++k) os << ",A_" << k;
  for (int k = 0; k <= cfg.k_max; ++k) os << ",B_" << k;
  os << '\n';
  for (std::size_t j = 0; j < tau.size(); ++j) {
    os << num(tau[j]) << ',' << (wp > 0 ? num(tau[j] / wp) : "");
    if (fluxon_index) os << ',' << num(amp.a_sr[j]) << ',' << num(amp.q_sr[j]) << ',' << num(amp.a[j]);
    for (const auto& row : amp.A) os << ',' << num(row[j]);
    for (const auto& row : amp.B) os << ',' << num(row[j]);
    os << '\n';
  }
  out.finish();
  return 0;
}

int cmd_population_emit(const Common& c) {
  const RunConfig cfg = load(c);
  const FluxonPopulation pop = generate_population(cfg.population, cfg.curve());
  if (c.out.empty() || c.out == "-") {
    std::cout << "# xi eta polarity\n";
    for (const auto& f : pop.fluxons) std::cout << num(f.xi) << ' ' << num(f.eta) << ' ' << (f.polarity > 0 ? "+1" : "-1") << '\n';
  } else {
    write_fluxon_file(c.out, pop);
  }
  return 0;
}

int cmd_population_inspect(const Common& c) {
  const RunConfig cfg = load(c);
  const std::string input = c.input.empty() ? cfg.population.file : c.input;
  if (input.empty()) throw ConfigError("population inspect needs --input or population.file");
  const FluxonPopulation pop = read_fluxon_file(input);
  const TransferCurve curve = cfg.curve();
  int plus = 0, minus = 0;
  Vec3 moment{0, 0, 0};
  for (const auto& f : pop.fluxons) {
    (f.polarity > 0 ? plus : minus) += 1;
    moment += static_cast<double>(f.polarity) * body_direction(f);
  }
  Output out(c.out);
  auto& os = out.stream();
  os << "fluxons = " << plus << "\nantifluxons = " << minus << '\n';
  os << "polarity_moment = " << num(moment.x) << ',' << num(moment.y) << ',' << num(moment.z) << '\n';
  for (const auto& [name, axis] : {std::pair{"x", Vec3{1, 0, 0}}, {"y", Vec3{0, 1, 0}}, {"z", Vec3{0, 0, 1}}}) {
    os << "net_flux_" << name << " = " << num(net_flux_along(pop, curve, axis)) << '\n';
  }
  if (norm(moment) > 0) {
    os << "net_flux_moment_axis = " << num(net_flux_along(pop, curve, moment)) << '\n';
  }
  out.finish();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  // Repeated warnings (one per sample or per grid point) are printed once.
  std::mutex seen_mutex;
  std::set<std::string, std::less<>> seen;
  set_warning_handler([&](std::string_view m) {
    std::lock_guard lock(seen_mutex);
    if (seen.insert(std::string(m)).second) std::cerr << "tflux: warning: " << m << '\n';
  });

  CLI::App app{"Trapped magnetic flux signal simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(library_version()));

  Common common;
  bool delta_table = false;
  int table_points = 25;
  std::string fluxon_out;
  std::optional<double> lag;
  double f_max = 0;
  std::optional<int> fluxon_index;

  auto* curve = app.add_subcommand("curve", "Universal curve by every representation, with its constants");
  add_common(curve, common);
  curve->add_flag("--delta-table", delta_table, "Emit f_delta, kappa_delta, Delta_delta, A_delta over delta in [0.01, 0.5]");
  curve->add_option("--points", table_points, "Rows of the delta table")->check(CLI::PositiveNumber);

  auto* generate = app.add_subcommand("generate", "Stream the flux signal to a file and write a manifest");
  add_common(generate, common);
  generate->add_option("--fluxons", fluxon_out, "Also write the population as a fluxon file");

  auto* env = app.add_subcommand("envelope", "Block maxima of a signal file");
  add_common(env, common);
  env->add_option("--input", common.input, "Signal file (defaults to the output.signal setting)");
  env->add_option("--lag", lag, "Also report the envelope autocorrelation at this lag in seconds");

  auto* spectrum = app.add_subcommand("spectrum", "Periodogram of a signal file");
  add_common(spectrum, common);
  spectrum->add_option("--input", common.input, "Signal file (defaults to the output.signal setting)");
  spectrum->add_option("--fmax", f_max, "Highest frequency to emit in Hz");

  auto* amps = app.add_subcommand("amplitudes", "Slow Fourier amplitudes A_k, B_k over one polhode cycle");
  add_common(amps, common);
  amps->add_option("--fluxon", fluxon_index, "Report the coefficients of one fluxon instead of the population");

  auto* population = app.add_subcommand("population", "Emit or inspect fluxon files");
  population->require_subcommand(1);
  auto* emit = population->add_subcommand("emit", "Generate a population from the configuration");
  add_common(emit, common);
  auto* inspect = population->add_subcommand("inspect", "Summarize a fluxon file");
  add_common(inspect, common);
  inspect->add_option("--input", common.input, "Fluxon file (default population.file)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*curve) return cmd_curve(common, delta_table, table_points);
    if (*generate) return cmd_generate(common, fluxon_out);
    if (*env) return cmd_envelope(common, lag);
    if (*spectrum) return cmd_spectrum(common, f_max);
    if (*amps) return cmd_amplitudes(common, fluxon_index);
    if (*emit) return cmd_population_emit(common);
    if (*inspect) return cmd_population_inspect(common);
  } catch (const ConfigError& e) {
    std::cerr << "tflux: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DomainError& e) {
    std::cerr << "tflux: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalError& e) {
    std::cerr << "tflux: numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const ParseError& e) {
    std::cerr << "tflux: malformed input: " << e.what() << '\n';
    return kExitOther;
  } catch (const std::exception& e) {
    std::cerr << "tflux: error: " << e.what() << '\n';
    return kExitOther;
  }
  return kExitOther;
}
