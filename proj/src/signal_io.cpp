#include "tflux/signal_io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <sstream>
#include <string_view>
#include <vector>

#include "tflux/diagnostics.hpp"

namespace tflux {

static_assert(std::endian::native == std::endian::little, "binary signal I/O assumes a little-endian host");

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

// Splits line [begin, end) of text into whitespace-separated fields with offsets.
std::vector<std::pair<std::size_t, std::string_view>> fields(std::string_view text, std::size_t begin,
                                                             std::size_t end) {
  std::vector<std::pair<std::size_t, std::string_view>> out;
  std::size_t i = begin;
  while (i < end) {
    while (i < end && is_space(text[i])) ++i;
    if (i >= end) break;
    const std::size_t j0 = i;
    while (i < end && !is_space(text[i])) ++i;
    out.emplace_back(j0, text.substr(j0, i - j0));
  }
  return out;
}

double parse_number(std::string_view s, std::size_t offset) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw ParseError("malformed number '" + std::string(s) + "'", offset);
  }
  return v;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

FluxonPopulation parse_fluxon_text(const std::string& text) {
  FluxonPopulation pop;
  pop.provenance = PopulationMode::file;
  std::size_t line_start = 0;
  while (line_start < text.size()) {
    std::size_t line_end = text.find('\n', line_start);
    if (line_end == std::string::npos) line_end = text.size();
    const std::size_t hash = text.find('#', line_start);
    const std::size_t content_end = hash < line_end ? hash : line_end;
    const auto f = fields(text, line_start, content_end);
    if (!f.empty()) {
      if (f.size() != 3) throw ParseError("expected 'xi eta polarity', found " + std::to_string(f.size()) + " fields", f.front().first);
      Fluxon fx;
      fx.xi = parse_number(f[0].second, f[0].first);
      fx.eta = parse_number(f[1].second, f[1].first);
      const double p = parse_number(f[2].second, f[2].first);
      if (p != 1.0 && p != -1.0) throw ParseError("polarity must be +1 or -1", f[2].first);
      fx.polarity = static_cast<int>(p);
      try {
        fx.validate();
      } catch (const DomainError& e) {
        throw ParseError(e.what(), f.front().first);
      }
      pop.fluxons.push_back(fx);
    }
    line_start = line_end + 1;
  }
  return pop;
}

FluxonPopulation read_fluxon_file(const std::string& path) {
  return parse_fluxon_text(slurp(path));
}

void write_fluxon_file(const std::string& path, const FluxonPopulation& pop) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << "# xi eta polarity\n";
  if (pop.seed) out << "# seed " << *pop.seed << " mode " << to_string(pop.provenance) << "\n";
  for (const Fluxon& f : pop.fluxons) {
    out << format_double(f.xi) << ' ' << format_double(f.eta) << ' ' << (f.polarity > 0 ? "+1" : "-1") << '\n';
  }
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

SignalFormat parse_signal_format(std::string_view name) {
  if (name == "binary" || name == "bin") return SignalFormat::binary;
  if (name == "csv") return SignalFormat::csv;
  throw ConfigError("unknown signal format '" + std::string(name) + "'");
}

std::string format_double(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

SignalWriter::SignalWriter(const std::string& path, SignalFormat format, double t0, double dt)
    : path_(path), format_(format), out_(path, std::ios::binary | std::ios::trunc), t0_(t0), dt_(dt) {
  if (!(dt > 0.0) || !std::isfinite(t0)) throw DomainError("signal grid needs finite t0 and dt > 0");
  if (!out_) throw std::runtime_error("cannot write '" + path + "'");
  if (format_ == SignalFormat::csv) {
    out_ << "t,flux\n";
  } else {
    write_header();
  }
}

SignalWriter::~SignalWriter() {
  try {
    close();
  } catch (...) {
  }
}

void SignalWriter::write_header() {
  std::string h = "TFLUX1 t0=" + format_double(t0_) + " dt=" + format_double(dt_) + " n=" + std::to_string(count_);
  if (h.size() > kSignalHeaderBytes - 1) throw std::runtime_error("signal header does not fit in 64 bytes");
  h.resize(kSignalHeaderBytes - 1, ' ');
  h.push_back('\n');
  out_.seekp(0);
  out_.write(h.data(), static_cast<std::streamsize>(h.size()));
}

void SignalWriter::write(const SampledSignal& block) {
  if (closed_) throw std::logic_error("write after close");
  if (block.samples.empty()) return;
  const double expect = t0_ + static_cast<double>(count_) * dt_;
  if (std::abs(block.dt - dt_) > 1e-12 * dt_ ||
      std::abs(block.t_start - expect) > 1e-9 * std::max(1.0, std::abs(expect))) {
    throw std::runtime_error("blocks do not abut");
  }
  if (format_ == SignalFormat::binary) {
    out_.write(reinterpret_cast<const char*>(block.samples.data()),
               static_cast<std::streamsize>(block.samples.size() * sizeof(double)));
  } else {
    std::string buf;
    for (double v : block.samples) {
      buf += format_double(t0_ + static_cast<double>(count_) * dt_);
      buf += ',';
      buf += format_double(v);
      buf += '\n';
      ++count_;
    }
    count_ -= block.samples.size();
    out_ << buf;
  }
  count_ += block.samples.size();
  if (!out_) throw std::runtime_error("write failed for '" + path_ + "'");
}

void SignalWriter::close() {
  if (closed_) return;
  closed_ = true;
  if (format_ == SignalFormat::binary) write_header();
  out_.flush();
  out_.close();
  if (out_.fail()) throw std::runtime_error("write failed for '" + path_ + "'");
}

namespace {

double header_value(std::string_view h, std::string_view key) {
  const std::size_t p = h.find(key);
  if (p == std::string_view::npos) throw ParseError("signal header lacks '" + std::string(key) + "'", 0);
  const std::size_t b = p + key.size();
  std::size_t e = b;
  while (e < h.size() && !is_space(h[e]) && h[e] != '\n') ++e;
  return parse_number(h.substr(b, e - b), b);
}

}  // namespace

SignalReader::SignalReader(const std::string& path) : path_(path), in_(path, std::ios::binary) {
  if (!in_) throw std::runtime_error("cannot open '" + path + "'");
  char head[kSignalHeaderBytes];
  in_.read(head, sizeof head);
  const auto got = static_cast<std::size_t>(in_.gcount());
  const std::string_view h(head, got);
  if (h.starts_with("TFLUX1 ")) {
    if (got < kSignalHeaderBytes) throw ParseError("truncated signal header", got);
    format_ = SignalFormat::binary;
    t0_ = header_value(h, " t0=");
    dt_ = header_value(h, " dt=");
    const double n = header_value(h, " n=");
    if (!(dt_ > 0.0)) throw ParseError("dt must be positive", h.find(" dt=") + 4);
    if (n < 0 || n != std::floor(n)) throw ParseError("bad sample count", h.find(" n=") + 3);
    declared_ = static_cast<std::uint64_t>(n);
    offset_ = kSignalHeaderBytes;
    in_.clear();
    in_.seekg(0, std::ios::end);
    const auto size = static_cast<std::uint64_t>(in_.tellg());
    if (size != kSignalHeaderBytes + *declared_ * sizeof(double)) {
      throw ParseError("file size disagrees with header count", static_cast<std::size_t>(size));
    }
    in_.seekg(static_cast<std::streamoff>(kSignalHeaderBytes));
    return;
  }
  format_ = SignalFormat::csv;
  in_.clear();
  in_.seekg(0);
  std::string line;
  std::getline(in_, line);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "t,flux") throw ParseError("expected 'TFLUX1' header or 't,flux' CSV header", 0);
  offset_ = line.size() + 1;
  double ta, va, tb, vb;
  if (!read_csv_row(ta, va)) return;
  t0_ = ta;
  pending_.emplace(ta, va);
  const std::size_t second_at = offset_;
  const auto pos = in_.tellg();
  if (read_csv_row(tb, vb)) {
    dt_ = tb - ta;
    if (!(dt_ > 0.0)) throw ParseError("time column must increase", second_at);
    in_.clear();
    in_.seekg(pos);
    offset_ = second_at;
  } else {
    dt_ = 1.0;
  }
}

bool SignalReader::read_csv_row(double& t, double& v) {
  std::string line;
  while (std::getline(in_, line)) {
    const std::size_t at = offset_;
    offset_ += line.size() + 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::size_t comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      throw ParseError("expected two comma-separated fields", at);
    }
    t = parse_number(std::string_view(line).substr(0, comma), at);
    v = parse_number(std::string_view(line).substr(comma + 1), at + comma + 1);
    return true;
  }
  return false;
}

bool SignalReader::read(std::size_t max_samples, SampledSignal& out) {
  out.samples.clear();
  out.dt = dt_;
  out.t_start = t0_ + static_cast<double>(consumed_) * dt_;
  if (max_samples == 0) return false;
  if (format_ == SignalFormat::binary) {
    const std::uint64_t left = *declared_ - consumed_;
    const std::size_t n = static_cast<std::size_t>(std::min<std::uint64_t>(left, max_samples));
    if (n == 0) return false;
    out.samples.resize(n);
    in_.read(reinterpret_cast<char*>(out.samples.data()), static_cast<std::streamsize>(n * sizeof(double)));
    if (static_cast<std::size_t>(in_.gcount()) != n * sizeof(double)) throw ParseError("truncated sample data", offset_);
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(out.samples[i])) throw ParseError("non-finite sample", offset_ + i * sizeof(double));
    }
    offset_ += n * sizeof(double);
    consumed_ += n;
    return true;
  }
  while (out.samples.size() < max_samples) {
    double t, v;
    if (pending_) {
      std::tie(t, v) = *pending_;
      pending_.reset();
    } else {
      const std::size_t at = offset_;
      if (!read_csv_row(t, v)) break;
      const double expect = t0_ + static_cast<double>(consumed_) * dt_;
      if (std::abs(t - expect) > 1e-6 * dt_ + 1e-12 * std::abs(expect)) {
        throw ParseError("time column is not uniformly spaced", at);
      }
    }
    out.samples.push_back(v);
    ++consumed_;
  }
  return !out.samples.empty();
}

SampledSignal read_signal(const std::string& path) {
  SignalReader r(path);
  SampledSignal all;
  all.t_start = r.t0();
  all.dt = r.dt();
  if (r.declared_count()) all.samples.reserve(static_cast<std::size_t>(*r.declared_count()));
  SampledSignal chunk;
  while (r.read(1 << 16, chunk)) all.samples.insert(all.samples.end(), chunk.samples.begin(), chunk.samples.end());
  return all;
}

void write_signal(const std::string& path, const SampledSignal& signal, SignalFormat format) {
  SignalWriter w(path, format, signal.t_start, signal.dt);
  w.write(signal);
  w.close();
}

}  // namespace tflux
