#pragma once

// Front-end plumbing: key=value configuration, run specifications, and the
// table writers used by the jcthermo executable.
//
// Config file schema (one `key = value` per line, `#` starts a comment):
//   n_bar g delta_e phi time pe0 beta cutoff grid_points initial_level
//   pulse_mode t_start t_end n_bar_min n_bar_max format out serial threads

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "jcthermo/analytic.hpp"
#include "jcthermo/protocol.hpp"
#include "jcthermo/validation.hpp"

namespace jcthermo::cli {

enum ExitCode : int { ok = 0, validation_failure = 1, usage_error = 2, numeric_failure = 3 };

class ConfigError : public Error {
public:
  using Error::Error;
};

/// A computed value could not be represented (NaN) or a sweep point failed.
class NumericFailure : public Error {
public:
  using Error::Error;
};

enum class Command { run, fig_rho01, fig_tmin, fig_tmax, sweep, validate };
enum class Format { csv, json };

inline const char* to_string(Command c) {
  switch (c) {
  case Command::run: return "run";
  case Command::fig_rho01: return "fig-rho01";
  case Command::fig_tmin: return "fig-tmin";
  case Command::fig_tmax: return "fig-tmax";
  case Command::sweep: return "sweep";
  case Command::validate: return "validate";
  }
  return "?";
}

using KeyValues = std::map<std::string, std::string>;

inline const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys{"n_bar",      "g",           "delta_e",   "phi",     "time",
                                             "pe0",        "beta",        "cutoff",    "grid_points",
                                             "initial_level", "pulse_mode", "t_start",   "t_end",   "n_bar_min",
                                             "n_bar_max",  "format",      "out",       "serial",  "threads"};
  return keys;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+')
    ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || !std::isfinite(v))
    throw ConfigError(key + ": expected a finite number, got '" + text + "'");
  return v;
}

inline long long parse_integer(const std::string& key, const std::string& text) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw ConfigError(key + ": expected an integer, got '" + text + "'");
  return v;
}

inline bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "1" || text == "true" || text == "yes" || text == "on")
    return true;
  if (text == "0" || text == "false" || text == "no" || text == "off")
    return false;
  throw ConfigError(key + ": expected true/false, got '" + text + "'");
}

} // namespace detail

inline KeyValues parse_config_text(std::string_view text, const std::string& source = "config") {
  KeyValues out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty())
      continue;
    const auto eq = line.find('=');
    const std::string where = source + ":" + std::to_string(line_no);
    if (eq == std::string_view::npos)
      throw ConfigError(where + ": expected key = value");
    std::string key{detail::trim(line.substr(0, eq))};
    std::string value{detail::trim(line.substr(eq + 1))};
    if (key.empty() || value.empty())
      throw ConfigError(where + ": empty key or value");
    if (std::find(known_keys().begin(), known_keys().end(), key) == known_keys().end())
      throw ConfigError(where + ": unknown key '" + key + "'");
    if (!out.emplace(key, value).second)
      throw ConfigError(where + ": duplicate key '" + key + "'");
  }
  return out;
}

inline KeyValues read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

struct RunSpec {
  Command command = Command::run;
  double n_bar = 36.0;
  double g = 1.0;
  double delta_e = 1.0;
  double phi = 0.0;
  std::optional<double> time;        ///< run: default tau_R / 2
  std::optional<double> pe0;         ///< initial excited population
  std::optional<double> beta;        ///< initial inverse temperature; default 1 / delta_e
  std::optional<std::size_t> cutoff; ///< n_max; default from n_bar
  std::optional<int> grid_points;
  AtomLevel initial_level = AtomLevel::excited;
  PulseMode pulse_mode = PulseMode::diagonalize;
  std::optional<double> t_start;
  std::optional<double> t_end;
  double n_bar_min = 10.0;
  double n_bar_max = 1000.0;
  std::string out;
  Format format = Format::csv;
  bool serial = false;
  unsigned threads = 0;
  RabiConvention summand_convention = RabiConvention::dressed_splitting;

  PhysicalParams physical() const { return PhysicalParams::resonant(delta_e, g); }

  CoherentPrep prep() const {
    return CoherentPrep::from_n_bar(n_bar, phi, cutoff ? std::optional<FockCutoff>(FockCutoff{*cutoff}) : std::nullopt);
  }

  Timescales ts() const { return timescales(g, n_bar); }

  ProtocolConfig protocol(double t) const {
    InitialAtom init = pe0 ? InitialAtom{InitialPe{*pe0}} : InitialAtom{InitialBeta{beta.value_or(1.0 / delta_e)}};
    return ProtocolConfig{physical(), prep(), init, t, pulse_mode};
  }

  int grid_or(int fallback) const { return grid_points.value_or(fallback); }
};

/// Build a spec from the config file entries with `overrides` (command-line flags) taking precedence.
inline RunSpec build_spec(Command command, KeyValues config, const KeyValues& overrides = {}) {
  for (const auto& [k, v] : overrides) {
    if (std::find(known_keys().begin(), known_keys().end(), k) == known_keys().end())
      throw ConfigError("unknown option '" + k + "'");
    config[k] = v;
  }
  if (overrides.count("pe0") && !overrides.count("beta"))
    config.erase("beta");
  if (overrides.count("beta") && !overrides.count("pe0"))
    config.erase("pe0");

  RunSpec s;
  s.command = command;
  using detail::parse_double;
  auto num = [&](const char* key, auto& field) {
    if (auto it = config.find(key); it != config.end())
      field = parse_double(key, it->second);
  };
  num("n_bar", s.n_bar);
  num("g", s.g);
  num("delta_e", s.delta_e);
  num("phi", s.phi);
  num("time", s.time);
  num("pe0", s.pe0);
  num("beta", s.beta);
  num("t_start", s.t_start);
  num("t_end", s.t_end);
  num("n_bar_min", s.n_bar_min);
  num("n_bar_max", s.n_bar_max);
  if (auto it = config.find("cutoff"); it != config.end()) {
    const long long c = detail::parse_integer("cutoff", it->second);
    if (c < 1)
      throw ConfigError("cutoff: must be >= 1");
    s.cutoff = static_cast<std::size_t>(c);
  }
  if (auto it = config.find("grid_points"); it != config.end()) {
    const long long n = detail::parse_integer("grid_points", it->second);
    if (n < 1 || n > 10'000'000)
      throw ConfigError("grid_points: must be in [1, 1e7]");
    s.grid_points = static_cast<int>(n);
  }
  if (auto it = config.find("threads"); it != config.end()) {
    const long long n = detail::parse_integer("threads", it->second);
    if (n < 0 || n > 1024)
      throw ConfigError("threads: must be in [0, 1024]");
    s.threads = static_cast<unsigned>(n);
  }
  if (auto it = config.find("serial"); it != config.end())
    s.serial = detail::parse_bool("serial", it->second);
  if (auto it = config.find("initial_level"); it != config.end()) {
    if (it->second == "e" || it->second == "excited")
      s.initial_level = AtomLevel::excited;
    else if (it->second == "g" || it->second == "ground")
      s.initial_level = AtomLevel::ground;
    else
      throw ConfigError("initial_level: expected e or g, got '" + it->second + "'");
  }
  if (auto it = config.find("pulse_mode"); it != config.end()) {
    if (it->second == "diagonalize")
      s.pulse_mode = PulseMode::diagonalize;
    else if (it->second == "explicit_unitary")
      s.pulse_mode = PulseMode::explicit_unitary;
    else
      throw ConfigError("pulse_mode: expected diagonalize or explicit_unitary, got '" + it->second + "'");
  }
  if (auto it = config.find("format"); it != config.end()) {
    if (it->second == "csv")
      s.format = Format::csv;
    else if (it->second == "json")
      s.format = Format::json;
    else
      throw ConfigError("format: expected csv or json, got '" + it->second + "'");
  }
  if (auto it = config.find("out"); it != config.end())
    s.out = it->second;

  if (!(s.n_bar > 0.0))
    throw ConfigError("n_bar: must be positive");
  if (!(s.g > 0.0))
    throw ConfigError("g: must be positive");
  if (!(s.delta_e > 0.0))
    throw ConfigError("delta_e: must be positive");
  if (s.time && !(*s.time >= 0.0))
    throw ConfigError("time: must be >= 0");
  if (s.pe0 && !(*s.pe0 >= 0.0 && *s.pe0 <= 1.0))
    throw ConfigError("pe0: must lie in [0, 1]");
  if (s.beta && !(*s.beta >= 0.0))
    throw ConfigError("beta: must be >= 0");
  if (s.pe0 && s.beta)
    throw ConfigError("pe0 and beta are mutually exclusive");
  if (s.t_start && !(*s.t_start >= 0.0))
    throw ConfigError("t_start: must be >= 0");
  if (s.t_start && s.t_end && !(*s.t_end > *s.t_start))
    throw ConfigError("t_end: must exceed t_start");
  if (s.t_end && !(*s.t_end > 0.0))
    throw ConfigError("t_end: must be positive");
  if (!(s.n_bar_min > 0.0) || !(s.n_bar_max > s.n_bar_min))
    throw ConfigError("n_bar_min/n_bar_max: need 0 < n_bar_min < n_bar_max");
  return s;
}

struct Table {
  std::vector<std::string> comments;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// 17 significant digits; infinities as "inf"/"-inf"; NaN is refused.
inline std::string format_number(double x) {
  if (std::isnan(x))
    throw NumericFailure("refusing to emit NaN");
  if (std::isinf(x))
    return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline void write_csv(std::ostream& os, const Table& t) {
  for (const auto& c : t.comments)
    os << "# " << c << '\n';
  for (std::size_t i = 0; i < t.columns.size(); ++i)
    os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      os << (i ? "," : "") << format_number(row[i]);
    os << '\n';
  }
}

inline nlohmann::ordered_json json_number(double x) {
  if (std::isnan(x))
    throw NumericFailure("refusing to emit NaN");
  if (std::isinf(x))
    return x > 0 ? "inf" : "-inf";
  return x;
}

inline void write_json(std::ostream& os, const Table& t) {
  nlohmann::ordered_json doc;
  doc["comments"] = t.comments;
  doc["columns"] = t.columns;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json r;
    for (std::size_t i = 0; i < row.size(); ++i)
      r[t.columns[i]] = json_number(row[i]);
    rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(rows);
  os << doc.dump(2) << '\n';
}

inline void write_table(std::ostream& os, const Table& t, Format f) {
  // render fully before writing so a NaN never yields a partial file
  std::ostringstream buf;
  if (f == Format::csv)
    write_csv(buf, t);
  else
    write_json(buf, t);
  os << buf.str();
}

namespace detail {

inline std::string units_line() { return "units: T in delta_E/k_B, t in 1/g"; }

inline std::string params_line(const RunSpec& s) {
  std::ostringstream os;
  os << "n_bar=" << format_number(s.n_bar) << " g=" << format_number(s.g) << " delta_e=" << format_number(s.delta_e)
     << " phi=" << format_number(s.phi) << " n_max=" << s.prep().cutoff().n_max;
  return os.str();
}

inline double b(bool v) { return v ? 1.0 : 0.0; }

inline std::vector<double> result_row(double t, const ProtocolResult& r) {
  const BlochVector pre = bloch_vector(r.rho_pre_pulse);
  const BlochVector post = bloch_vector(r.rho_post_pulse);
  return {t,     r.reading.pe, r.reading.temperature, b(r.reading.inverted), b(r.validity.collapse_completed),
          b(r.validity.within_half_revival), pre.x, pre.y, pre.z, post.x, post.y, post.z, r.pulse_residual,
          b(r.pulse_residual_exceeded)};
}

inline std::vector<std::string> result_columns() {
  return {"t",      "pe",     "T",      "inverted", "collapse_completed", "within_half_revival", "pre_x", "pre_y",
          "pre_z",  "post_x", "post_y", "post_z",   "pulse_residual",     "pulse_residual_exceeded"};
}

inline std::string initial_line(const RunSpec& s) {
  if (s.pe0)
    return "initial pe0=" + format_number(*s.pe0);
  return "initial beta=" + format_number(s.beta.value_or(1.0 / s.delta_e));
}

} // namespace detail

inline Table table_run(const RunSpec& s) {
  const double t = s.time.value_or(0.5 * s.ts().tau_r);
  const auto r = run_protocol_at(s.protocol(t), t);
  Table out{{detail::units_line(), detail::params_line(s), detail::initial_line(s)}, detail::result_columns(), {}};
  out.rows.push_back(detail::result_row(t, r));
  return out;
}

inline Table table_fig_rho01(const RunSpec& s) {
  const int n = s.grid_or(400);
  const double lo = s.t_start.value_or(0.0);
  const double hi = s.t_end.value_or(0.6 * s.ts().tau_r);
  if (!(hi > lo))
    throw ConfigError("fig-rho01: t_end must exceed t_start");
  const auto params = s.physical();
  const auto prep = s.prep();
  const auto psi0 = JointPureState::atom_times_coherent(s.initial_level, prep);
  Table out{{detail::units_line(), detail::params_line(s), std::string("initial level ") + to_string(s.initial_level)},
            {"t", "re_num", "im_num", "re_analytic", "im_analytic"},
            {}};
  out.rows.reserve(n);
  for (double t : jcthermo::detail::linspace(lo, hi, n)) {
    const complex num = partial_trace_field(propagate(psi0, t, params)).rho01();
    const complex an = rho01_analytic(t, s.g, s.n_bar, params.omega(), prep.phi()).value;
    out.rows.push_back({t, num.real(), num.imag(), an.real(), an.imag()});
  }
  return out;
}

inline std::vector<double> n_bar_grid(const RunSpec& s) {
  return jcthermo::detail::logspace(s.n_bar_min, s.n_bar_max, s.grid_or(20));
}

inline Table table_fig_tmin(const RunSpec& s) {
  Table out{{detail::units_line(), "delta_e=" + format_number(s.delta_e)}, {"n_bar", "T"}, {}};
  for (double n : n_bar_grid(s))
    out.rows.push_back({n, t_min(n, s.delta_e).temperature});
  return out;
}

inline Table table_fig_tmax(const RunSpec& s) {
  Table out{{detail::units_line(), "delta_e=" + format_number(s.delta_e)}, {"n_bar", "paper_formula", "numeric"}, {}};
  for (double n : n_bar_grid(s))
    out.rows.push_back({n, t_max(n, s.delta_e, TmaxVariant::paper_formula).temperature,
                        t_max(n, s.delta_e, TmaxVariant::numeric).temperature});
  return out;
}

inline Table table_sweep(const RunSpec& s) {
  const double lo = s.t_start.value_or(0.0);
  const double hi = s.t_end.value_or(0.5 * s.ts().tau_r);
  if (!(hi > lo))
    throw ConfigError("sweep: t_end must exceed t_start");
  const auto grid = jcthermo::detail::linspace(lo, hi, s.grid_or(200));
  const auto points = sweep_interaction_time(s.protocol(lo), grid, {.parallel = !s.serial, .threads = s.threads});
  Table out{{detail::units_line(), detail::params_line(s), detail::initial_line(s)}, detail::result_columns(), {}};
  std::string failures;
  for (const auto& p : points) {
    if (!p.result) {
      failures += (failures.empty() ? "" : "; ") + ("t=" + format_number(p.t) + ": " + p.error);
      continue;
    }
    out.rows.push_back(detail::result_row(p.t, *p.result));
  }
  if (!failures.empty())
    throw NumericFailure("sweep: " + failures);
  return out;
}

inline void write_validation(std::ostream& os, const ValidationReport& r, Format f) {
  if (f == Format::json) {
    nlohmann::ordered_json doc;
    doc["passed"] = r.all_passed();
    doc["seconds"] = r.seconds;
    auto checks = nlohmann::ordered_json::array();
    for (const auto& c : r.checks)
      checks.push_back({{"name", c.name},
                        {"group", c.group},
                        {"status", c.informational ? "INFO" : c.passed ? "PASS" : "FAIL"},
                        {"value", json_number(c.value)},
                        {"limit", json_number(c.limit)},
                        {"detail", c.detail}});
    doc["checks"] = std::move(checks);
    os << doc.dump(2) << '\n';
    return;
  }
  std::size_t failed = 0;
  for (const auto& c : r.checks) {
    const char* status = c.informational ? "INFO" : c.passed ? "PASS" : "FAIL";
    failed += !(c.passed || c.informational);
    char line[512];
    std::snprintf(line, sizeof line, "%s  %-38s %-13s value=%-12.6g limit=%-8.3g %s\n", status, c.name.c_str(),
                  c.group.c_str(), c.value, c.limit, c.detail.c_str());
    os << line;
  }
  char tail[128];
  std::snprintf(tail, sizeof tail, "%zu checks, %zu failed, %.2f s\n", r.checks.size(), failed, r.seconds);
  os << tail;
}

/// Runs one subcommand, writing to `out_stream` (or spec.out if set); returns the exit code.
inline int execute(const RunSpec& s, std::ostream& out_stream, std::ostream& err) {
  try {
    std::ofstream file;
    if (!s.out.empty()) {
      file.open(s.out);
      if (!file)
        throw ConfigError("cannot open output file '" + s.out + "'");
    }
    std::ostream& os = s.out.empty() ? out_stream : file;
    switch (s.command) {
    case Command::validate: {
      const auto report = run_validation({s.summand_convention});
      write_validation(os, report, s.format);
      if (!s.out.empty())
        write_validation(out_stream, report, Format::csv);
      return report.all_passed() ? ok : validation_failure;
    }
    case Command::run: write_table(os, table_run(s), s.format); break;
    case Command::fig_rho01: write_table(os, table_fig_rho01(s), s.format); break;
    case Command::fig_tmin: write_table(os, table_fig_tmin(s), s.format); break;
    case Command::fig_tmax: write_table(os, table_fig_tmax(s), s.format); break;
    case Command::sweep: write_table(os, table_sweep(s), s.format); break;
    }
    return ok;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return usage_error;
  } catch (const InsufficientTruncation& e) {
    err << "numeric failure: " << e.what() << " (required n_max " << e.required_n_max() << ")\n";
    return numeric_failure;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return usage_error;
  } catch (const std::exception& e) {
    err << "numeric failure: " << e.what() << '\n';
    return numeric_failure;
  }
}

} // namespace jcthermo::cli
