#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "jcthermo/cli.hpp"

namespace cli = jcthermo::cli;

namespace {

struct Flags {
  std::string config;
  std::optional<std::string> out, format, n_bar, g, delta_e, phi, time, pe0, beta, cutoff, grid_points, initial_level,
      pulse_mode, t_start, t_end, threads;
  bool serial = false;
  std::string inject;
};

void add_common(CLI::App& sub, Flags& f) {
  sub.add_option("--config", f.config, "key=value configuration file");
  sub.add_option("--out", f.out, "output file (default stdout)");
  sub.add_option("--format", f.format, "csv or json");
  sub.add_flag("--serial", f.serial, "single-threaded reference path");
  sub.add_option("--n-bar", f.n_bar, "mean photon number");
  sub.add_option("--g", f.g, "atom-field coupling");
  sub.add_option("--delta-e", f.delta_e, "atomic level splitting (resonant cavity)");
  sub.add_option("--phi", f.phi, "coherent-state phase");
  sub.add_option("--time", f.time, "interaction time");
  sub.add_option("--pe0", f.pe0, "initial excited population");
  sub.add_option("--beta", f.beta, "initial inverse temperature");
  sub.add_option("--cutoff", f.cutoff, "Fock cutoff n_max");
  sub.add_option("--grid-points", f.grid_points, "number of grid points");
  sub.add_option("--initial-level", f.initial_level, "fig-rho01: e or g");
  sub.add_option("--pulse-mode", f.pulse_mode, "diagonalize or explicit_unitary");
  sub.add_option("--t-start", f.t_start, "grid start time");
  sub.add_option("--t-end", f.t_end, "grid end time");
  sub.add_option("--threads", f.threads, "sweep worker count (0 = hardware)");
  sub.add_option("--inject-rabi-convention", f.inject)->group("");
}

cli::KeyValues overrides(const Flags& f) {
  cli::KeyValues kv;
  auto put = [&](const char* key, const std::optional<std::string>& v) {
    if (v)
      kv[key] = *v;
  };
  put("out", f.out);
  put("format", f.format);
  put("n_bar", f.n_bar);
  put("g", f.g);
  put("delta_e", f.delta_e);
  put("phi", f.phi);
  put("time", f.time);
  put("pe0", f.pe0);
  put("beta", f.beta);
  put("cutoff", f.cutoff);
  put("grid_points", f.grid_points);
  put("initial_level", f.initial_level);
  put("pulse_mode", f.pulse_mode);
  put("t_start", f.t_start);
  put("t_end", f.t_end);
  put("threads", f.threads);
  if (f.serial)
    kv["serial"] = "true";
  return kv;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spin-temperature control of a two-level atom by a coherent cavity field"};
  app.require_subcommand(1);
  Flags flags;
  const std::pair<const char*, cli::Command> commands[] = {
      {"run", cli::Command::run},           {"fig-rho01", cli::Command::fig_rho01}, {"fig-tmin", cli::Command::fig_tmin},
      {"fig-tmax", cli::Command::fig_tmax}, {"sweep", cli::Command::sweep},         {"validate", cli::Command::validate},
  };
  const char* help[] = {
      "one protocol run, one output row",
      "coherence vs time, numeric and high-photon formula",
      "minimum temperature vs mean photon number",
      "maximum temperature vs mean photon number, both variants",
      "protocol over an interaction-time grid",
      "run the self-check suite",
  };
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < std::size(commands); ++i) {
    subs.push_back(app.add_subcommand(commands[i].first, help[i]));
    add_common(*subs.back(), flags);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::usage_error;
  }

  cli::Command command = cli::Command::run;
  for (std::size_t i = 0; i < subs.size(); ++i)
    if (subs[i]->parsed())
      command = commands[i].second;

  cli::RunSpec spec;
  try {
    const cli::KeyValues file = flags.config.empty() ? cli::KeyValues{} : cli::read_config_file(flags.config);
    spec = cli::build_spec(command, file, overrides(flags));
    if (flags.inject == "bare")
      spec.summand_convention = jcthermo::RabiConvention::bare_coupling;
    else if (!flags.inject.empty() && flags.inject != "dressed")
      throw cli::ConfigError("--inject-rabi-convention: expected bare or dressed");
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::usage_error;
  }
  return cli::execute(spec, std::cout, std::cerr);
}
