#pragma once

// ook_bcc_sim command line. Kept in a header so tests can drive it in-process.
//
//   ook_bcc_sim run (--config PATH | --preset NAME) [--seed U64] [--out PATH]
//                   [--symbols N] [--jobs N]
//   ook_bcc_sim preset [--preset NAME]
//   ook_bcc_sim registry
//
// Exit status: 0 success, 2 configuration or usage error, 1 runtime failure.
// OOK_BCC_JOBS sets the default worker count when --jobs is absent.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "ook_bcc/csv.hpp"
#include "ook_bcc/distributions.hpp"
#include "ook_bcc/errors.hpp"
#include "ook_bcc/experiment.hpp"
#include "ook_bcc/scenario_file.hpp"

namespace ook_bcc {

inline constexpr const char* kJobsEnvVar = "OOK_BCC_JOBS";

inline unsigned default_jobs() {
  if (const char* env = std::getenv(kJobsEnvVar); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1) {
      throw ConfigError(kJobsEnvVar, "must be a positive integer");
    }
    return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

inline std::string registry_csv() {
  std::string out = "name,family,scale,shape1,shape2,condition\n";
  for (const auto& node : channel_registry()) {
    out += node.id + ',' + std::string(family_name(node.dist)) + ',';
    if (const auto* b = std::get_if<BurrXII>(&node.dist)) {
      out += format_double(b->alpha) + ',' + format_double(b->c) + ',' + format_double(b->k);
    } else {
      const auto& w = std::get<Weibull>(node.dist);
      out += format_double(w.a) + ',' + format_double(w.b) + ',';
    }
    out += ',' + std::string(condition_name(node.condition)) + '\n';
  }
  return out;
}

namespace detail {

inline std::filesystem::path labelled_path(const std::filesystem::path& base,
                                           const std::string& label) {
  auto name = base.stem().string() + "-" + label + base.extension().string();
  return base.parent_path() / name;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary);
  if (!file) {
    throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  }
  file << text;
  if (!file) {
    throw std::runtime_error("write to '" + path.string() + "' failed");
  }
}

inline void report_failed_points(const std::vector<BerPoint>& points, std::ostream& err) {
  for (const auto& p : points) {
    if (p.failed()) {
      err << "warning: " << technique_name(p.technique) << " at " << format_double(p.tx_power_dbm)
          << " dBm, n_t=" << p.n_t << ": every training block was degenerate, no estimate\n";
    }
  }
}

}  // namespace detail

inline int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Noncoherent OOK detection over body-channel links: Monte-Carlo BER simulator",
               "ook_bcc_sim"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "simulate a scenario and emit a BER table as CSV");
  std::string config_path;
  std::string preset_name;
  std::optional<std::uint64_t> seed;
  std::optional<long long> symbols;
  std::optional<unsigned> jobs;
  std::string out_path;
  auto* config_opt = run->add_option("--config", config_path, "YAML scenario file");
  auto* preset_opt = run->add_option("--preset", preset_name, "built-in figure preset");
  config_opt->excludes(preset_opt);
  run->add_option("--seed", seed, "root seed (overrides the scenario)");
  run->add_option("--symbols", symbols, "data symbols per point (overrides the scenario)");
  run->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  run->add_option("--out", out_path, "output CSV path (default: standard output)");

  auto* preset_cmd = app.add_subcommand("preset", "list presets or print one as a scenario file");
  std::string show_preset;
  preset_cmd->add_option("--preset", show_preset, "preset to print");

  auto* registry_cmd = app.add_subcommand("registry", "list the built-in channel models");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    if (registry_cmd->parsed()) {
      out << registry_csv();
      return 0;
    }

    if (preset_cmd->parsed()) {
      if (show_preset.empty()) {
        for (const auto& name : preset_names()) {
          out << name << '\n';
        }
        return 0;
      }
      std::vector<Experiment> runs;
      try {
        runs = expand_preset(show_preset);
      } catch (const ParameterError& e) {
        throw ConfigError("--preset", e.what());
      }
      for (std::size_t i = 0; i < runs.size(); ++i) {
        out << (i > 0 ? "---\n" : "") << to_yaml(runs[i]);
      }
      return 0;
    }

    std::vector<Experiment> experiments;
    if (!config_path.empty()) {
      experiments.push_back(load_scenario_file(config_path));
    } else if (!preset_name.empty()) {
      try {
        experiments = expand_preset(preset_name);
      } catch (const ParameterError& e) {
        throw ConfigError("--preset", e.what());
      }
    } else {
      throw ConfigError("--config", "run needs --config or --preset");
    }
    if (experiments.size() > 1 && out_path.empty()) {
      throw ConfigError("--out", "preset '" + preset_name +
                                     "' produces several tables; give --out as a file name stem");
    }
    if (symbols && *symbols < 1) {
      throw ConfigError("--symbols", "must be >= 1");
    }

    const RunOptions options{jobs ? *jobs : default_jobs()};
    for (auto& e : experiments) {
      if (seed) {
        e.scenario.seed = *seed;
      }
      if (symbols) {
        e.scenario.n_data_symbols = static_cast<std::size_t>(*symbols);
      }
      const auto points = run_experiment(e, options);
      detail::report_failed_points(points, err);
      const auto csv = to_csv(points);
      if (out_path.empty()) {
        out << csv;
      } else if (experiments.size() == 1) {
        detail::write_text(out_path, csv);
      } else {
        detail::write_text(detail::labelled_path(out_path, e.label), csv);
      }
    }
    return 0;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace ook_bcc
