#pragma once

// Experiments (a scenario plus an optional training-length sweep) and the
// built-in presets for the standard BER experiments (fig3 .. fig7).

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ook_bcc/distributions.hpp"
#include "ook_bcc/errors.hpp"
#include "ook_bcc/montecarlo.hpp"

namespace ook_bcc {

struct NtSweep {
  std::vector<int> values;
  double power_dbm = 10.0;
};

struct Experiment {
  std::string label;
  Scenario scenario;
  std::optional<NtSweep> nt_sweep;  // when set, replaces the power sweep
};

inline std::vector<BerPoint> run_experiment(const Experiment& e, const RunOptions& options = {}) {
  if (e.nt_sweep) {
    return run_nt_sweep(e.scenario, e.nt_sweep->values, e.nt_sweep->power_dbm, options);
  }
  return run_sweep(e.scenario, options);
}

inline const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{
      "fig3",    "fig3-f1",     "fig3-f2", "fig3-f3", "fig3-f4", "fig3-f5",     "fig3-f6",
      "fig3-f7", "fig3-f8",     "fig3-f9", "fig4",    "fig5-weak", "fig5-strong", "fig6",
      "fig7"};
  return names;
}

namespace detail {

inline Experiment base_experiment(std::string label, std::vector<NodeProfile> nodes,
                                  std::vector<Technique> techniques) {
  Experiment e;
  e.label = std::move(label);
  e.scenario.nodes = std::move(nodes);
  e.scenario.techniques = std::move(techniques);
  return e;
}

inline const std::vector<Technique> kNoncoherent{Technique::probability, Technique::deviation,
                                                 Technique::combination};
inline const std::vector<Technique> kAllTechniques{Technique::probability, Technique::deviation,
                                                   Technique::combination, Technique::mrc};

}  // namespace detail

// Every run a preset name stands for. "fig3" expands to one single-node run
// per registry channel; all other names are a single run.
inline std::vector<Experiment> expand_preset(std::string_view name) {
  const auto& registry = channel_registry();
  if (name == "fig3") {
    std::vector<Experiment> out;
    for (const auto& node : registry) {
      out.push_back(
          detail::base_experiment("fig3-" + node.id, {node}, {Technique::probability}));
    }
    return out;
  }
  if (name.starts_with("fig3-")) {
    if (auto node = find_registry_entry(name.substr(5))) {
      return {detail::base_experiment(std::string(name), {*node}, {Technique::probability})};
    }
  }
  if (name == "fig4") {
    return {detail::base_experiment("fig4", {*find_registry_entry("f9")}, detail::kAllTechniques)};
  }
  if (name == "fig5-weak") {
    return {detail::base_experiment("fig5-weak", registry_group(ChannelCondition::weak),
                                    detail::kNoncoherent)};
  }
  if (name == "fig5-strong") {
    return {detail::base_experiment("fig5-strong", registry_group(ChannelCondition::strong),
                                    detail::kNoncoherent)};
  }
  if (name == "fig6") {
    return {detail::base_experiment("fig6", registry, detail::kAllTechniques)};
  }
  if (name == "fig7") {
    auto e = detail::base_experiment("fig7", registry_group(ChannelCondition::weak),
                                     detail::kNoncoherent);
    e.nt_sweep = NtSweep{{10, 20, 50, 100, 200, 500, 1000}, 10.0};
    e.scenario.power_sweep_dbm = {10.0};
    return {e};
  }
  throw ParameterError("unknown preset '" + std::string(name) + "'");
}

inline Experiment preset(std::string_view name) {
  auto runs = expand_preset(name);
  if (runs.size() != 1) {
    throw ParameterError("preset '" + std::string(name) +
                         "' covers several runs; pick one of fig3-f1 .. fig3-f9");
  }
  return runs.front();
}

}  // namespace ook_bcc
