#pragma once

// YAML scenario documents. Requires yaml-cpp.
//
//   label: weak-group
//   nodes:                      # registry names or inline laws
//     - f1
//     - {id: probe, family: weibull, a: 1.0e-6, b: 4.0, condition: weak}
//     - {id: probe2, family: burr, alpha: 2.0e-6, c: 9.0, k: 3.0, condition: strong}
//   n_t: 50
//   power_dbm: {start: -20, stop: 30, step: 2}   # or an explicit list
//   symbols: 1000000
//   blocks: 100
//   techniques: [probability, deviation, combination, mrc]
//   seed: 1
//   n0_dbm_per_hz: -174
//   bandwidth_hz: 100000
//   nt_sweep: {values: [10, 50, 1000], power_dbm: 10}   # optional
//
// Every key except nodes is optional and falls back to the library default.
// Unknown keys are rejected.

#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "ook_bcc/distributions.hpp"
#include "ook_bcc/errors.hpp"
#include "ook_bcc/experiment.hpp"

namespace ook_bcc {

namespace detail {

inline void reject_unknown_keys(const YAML::Node& map, std::initializer_list<std::string_view> known,
                                const std::string& prefix) {
  for (const auto& entry : map) {
    const auto key = entry.first.as<std::string>();
    bool ok = false;
    for (auto k : known) {
      ok = ok || key == k;
    }
    if (!ok) {
      throw ConfigError(prefix + key, "unknown key");
    }
  }
}

template <class T>
T scalar_as(const YAML::Node& node, const std::string& key) {
  if (!node.IsScalar()) {
    throw ConfigError(key, "expected a scalar value");
  }
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(key, "cannot convert '" + node.Scalar() + "'");
  }
}

inline double positive_param(const YAML::Node& map, const std::string& name,
                             const std::string& prefix) {
  const auto key = prefix + name;
  if (!map[name]) {
    throw ConfigError(key, "missing");
  }
  const auto v = scalar_as<double>(map[name], key);
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ConfigError(key, "must be finite and > 0");
  }
  return v;
}

inline NodeProfile parse_node(const YAML::Node& node, std::size_t index) {
  const std::string prefix = "nodes[" + std::to_string(index) + "].";
  if (node.IsScalar()) {
    const auto name = node.Scalar();
    if (auto entry = find_registry_entry(name)) {
      return *entry;
    }
    throw ConfigError("nodes[" + std::to_string(index) + "]",
                      "unknown registry channel '" + name + "'");
  }
  if (!node.IsMap()) {
    throw ConfigError("nodes[" + std::to_string(index) + "]",
                      "expected a registry name or a map");
  }
  if (!node["family"]) {
    throw ConfigError(prefix + "family", "missing");
  }
  const auto family = scalar_as<std::string>(node["family"], prefix + "family");
  NodeProfile out;
  if (family == "burr") {
    reject_unknown_keys(node, {"id", "family", "alpha", "c", "k", "condition"}, prefix);
    out.dist = BurrXII{positive_param(node, "alpha", prefix), positive_param(node, "c", prefix),
                       positive_param(node, "k", prefix)};
  } else if (family == "weibull") {
    reject_unknown_keys(node, {"id", "family", "a", "b", "condition"}, prefix);
    out.dist = Weibull{positive_param(node, "a", prefix), positive_param(node, "b", prefix)};
  } else {
    throw ConfigError(prefix + "family", "must be 'burr' or 'weibull'");
  }
  if (!node["id"]) {
    throw ConfigError(prefix + "id", "missing");
  }
  out.id = scalar_as<std::string>(node["id"], prefix + "id");
  if (!node["condition"]) {
    throw ConfigError(prefix + "condition", "missing");
  }
  const auto condition = scalar_as<std::string>(node["condition"], prefix + "condition");
  if (condition == "strong") {
    out.condition = ChannelCondition::strong;
  } else if (condition == "weak") {
    out.condition = ChannelCondition::weak;
  } else {
    throw ConfigError(prefix + "condition", "must be 'strong' or 'weak'");
  }
  return out;
}

inline int training_length(const YAML::Node& node, const std::string& key) {
  const auto v = scalar_as<int>(node, key);
  if (v < 4 || v % 2 != 0) {
    throw ConfigError(key, "must be even and >= 4");
  }
  return v;
}

inline std::vector<double> parse_power(const YAML::Node& node) {
  std::vector<double> out;
  if (node.IsSequence()) {
    for (std::size_t i = 0; i < node.size(); ++i) {
      out.push_back(scalar_as<double>(node[i], "power_dbm[" + std::to_string(i) + "]"));
    }
  } else if (node.IsMap()) {
    reject_unknown_keys(node, {"start", "stop", "step"}, "power_dbm.");
    for (auto k : {"start", "stop", "step"}) {
      if (!node[k]) {
        throw ConfigError(std::string("power_dbm.") + k, "missing");
      }
    }
    const auto start = scalar_as<double>(node["start"], "power_dbm.start");
    const auto stop = scalar_as<double>(node["stop"], "power_dbm.stop");
    const auto step = scalar_as<double>(node["step"], "power_dbm.step");
    if (!(step > 0.0)) {
      throw ConfigError("power_dbm.step", "must be > 0");
    }
    if (stop < start) {
      throw ConfigError("power_dbm.stop", "must be >= start");
    }
    out = power_range_dbm(start, stop, step);
  } else {
    throw ConfigError("power_dbm", "expected a list or {start, stop, step}");
  }
  if (out.empty()) {
    throw ConfigError("power_dbm", "empty sweep");
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!std::isfinite(out[i]) || (i > 0 && !(out[i] > out[i - 1]))) {
      throw ConfigError("power_dbm", "must be finite and strictly increasing");
    }
  }
  return out;
}

}  // namespace detail

inline Experiment parse_scenario(const YAML::Node& root) {
  if (!root.IsMap()) {
    throw ConfigError("<root>", "scenario document must be a map");
  }
  detail::reject_unknown_keys(root,
                              {"label", "nodes", "n_t", "power_dbm", "symbols", "blocks",
                               "techniques", "seed", "n0_dbm_per_hz", "bandwidth_hz", "nt_sweep"},
                              "");
  Experiment e;
  auto& s = e.scenario;
  if (root["label"]) {
    e.label = detail::scalar_as<std::string>(root["label"], "label");
  }

  const auto nodes = root["nodes"];
  if (!nodes || !nodes.IsSequence() || nodes.size() == 0) {
    throw ConfigError("nodes", "must be a non-empty list");
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    auto node = detail::parse_node(nodes[i], i);
    for (const auto& prev : s.nodes) {
      if (prev.id == node.id) {
        throw ConfigError("nodes[" + std::to_string(i) + "]", "duplicate node id '" + node.id + "'");
      }
    }
    s.nodes.push_back(std::move(node));
  }

  if (root["n_t"]) {
    s.n_t = detail::training_length(root["n_t"], "n_t");
  }
  if (root["power_dbm"]) {
    s.power_sweep_dbm = detail::parse_power(root["power_dbm"]);
  }
  if (root["symbols"]) {
    const auto v = detail::scalar_as<long long>(root["symbols"], "symbols");
    if (v < 1) {
      throw ConfigError("symbols", "must be >= 1");
    }
    s.n_data_symbols = static_cast<std::size_t>(v);
  }
  if (root["blocks"]) {
    const auto v = detail::scalar_as<int>(root["blocks"], "blocks");
    if (v < 1) {
      throw ConfigError("blocks", "must be >= 1");
    }
    s.blocks = v;
  }
  if (root["techniques"]) {
    const auto list = root["techniques"];
    if (!list.IsSequence() || list.size() == 0) {
      throw ConfigError("techniques", "must be a non-empty list");
    }
    s.techniques.clear();
    for (std::size_t i = 0; i < list.size(); ++i) {
      const auto key = "techniques[" + std::to_string(i) + "]";
      const auto name = detail::scalar_as<std::string>(list[i], key);
      try {
        const auto t = parse_technique(name);
        if (std::find(s.techniques.begin(), s.techniques.end(), t) != s.techniques.end()) {
          throw ConfigError(key, "duplicate technique");
        }
        s.techniques.push_back(t);
      } catch (const ParameterError& err) {
        throw ConfigError(key, err.what());
      }
    }
  }
  if (root["seed"]) {
    s.seed = detail::scalar_as<std::uint64_t>(root["seed"], "seed");
  }
  if (root["n0_dbm_per_hz"]) {
    s.n0_dbm_per_hz = detail::scalar_as<double>(root["n0_dbm_per_hz"], "n0_dbm_per_hz");
    if (!std::isfinite(s.n0_dbm_per_hz)) {
      throw ConfigError("n0_dbm_per_hz", "must be finite");
    }
  }
  if (root["bandwidth_hz"]) {
    s.bandwidth_hz = detail::scalar_as<double>(root["bandwidth_hz"], "bandwidth_hz");
    if (!(s.bandwidth_hz > 0.0) || !std::isfinite(s.bandwidth_hz)) {
      throw ConfigError("bandwidth_hz", "must be finite and > 0");
    }
  }
  if (root["nt_sweep"]) {
    const auto sweep = root["nt_sweep"];
    if (!sweep.IsMap()) {
      throw ConfigError("nt_sweep", "expected {values, power_dbm}");
    }
    detail::reject_unknown_keys(sweep, {"values", "power_dbm"}, "nt_sweep.");
    NtSweep nt;
    const auto values = sweep["values"];
    if (!values || !values.IsSequence() || values.size() == 0) {
      throw ConfigError("nt_sweep.values", "must be a non-empty list");
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
      nt.values.push_back(
          detail::training_length(values[i], "nt_sweep.values[" + std::to_string(i) + "]"));
    }
    if (!sweep["power_dbm"]) {
      throw ConfigError("nt_sweep.power_dbm", "missing");
    }
    nt.power_dbm = detail::scalar_as<double>(sweep["power_dbm"], "nt_sweep.power_dbm");
    if (!std::isfinite(nt.power_dbm)) {
      throw ConfigError("nt_sweep.power_dbm", "must be finite");
    }
    s.power_sweep_dbm = {nt.power_dbm};
    e.nt_sweep = std::move(nt);
  }

  try {
    validate(s);
  } catch (const ParameterError& err) {
    throw ConfigError("<scenario>", err.what());
  }
  return e;
}

inline Experiment parse_scenario(std::string_view text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::Exception& err) {
    throw ConfigError("<document>", err.what());
  }
  return parse_scenario(root);
}

inline Experiment load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("--config", "cannot open '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

// Serializes an experiment back into the document format above. Registry
// channels are written by name, everything else inline.
inline std::string to_yaml(const Experiment& e) {
  const auto& s = e.scenario;
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  if (!e.label.empty()) {
    out << YAML::Key << "label" << YAML::Value << e.label;
  }
  out << YAML::Key << "nodes" << YAML::Value << YAML::BeginSeq;
  for (const auto& node : s.nodes) {
    const auto registered = find_registry_entry(node.id);
    if (registered && *registered == node) {
      out << node.id;
      continue;
    }
    out << YAML::Flow << YAML::BeginMap << YAML::Key << "id" << YAML::Value << node.id;
    if (const auto* burr = std::get_if<BurrXII>(&node.dist)) {
      out << YAML::Key << "family" << YAML::Value << "burr" << YAML::Key << "alpha" << YAML::Value
          << burr->alpha << YAML::Key << "c" << YAML::Value << burr->c << YAML::Key << "k"
          << YAML::Value << burr->k;
    } else {
      const auto& w = std::get<Weibull>(node.dist);
      out << YAML::Key << "family" << YAML::Value << "weibull" << YAML::Key << "a" << YAML::Value
          << w.a << YAML::Key << "b" << YAML::Value << w.b;
    }
    out << YAML::Key << "condition" << YAML::Value << std::string(condition_name(node.condition))
        << YAML::EndMap;
  }
  out << YAML::EndSeq;
  out << YAML::Key << "n_t" << YAML::Value << s.n_t;
  if (!e.nt_sweep) {
    out << YAML::Key << "power_dbm" << YAML::Value << YAML::Flow << s.power_sweep_dbm;
  }
  out << YAML::Key << "symbols" << YAML::Value << static_cast<unsigned long long>(s.n_data_symbols);
  out << YAML::Key << "blocks" << YAML::Value << s.blocks;
  out << YAML::Key << "techniques" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (auto t : s.techniques) {
    out << std::string(technique_name(t));
  }
  out << YAML::EndSeq;
  out << YAML::Key << "seed" << YAML::Value << static_cast<unsigned long long>(s.seed);
  out << YAML::Key << "n0_dbm_per_hz" << YAML::Value << s.n0_dbm_per_hz;
  out << YAML::Key << "bandwidth_hz" << YAML::Value << s.bandwidth_hz;
  if (e.nt_sweep) {
    out << YAML::Key << "nt_sweep" << YAML::Value << YAML::BeginMap << YAML::Key << "values"
        << YAML::Value << YAML::Flow << e.nt_sweep->values << YAML::Key << "power_dbm"
        << YAML::Value << e.nt_sweep->power_dbm << YAML::EndMap;
  }
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace ook_bcc
