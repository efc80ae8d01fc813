#pragma once

// Real-valued SIMO link: y_k[n] = sqrt(P) h_k[n] x[n] + n_k[n] with a fresh
// channel draw per node and per slot, and n_k[n] ~ N(0, N0 B / 2).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "ook_bcc/distributions.hpp"
#include "ook_bcc/errors.hpp"
#include "ook_bcc/random.hpp"

namespace ook_bcc {

using Symbol = std::uint8_t;

inline constexpr double kDefaultN0DbmPerHz = -174.0;
inline constexpr double kDefaultBandwidthHz = 100e3;

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

// Per-dimension noise power N0 B / 2 in watts.
inline double noise_variance(double n0_dbm_per_hz, double bandwidth_hz) {
  if (bandwidth_hz < 0.0) {
    throw ParameterError("bandwidth must be non-negative");
  }
  return dbm_to_watts(n0_dbm_per_hz) * bandwidth_hz / 2.0;
}

class LinkParams {
 public:
  static LinkParams from_dbm(double tx_power_dbm, double n0_dbm_per_hz = kDefaultN0DbmPerHz,
                             double bandwidth_hz = kDefaultBandwidthHz) {
    if (!std::isfinite(tx_power_dbm) || !std::isfinite(n0_dbm_per_hz)) {
      throw ParameterError("link powers in dBm must be finite");
    }
    if (!(bandwidth_hz > 0.0)) {
      throw ParameterError("bandwidth must be > 0");
    }
    return LinkParams(tx_power_dbm, dbm_to_watts(tx_power_dbm),
                      noise_variance(n0_dbm_per_hz, bandwidth_hz));
  }

  // Linear-unit constructor. Zero power or zero noise are allowed here; they
  // are the degenerate limits used for sanity checks.
  static LinkParams from_watts(double tx_power_w, double noise_variance_w) {
    if (!(tx_power_w >= 0.0) || !(noise_variance_w >= 0.0) || !std::isfinite(tx_power_w) ||
        !std::isfinite(noise_variance_w)) {
      throw ParameterError("linear link powers must be finite and >= 0");
    }
    const double dbm = tx_power_w > 0.0 ? 10.0 * std::log10(tx_power_w) + 30.0
                                        : -std::numeric_limits<double>::infinity();
    return LinkParams(dbm, tx_power_w, noise_variance_w);
  }

  double tx_power_dbm() const noexcept { return tx_power_dbm_; }
  double tx_power_w() const noexcept { return tx_power_w_; }
  double noise_variance_w() const noexcept { return noise_variance_w_; }
  double amplitude() const noexcept { return std::sqrt(tx_power_w_); }
  double noise_stddev() const noexcept { return std::sqrt(noise_variance_w_); }

 private:
  LinkParams(double dbm, double p_w, double n_w)
      : tx_power_dbm_(dbm), tx_power_w_(p_w), noise_variance_w_(n_w) {}

  double tx_power_dbm_;
  double tx_power_w_;
  double noise_variance_w_;
};

// K x N block of received samples. Node-major storage; the true channel
// draws are kept alongside for the coherent (perfect-CSI) baseline.
class ReceivedFrame {
 public:
  ReceivedFrame(std::size_t nodes, std::vector<Symbol> symbols)
      : nodes_(nodes),
        symbols_(std::move(symbols)),
        received_(nodes * symbols_.size()),
        channel_(nodes * symbols_.size()) {}

  std::size_t node_count() const noexcept { return nodes_; }
  std::size_t slot_count() const noexcept { return symbols_.size(); }
  std::span<const Symbol> symbols() const noexcept { return symbols_; }

  std::span<const double> received(std::size_t node) const noexcept {
    return {received_.data() + node * slot_count(), slot_count()};
  }
  std::span<const double> channel(std::size_t node) const noexcept {
    return {channel_.data() + node * slot_count(), slot_count()};
  }

  double& received_at(std::size_t node, std::size_t slot) noexcept {
    return received_[node * slot_count() + slot];
  }
  double& channel_at(std::size_t node, std::size_t slot) noexcept {
    return channel_[node * slot_count() + slot];
  }

 private:
  std::size_t nodes_;
  std::vector<Symbol> symbols_;
  std::vector<double> received_;
  std::vector<double> channel_;
};

// Known training block: N_t/2 ones followed by N_t/2 zeros.
inline std::vector<Symbol> training_symbols(int n_t) {
  if (n_t < 2 || n_t % 2 != 0) {
    throw ParameterError("training length n_t must be even and >= 2");
  }
  std::vector<Symbol> out(static_cast<std::size_t>(n_t), Symbol{0});
  std::fill_n(out.begin(), n_t / 2, Symbol{1});
  return out;
}

inline bool is_training_sequence(std::span<const Symbol> x) {
  const std::size_t n = x.size();
  if (n < 2 || n % 2 != 0) {
    return false;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] != (i < n / 2 ? 1 : 0)) {
      return false;
    }
  }
  return true;
}

inline double received_amplitude(double tx_power_w, double channel, Symbol x, double noise) {
  return std::sqrt(tx_power_w) * channel * static_cast<double>(x) + noise;
}

// Equiprobable data bits; a uniform below 1/2 maps to symbol 1.
template <class Engine>
std::vector<Symbol> generate_data_symbols(std::size_t n, Engine& engine) {
  if (n == 0) {
    throw ParameterError("data symbol count must be >= 1");
  }
  std::vector<Symbol> out(n);
  for (auto& s : out) {
    s = uniform_open01(engine) < 0.5 ? Symbol{1} : Symbol{0};
  }
  return out;
}

// Draw order per slot: for each node, channel uniform then noise variate.
// Noise is drawn even when its variance is zero so the stream layout does not
// depend on the link parameters.
template <class Engine>
ReceivedFrame generate_received(std::vector<Symbol> x, std::span<const NodeProfile> nodes,
                                const LinkParams& params, Engine& engine) {
  if (nodes.empty()) {
    throw ParameterError("at least one receive node is required");
  }
  for (const auto& node : nodes) {
    validate(node.dist);
  }
  ReceivedFrame frame(nodes.size(), std::move(x));
  const double sigma = params.noise_stddev();
  const double p = params.tx_power_w();
  StandardNormal normal;
  auto uniform = [&engine] { return uniform_open01(engine); };
  const auto symbols = frame.symbols();
  for (std::size_t n = 0; n < frame.slot_count(); ++n) {
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      const double h = sample_channel(nodes[k].dist, uniform);
      const double noise = sigma * normal(engine);
      frame.channel_at(k, n) = h;
      frame.received_at(k, n) = received_amplitude(p, h, symbols[n], noise);
    }
  }
  return frame;
}

}  // namespace ook_bcc
