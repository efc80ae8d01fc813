#pragma once

// Seeded Monte-Carlo BER estimation.
//
// A BER point is split into R independent (train, transmit) blocks. Block b of
// point p reads only Philox substream (domain, p, b) of the root seed, and all
// requested techniques are evaluated on the same received samples. Blocks are
// farmed out to worker threads and their integer tallies are summed in block
// order, so the result does not depend on the worker count.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <span>
#include <thread>
#include <vector>

#include "ook_bcc/detectors.hpp"
#include "ook_bcc/distributions.hpp"
#include "ook_bcc/errors.hpp"
#include "ook_bcc/link.hpp"
#include "ook_bcc/random.hpp"

namespace ook_bcc {

inline constexpr int kDefaultTrainingSlots = 50;
inline constexpr int kDefaultBlocks = 100;
inline constexpr std::size_t kDefaultSymbolsPerPoint = 1'000'000;

inline std::vector<double> power_range_dbm(double start, double stop, double step) {
  if (!(step > 0.0) || stop < start) {
    throw ParameterError("power range needs step > 0 and stop >= start");
  }
  std::vector<double> out;
  const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
  for (long i = 0; i < count; ++i) {
    out.push_back(start + static_cast<double>(i) * step);
  }
  return out;
}

inline std::vector<double> default_power_sweep_dbm() { return power_range_dbm(-20.0, 30.0, 2.0); }

struct Scenario {
  std::vector<NodeProfile> nodes;
  int n_t = kDefaultTrainingSlots;
  std::vector<double> power_sweep_dbm = default_power_sweep_dbm();
  std::size_t n_data_symbols = kDefaultSymbolsPerPoint;
  std::vector<Technique> techniques{Technique::probability, Technique::deviation,
                                    Technique::combination, Technique::mrc};
  std::uint64_t seed = 1;
  double n0_dbm_per_hz = kDefaultN0DbmPerHz;
  double bandwidth_hz = kDefaultBandwidthHz;
  int blocks = kDefaultBlocks;  // retraining cadence R
};

inline void validate_training_length(int n_t) {
  if (n_t < 4 || n_t % 2 != 0) {
    throw ParameterError("n_t must be even and >= 4");
  }
}

inline void validate(const Scenario& s) {
  if (s.nodes.empty()) {
    throw ParameterError("scenario needs at least one node");
  }
  for (std::size_t i = 0; i < s.nodes.size(); ++i) {
    validate(s.nodes[i].dist);
    for (std::size_t j = 0; j < i; ++j) {
      if (s.nodes[i].id == s.nodes[j].id) {
        throw ParameterError("duplicate node id '" + s.nodes[i].id + "'");
      }
    }
  }
  validate_training_length(s.n_t);
  if (s.power_sweep_dbm.empty()) {
    throw ParameterError("power sweep is empty");
  }
  for (std::size_t i = 0; i < s.power_sweep_dbm.size(); ++i) {
    if (!std::isfinite(s.power_sweep_dbm[i])) {
      throw ParameterError("power sweep values must be finite");
    }
    if (i > 0 && !(s.power_sweep_dbm[i] > s.power_sweep_dbm[i - 1])) {
      throw ParameterError("power sweep must be strictly increasing");
    }
  }
  if (s.n_data_symbols < 1) {
    throw ParameterError("n_data_symbols must be >= 1");
  }
  if (s.techniques.empty()) {
    throw ParameterError("no techniques selected");
  }
  if (s.blocks < 1) {
    throw ParameterError("blocks must be >= 1");
  }
  if (!(s.bandwidth_hz > 0.0) || !std::isfinite(s.n0_dbm_per_hz)) {
    throw ParameterError("noise parameters invalid");
  }
}

// Normal-approximation 95% half-width of a binomial proportion.
inline double binomial_half_width(std::uint64_t errors, std::uint64_t symbols) {
  if (symbols == 0) {
    return std::nan("");
  }
  const double p = static_cast<double>(errors) / static_cast<double>(symbols);
  return 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(symbols));
}

struct BerPoint {
  Technique technique = Technique::probability;
  double tx_power_dbm = 0.0;
  int n_t = 0;
  std::uint64_t error_count = 0;
  std::uint64_t symbol_count = 0;
  double ber = 0.0;
  double ci95 = 0.0;

  // Every block hit a degenerate training frame; no estimate exists.
  bool failed() const noexcept { return symbol_count == 0; }

  static BerPoint make(Technique t, double power_dbm, int n_t, std::uint64_t errors,
                       std::uint64_t symbols) {
    BerPoint p;
    p.technique = t;
    p.tx_power_dbm = power_dbm;
    p.n_t = n_t;
    p.error_count = errors;
    p.symbol_count = symbols;
    p.ber = symbols == 0 ? std::nan("")
                         : static_cast<double>(errors) / static_cast<double>(symbols);
    p.ci95 = binomial_half_width(errors, symbols);
    return p;
  }
};

inline bool operator==(const BerPoint& a, const BerPoint& b) {
  auto same = [](double x, double y) { return x == y || (std::isnan(x) && std::isnan(y)); };
  return a.technique == b.technique && same(a.tx_power_dbm, b.tx_power_dbm) && a.n_t == b.n_t &&
         a.error_count == b.error_count && a.symbol_count == b.symbol_count && same(a.ber, b.ber) &&
         same(a.ci95, b.ci95);
}

// CSV row order: technique name, then power, then n_t.
inline bool csv_order(const BerPoint& a, const BerPoint& b) {
  const auto ta = technique_name(a.technique);
  const auto tb = technique_name(b.technique);
  if (ta != tb) {
    return ta < tb;
  }
  if (a.tx_power_dbm != b.tx_power_dbm) {
    return a.tx_power_dbm < b.tx_power_dbm;
  }
  return a.n_t < b.n_t;
}

struct RunOptions {
  unsigned jobs = 1;
};

// Substream id layout: [63] sweep domain, [62:32] point index, [31:0] block.
enum class SweepDomain : std::uint64_t { power = 0, training_length = 1 };

inline std::uint64_t substream_id(SweepDomain domain, std::uint64_t point, std::uint64_t block) {
  return (static_cast<std::uint64_t>(domain) << 63) | ((point & 0x7FFF'FFFFu) << 32) |
         (block & 0xFFFF'FFFFu);
}

// Errors and counted symbols per technique for one block. A technique whose
// training was degenerate counts zero symbols.
struct BlockTally {
  std::vector<std::uint64_t> errors;
  std::vector<std::uint64_t> symbols;
};

// One (train, transmit) block on its own stream. All techniques share the
// same draws.
inline BlockTally simulate_block(std::span<const NodeProfile> nodes, int n_t,
                                 const LinkParams& link, std::span<const Technique> techniques,
                                 std::uint64_t seed, std::uint64_t substream,
                                 std::size_t n_symbols) {
  PhiloxStream engine(seed, substream);
  const std::size_t k_nodes = nodes.size();
  const std::size_t n_tech = techniques.size();
  BlockTally tally{std::vector<std::uint64_t>(n_tech, 0), std::vector<std::uint64_t>(n_tech, 0)};

  const auto training = generate_received(training_symbols(n_t), nodes, link, engine);
  const auto stats = compute_training_stats(training);
  auto data = generate_data_symbols(n_symbols, engine);
  const auto frame = generate_received(std::move(data), nodes, link, engine);

  std::vector<bool> usable(n_tech, true);
  for (std::size_t t = 0; t < n_tech; ++t) {
    if (techniques[t] == Technique::combination) {
      try {
        for (const auto& s : stats) {
          check_combination_ready(s);
        }
      } catch (const DegenerateTrainingError&) {
        usable[t] = false;
      }
    }
  }

  std::vector<double> y(k_nodes);
  std::vector<double> y_abs(k_nodes);
  std::vector<double> h(k_nodes);
  const auto symbols = frame.symbols();
  for (std::size_t n = 0; n < n_symbols; ++n) {
    for (std::size_t k = 0; k < k_nodes; ++k) {
      y[k] = frame.received(k)[n];
      y_abs[k] = std::abs(y[k]);
      h[k] = frame.channel(k)[n];
    }
    for (std::size_t t = 0; t < n_tech; ++t) {
      if (!usable[t]) {
        continue;
      }
      const Symbol decided = techniques[t] == Technique::mrc
                                 ? mrc_detect(y, h, link.tx_power_w())
                                 : detect(techniques[t], y_abs, stats);
      tally.errors[t] += decided != symbols[n] ? 1 : 0;
      tally.symbols[t] += 1;
    }
  }
  return tally;
}

namespace detail {

struct PointTask {
  LinkParams link;
  int n_t;
  std::uint64_t point_index;
  SweepDomain domain;
};

inline std::size_t block_size(std::size_t n_symbols, std::size_t blocks, std::size_t b) {
  return n_symbols / blocks + (b < n_symbols % blocks ? 1 : 0);
}

template <class Fn>
void parallel_for(std::size_t count, unsigned jobs, Fn&& fn) {
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(std::max(jobs, 1u), std::max<std::size_t>(count, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      fn(i);
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::scoped_lock lock(failure_mutex);
            if (!failure) {
              failure = std::current_exception();
            }
            next = count;
          }
        }
      });
    }
  }
  if (failure) {
    std::rethrow_exception(failure);
  }
}

// Runs every (task, block) pair and returns one point per (task, technique),
// in task-major order.
inline std::vector<BerPoint> run_tasks(const Scenario& scenario, std::span<const PointTask> tasks,
                                       const RunOptions& options) {
  const std::size_t blocks =
      std::min<std::size_t>(static_cast<std::size_t>(scenario.blocks), scenario.n_data_symbols);
  std::vector<BlockTally> tallies(tasks.size() * blocks);
  parallel_for(tallies.size(), options.jobs, [&](std::size_t item) {
    const auto& task = tasks[item / blocks];
    const std::size_t b = item % blocks;
    tallies[item] = simulate_block(scenario.nodes, task.n_t, task.link, scenario.techniques,
                                   scenario.seed, substream_id(task.domain, task.point_index, b),
                                   block_size(scenario.n_data_symbols, blocks, b));
  });

  std::vector<BerPoint> out;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    for (std::size_t t = 0; t < scenario.techniques.size(); ++t) {
      std::uint64_t errors = 0;
      std::uint64_t symbols = 0;
      for (std::size_t b = 0; b < blocks; ++b) {
        errors += tallies[i * blocks + b].errors[t];
        symbols += tallies[i * blocks + b].symbols[t];
      }
      out.push_back(BerPoint::make(scenario.techniques[t], tasks[i].link.tx_power_dbm(),
                                   tasks[i].n_t, errors, symbols));
    }
  }
  return out;
}

inline std::size_t power_index(const Scenario& s, double power_dbm) {
  const auto it = std::find(s.power_sweep_dbm.begin(), s.power_sweep_dbm.end(), power_dbm);
  if (it == s.power_sweep_dbm.end()) {
    throw ParameterError("power is not part of the scenario sweep");
  }
  return static_cast<std::size_t>(it - s.power_sweep_dbm.begin());
}

}  // namespace detail

// BER of every scenario technique at an explicit link operating point. Used
// for the degenerate limits (zero noise, zero power) that have no dBm value.
inline std::vector<BerPoint> run_link_point(const Scenario& scenario, const LinkParams& link,
                                            std::uint64_t point_index = 0,
                                            const RunOptions& options = {}) {
  validate(scenario);
  const detail::PointTask task{link, scenario.n_t, point_index, SweepDomain::power};
  return detail::run_tasks(scenario, std::span(&task, 1), options);
}

inline BerPoint run_point(const Scenario& scenario, double power_dbm, Technique technique,
                          const RunOptions& options = {}) {
  validate(scenario);
  if (std::find(scenario.techniques.begin(), scenario.techniques.end(), technique) ==
      scenario.techniques.end()) {
    throw ParameterError("technique is not part of the scenario");
  }
  Scenario single = scenario;
  single.techniques = {technique};
  const detail::PointTask task{
      LinkParams::from_dbm(power_dbm, scenario.n0_dbm_per_hz, scenario.bandwidth_hz),
      scenario.n_t, detail::power_index(scenario, power_dbm), SweepDomain::power};
  return detail::run_tasks(single, std::span(&task, 1), options).front();
}

inline std::vector<BerPoint> run_sweep(const Scenario& scenario, const RunOptions& options = {}) {
  validate(scenario);
  std::vector<detail::PointTask> tasks;
  for (std::size_t i = 0; i < scenario.power_sweep_dbm.size(); ++i) {
    tasks.push_back({LinkParams::from_dbm(scenario.power_sweep_dbm[i], scenario.n0_dbm_per_hz,
                                          scenario.bandwidth_hz),
                     scenario.n_t, i, SweepDomain::power});
  }
  auto out = detail::run_tasks(scenario, tasks, options);
  std::stable_sort(out.begin(), out.end(), csv_order);
  return out;
}

inline std::vector<BerPoint> run_nt_sweep(const Scenario& scenario, std::span<const int> nt_values,
                                          double fixed_power_dbm, const RunOptions& options = {}) {
  validate(scenario);
  if (nt_values.empty()) {
    throw ParameterError("n_t sweep is empty");
  }
  const auto link =
      LinkParams::from_dbm(fixed_power_dbm, scenario.n0_dbm_per_hz, scenario.bandwidth_hz);
  std::vector<detail::PointTask> tasks;
  for (std::size_t i = 0; i < nt_values.size(); ++i) {
    validate_training_length(nt_values[i]);
    tasks.push_back({link, nt_values[i], i, SweepDomain::training_length});
  }
  auto out = detail::run_tasks(scenario, tasks, options);
  std::stable_sort(out.begin(), out.end(), csv_order);
  return out;
}

// Looks up the point for (technique, power, n_t) in a result set.
inline std::optional<BerPoint> find_point(std::span<const BerPoint> points, Technique t,
                                          double power_dbm, std::optional<int> n_t = {}) {
  for (const auto& p : points) {
    if (p.technique == t && p.tx_power_dbm == power_dbm && (!n_t || p.n_t == *n_t)) {
      return p;
    }
  }
  return std::nullopt;
}

}  // namespace ook_bcc
