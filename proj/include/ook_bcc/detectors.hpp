#pragma once

// Training-based noncoherent OOK detectors and the coherent MRC baseline.
//
// Each receive node reduces its training block to a handful of reference
// values (TrainingStats). During data transmission every node turns its
// instantaneous amplitude |y_k| into a pair of scores (w1, w0); the fusion
// center decides 1 when sum(w1) > sum(w0) and 0 otherwise (ties go to 0).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ook_bcc/errors.hpp"
#include "ook_bcc/link.hpp"

namespace ook_bcc {

enum class Technique { probability, deviation, combination, mrc };

inline std::string_view technique_name(Technique t) {
  switch (t) {
    case Technique::probability:
      return "probability";
    case Technique::deviation:
      return "deviation";
    case Technique::combination:
      return "combination";
    case Technique::mrc:
      return "mrc";
  }
  return "?";
}

inline Technique parse_technique(std::string_view name) {
  for (auto t : {Technique::probability, Technique::deviation, Technique::combination,
                 Technique::mrc}) {
    if (technique_name(t) == name) {
      return t;
    }
  }
  throw ParameterError("unknown technique '" + std::string(name) + "'");
}

// Reference values of one receive node.
struct TrainingStats {
  double a_th = 0.0;    // mean |y| over the whole training block
  double a_one = 0.0;   // mean |y| over the x = 1 half
  double a_zero = 0.0;  // mean |y| over the x = 0 half
  double p11 = 0.5;     // empirical P(xhat = 1 | x = 1), clamped
  double p00 = 0.5;     // empirical P(xhat = 0 | x = 0), clamped
  int n_t = 0;
};

struct WeightPair {
  double w1;
  double w0;
};

inline double probability_cap(int n_t) { return 1.0 - 2.0 / n_t; }
inline double probability_floor(int n_t) { return 2.0 / n_t; }

namespace detail {

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double v) noexcept {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      carry_ += (sum_ - t) + v;
    } else {
      carry_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

inline double clamp_probability(double raw, int n_t) {
  return std::max(std::min(raw, probability_cap(n_t)), probability_floor(n_t));
}

}  // namespace detail

// Reference values from one node's training block (first half x = 1, second
// half x = 0). The threshold detection inside uses |y| >= a_th for symbol 1.
inline TrainingStats train_node(std::span<const double> y, int n_t) {
  if (n_t < 4 || n_t % 2 != 0) {
    throw ParameterError("training length n_t must be even and >= 4");
  }
  if (y.size() != static_cast<std::size_t>(n_t)) {
    throw ParameterError("training block length does not match n_t");
  }
  const std::size_t half = y.size() / 2;
  detail::CompensatedSum ones;
  detail::CompensatedSum zeros;
  detail::CompensatedSum all;
  for (std::size_t n = 0; n < y.size(); ++n) {
    const double a = std::abs(y[n]);
    all.add(a);
    (n < half ? ones : zeros).add(a);
  }

  TrainingStats s;
  s.n_t = n_t;
  s.a_th = all.value() / static_cast<double>(n_t);
  s.a_one = ones.value() / static_cast<double>(half);
  s.a_zero = zeros.value() / static_cast<double>(half);

  int hits_one = 0;
  int hits_zero = 0;
  for (std::size_t n = 0; n < y.size(); ++n) {
    const bool detected_one = std::abs(y[n]) >= s.a_th;
    if (n < half) {
      hits_one += detected_one ? 1 : 0;
    } else {
      hits_zero += detected_one ? 0 : 1;
    }
  }
  s.p11 = detail::clamp_probability(hits_one / static_cast<double>(half), n_t);
  s.p00 = detail::clamp_probability(hits_zero / static_cast<double>(half), n_t);
  return s;
}

inline std::vector<TrainingStats> compute_training_stats(const ReceivedFrame& frame) {
  if (!is_training_sequence(frame.symbols())) {
    throw ParameterError("frame does not carry the training sequence");
  }
  const int n_t = static_cast<int>(frame.slot_count());
  std::vector<TrainingStats> out;
  out.reserve(frame.node_count());
  for (std::size_t k = 0; k < frame.node_count(); ++k) {
    out.push_back(train_node(frame.received(k), n_t));
  }
  return out;
}

inline WeightPair prob_weights(double y_abs, const TrainingStats& s) {
  if (y_abs >= s.a_th) {
    return {std::log(s.p11), std::log1p(-s.p00)};
  }
  return {std::log1p(-s.p11), std::log(s.p00)};
}

inline WeightPair dev_weights(double y_abs, const TrainingStats& s) {
  return {y_abs - s.a_one, s.a_zero - y_abs};
}

// Throws DegenerateTrainingError when the combination weights are undefined.
inline void check_combination_ready(const TrainingStats& s) {
  if (!(s.a_one > 0.0) || !(s.a_th > 0.0)) {
    throw DegenerateTrainingError("zero reference amplitude in training block");
  }
}

// a_zero == 0 only happens on a noiseless link. The first term then takes
// its limit: 0 when |y| == 0, -infinity otherwise.
inline WeightPair comb_weights(double y_abs, const TrainingStats& s) {
  check_combination_ready(s);
  const auto [w1d, w0d] = dev_weights(y_abs, s);
  const auto [w1p, w0p] = prob_weights(y_abs, s);
  const double d1 = w1d * w1d;
  const double d0 = w0d * w0d;
  const double w1 = -d1 / s.a_one + (d1 / s.a_th) * w1p;
  double w0_first = 0.0;
  if (s.a_zero > 0.0) {
    w0_first = -d0 / s.a_zero;
  } else if (d0 > 0.0) {
    w0_first = -std::numeric_limits<double>::infinity();
  }
  return {w1, w0_first + (d0 / s.a_th) * w0p};
}

// Accumulates sum(w1 - w0) exactly enough that symmetric patterns tie at 0.
class FusionCenter {
 public:
  void add(const WeightPair& w) noexcept {
    const double diff = w.w1 - w.w0;
    if (diff == std::numeric_limits<double>::infinity()) {
      ++pos_inf_;
    } else if (diff == -std::numeric_limits<double>::infinity()) {
      ++neg_inf_;
    } else {
      margin_.add(diff);
    }
  }

  Symbol decide() const noexcept {
    if (pos_inf_ > 0 || neg_inf_ > 0) {
      return pos_inf_ > 0 && neg_inf_ == 0 ? Symbol{1} : Symbol{0};
    }
    return margin_.value() > 0.0 ? Symbol{1} : Symbol{0};
  }

 private:
  detail::CompensatedSum margin_;
  int pos_inf_ = 0;
  int neg_inf_ = 0;
};

inline Symbol fuse(std::span<const WeightPair> weights) {
  if (weights.empty()) {
    throw ParameterError("fusion needs at least one weight pair");
  }
  FusionCenter fc;
  for (const auto& w : weights) {
    fc.add(w);
  }
  return fc.decide();
}

inline WeightPair node_weights(Technique technique, double y_abs, const TrainingStats& s) {
  switch (technique) {
    case Technique::probability:
      return prob_weights(y_abs, s);
    case Technique::deviation:
      return dev_weights(y_abs, s);
    case Technique::combination:
      return comb_weights(y_abs, s);
    case Technique::mrc:
      break;
  }
  throw ParameterError("mrc is not a training-based technique; use mrc_detect");
}

inline Symbol detect(Technique technique, std::span<const double> y_abs,
                     std::span<const TrainingStats> stats) {
  if (y_abs.size() != stats.size()) {
    throw ParameterError("amplitude and stats node counts differ");
  }
  if (y_abs.empty()) {
    throw ParameterError("fusion needs at least one node");
  }
  FusionCenter fc;
  for (std::size_t k = 0; k < y_abs.size(); ++k) {
    fc.add(node_weights(technique, y_abs[k], stats[k]));
  }
  return fc.decide();
}

// Coherent matched-filter combining with perfect CSI, midpoint threshold.
inline Symbol mrc_detect(std::span<const double> y, std::span<const double> h, double p_watts) {
  if (y.size() != h.size() || y.empty()) {
    throw ParameterError("mrc needs matching, non-empty y and h");
  }
  double z = 0.0;
  double energy = 0.0;
  for (std::size_t k = 0; k < y.size(); ++k) {
    z += h[k] * y[k];
    energy += h[k] * h[k];
  }
  return z > 0.5 * std::sqrt(p_watts) * energy ? Symbol{1} : Symbol{0};
}

}  // namespace ook_bcc
