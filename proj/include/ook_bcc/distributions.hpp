#pragma once

// Channel amplitude laws for body-channel links and the nine measured
// channel models used throughout the simulator.

#include <cmath>
#include <concepts>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include "ook_bcc/errors.hpp"

namespace ook_bcc {

// Burr Type XII: F(x) = 1 - (1 + (x/alpha)^c)^(-k), x > 0.
struct BurrXII {
  double alpha;  // scale
  double c;      // shape
  double k;      // shape

  friend bool operator==(const BurrXII&, const BurrXII&) = default;
};

// Weibull: F(x) = 1 - exp(-(x/a)^b), x > 0.
struct Weibull {
  double a;  // scale
  double b;  // shape

  friend bool operator==(const Weibull&, const Weibull&) = default;
};

using DistributionSpec = std::variant<BurrXII, Weibull>;

enum class ChannelCondition { strong, weak };

struct NodeProfile {
  std::string id;
  DistributionSpec dist;
  ChannelCondition condition;

  friend bool operator==(const NodeProfile&, const NodeProfile&) = default;
};

namespace detail {

inline void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ParameterError(std::string("distribution parameter '") + name +
                         "' must be finite and > 0");
  }
}

inline void require_unit_interval(double u) {
  if (!(u >= 0.0 && u < 1.0)) {
    throw DomainError("inverse CDF argument must lie in [0, 1)");
  }
}

}  // namespace detail

inline void validate(const BurrXII& p) {
  detail::require_positive(p.alpha, "alpha");
  detail::require_positive(p.c, "c");
  detail::require_positive(p.k, "k");
}

inline void validate(const Weibull& p) {
  detail::require_positive(p.a, "a");
  detail::require_positive(p.b, "b");
}

inline void validate(const DistributionSpec& spec) {
  std::visit([](const auto& p) { validate(p); }, spec);
}

// The expm1/log1p forms keep full relative precision near u = 0, where the
// textbook (1 - u)^(-1/k) - 1 cancels catastrophically.
inline double burr_inverse_cdf(double u, const BurrXII& p) {
  detail::require_unit_interval(u);
  validate(p);
  const double t = std::expm1(-std::log1p(-u) / p.k);
  return p.alpha * std::pow(t, 1.0 / p.c);
}

inline double burr_cdf(double x, const BurrXII& p) {
  if (x <= 0.0) {
    return 0.0;
  }
  return -std::expm1(-p.k * std::log1p(std::pow(x / p.alpha, p.c)));
}

inline double weibull_inverse_cdf(double u, const Weibull& p) {
  detail::require_unit_interval(u);
  validate(p);
  return p.a * std::pow(-std::log1p(-u), 1.0 / p.b);
}

inline double weibull_cdf(double x, const Weibull& p) {
  if (x <= 0.0) {
    return 0.0;
  }
  return -std::expm1(-std::pow(x / p.a, p.b));
}

inline double inverse_cdf(double u, const DistributionSpec& spec) {
  return std::visit(
      [u](const auto& p) {
        if constexpr (std::is_same_v<std::decay_t<decltype(p)>, BurrXII>) {
          return burr_inverse_cdf(u, p);
        } else {
          return weibull_inverse_cdf(u, p);
        }
      },
      spec);
}

inline double cdf(double x, const DistributionSpec& spec) {
  return std::visit(
      [x](const auto& p) {
        if constexpr (std::is_same_v<std::decay_t<decltype(p)>, BurrXII>) {
          return burr_cdf(x, p);
        } else {
          return weibull_cdf(x, p);
        }
      },
      spec);
}

// Anything that hands out uniforms in [0, 1) when called.
template <class F>
concept UniformSource = std::invocable<F&> && std::convertible_to<std::invoke_result_t<F&>, double>;

// One channel draw h ~ f_k by inverse transform.
template <UniformSource Source>
double sample_channel(const DistributionSpec& spec, Source&& next_uniform) {
  return inverse_cdf(static_cast<double>(next_uniform()), spec);
}

inline std::string_view family_name(const DistributionSpec& spec) {
  return std::holds_alternative<BurrXII>(spec) ? "burr" : "weibull";
}

inline std::string_view condition_name(ChannelCondition c) {
  return c == ChannelCondition::strong ? "strong" : "weak";
}

// Body-channel models f1..f9. Scales are dimensionless amplitude gains.
inline const std::vector<NodeProfile>& channel_registry() {
  static const std::vector<NodeProfile> registry{
      {"f1", BurrXII{4.71e-7, 2.43, 5.61}, ChannelCondition::weak},
      {"f2", BurrXII{9.32e-7, 3.88e1, 5.52e-1}, ChannelCondition::strong},
      {"f3", BurrXII{2.29e-8, 1.21e1, 5.07e-1}, ChannelCondition::weak},
      {"f4", BurrXII{5.63e-6, 2.40e1, 3.97e-1}, ChannelCondition::strong},
      {"f5", Weibull{1.76e-6, 3.88}, ChannelCondition::weak},
      {"f6", BurrXII{3.83e-7, 7.06, 1.26}, ChannelCondition::weak},
      {"f7", BurrXII{1.31e-6, 5.25, 1.47}, ChannelCondition::weak},
      {"f8", Weibull{1.01e-6, 4.05}, ChannelCondition::weak},
      {"f9", BurrXII{7.76e-6, 9.71, 7.87}, ChannelCondition::strong},
  };
  return registry;
}

inline std::optional<NodeProfile> find_registry_entry(std::string_view name) {
  for (const auto& node : channel_registry()) {
    if (node.id == name) {
      return node;
    }
  }
  return std::nullopt;
}

inline std::vector<NodeProfile> registry_group(ChannelCondition condition) {
  std::vector<NodeProfile> out;
  for (const auto& node : channel_registry()) {
    if (node.condition == condition) {
      out.push_back(node);
    }
  }
  return out;
}

}  // namespace ook_bcc
