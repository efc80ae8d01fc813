#pragma once

// BER result table: technique,tx_power_dbm,n_t,symbols,errors,ber,ci95
// Floating-point columns use the shortest decimal form that parses back to
// the same double; a point with no usable block prints "nan".

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "ook_bcc/errors.hpp"
#include "ook_bcc/montecarlo.hpp"

namespace ook_bcc {

inline constexpr std::string_view kCsvHeader = "technique,tx_power_dbm,n_t,symbols,errors,ber,ci95";

inline std::string format_double(double v) {
  if (std::isnan(v)) {
    return "nan";
  }
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string format_csv_row(const BerPoint& p) {
  std::string row(technique_name(p.technique));
  row += ',' + format_double(p.tx_power_dbm);
  row += ',' + std::to_string(p.n_t);
  row += ',' + std::to_string(p.symbol_count);
  row += ',' + std::to_string(p.error_count);
  row += ',' + format_double(p.ber);
  row += ',' + format_double(p.ci95);
  return row;
}

inline std::string to_csv(std::span<const BerPoint> points) {
  std::vector<BerPoint> sorted(points.begin(), points.end());
  std::stable_sort(sorted.begin(), sorted.end(), csv_order);
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& p : sorted) {
    out += format_csv_row(p);
    out += '\n';
  }
  return out;
}

namespace detail {

template <class T>
T parse_field(std::string_view field, std::string_view column) {
  if constexpr (std::is_floating_point_v<T>) {
    if (field == "nan") {
      return std::nan("");
    }
  }
  T value{};
  const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
  if (res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
    throw ParameterError("bad CSV value '" + std::string(field) + "' in column " +
                         std::string(column));
  }
  return value;
}

}  // namespace detail

inline BerPoint parse_csv_row(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) {
      break;
    }
    start = comma + 1;
  }
  if (fields.size() != 7) {
    throw ParameterError("CSV row must have 7 fields");
  }
  BerPoint p;
  p.technique = parse_technique(fields[0]);
  p.tx_power_dbm = detail::parse_field<double>(fields[1], "tx_power_dbm");
  p.n_t = detail::parse_field<int>(fields[2], "n_t");
  p.symbol_count = detail::parse_field<std::uint64_t>(fields[3], "symbols");
  p.error_count = detail::parse_field<std::uint64_t>(fields[4], "errors");
  p.ber = detail::parse_field<double>(fields[5], "ber");
  p.ci95 = detail::parse_field<double>(fields[6], "ci95");
  return p;
}

inline std::vector<BerPoint> parse_csv(std::string_view text) {
  std::vector<BerPoint> out;
  bool header_seen = false;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (!line.empty() && line.back() == '\r') {
      line.remove_suffix(1);
    }
    if (line.empty()) {
      continue;
    }
    if (!header_seen) {
      if (line != kCsvHeader) {
        throw ParameterError("unexpected CSV header");
      }
      header_seen = true;
      continue;
    }
    out.push_back(parse_csv_row(line));
  }
  return out;
}

}  // namespace ook_bcc
