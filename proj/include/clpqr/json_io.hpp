#pragma once

#include <cstdio>
#include <ostream>
#include <string>

#include <json.hpp>

namespace clpqr {

// %.17g keeps reruns byte-identical and round-trips doubles exactly.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// nlohmann::json keeps object keys sorted (std::map), so this emits a fixed
// field order; doubles go through format_double.
inline void write_json(const nlohmann::json& j, std::ostream& os, int indent = 0) {
  const std::string pad(indent, ' ');
  if (j.is_object()) {
    os << "{";
    bool first = true;
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!first) os << ",";
      first = false;
      os << "\n" << pad << "  " << nlohmann::json(it.key()).dump() << ": ";
      write_json(it.value(), os, indent + 2);
    }
    if (!first) os << "\n" << pad;
    os << "}";
  } else if (j.is_array()) {
    os << "[";
    bool first = true;
    for (const auto& v : j) {
      if (!first) os << ", ";
      first = false;
      write_json(v, os, indent);
    }
    os << "]";
  } else if (j.is_number_float()) {
    os << format_double(j.get<double>());
  } else {
    os << j.dump();
  }
}

}  // namespace clpqr
