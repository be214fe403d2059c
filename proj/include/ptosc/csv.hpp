#pragma once

#include <cstdio>
#include <initializer_list>
#include <ostream>
#include <string>
#include <vector>

namespace ptosc::csv {

/// Fixed 12-significant-digit rendering; identical inputs give identical bytes.
inline std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline void header(std::ostream& os, std::initializer_list<const char*> cols) {
  bool first = true;
  for (const char* c : cols) {
    if (!first) os << ',';
    os << c;
    first = false;
  }
  os << '\n';
}

inline void row(std::ostream& os, const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) os << ',';
    os << num(values[i]);
  }
  os << '\n';
}

}  // namespace ptosc::csv
