#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace pax {

// thrown when a structured-text input cannot be parsed into a model/mechanism
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// thrown when two otherwise-valid inputs cannot be combined (grid/model mismatch)
struct IncompatibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// thrown when an operation's stated precondition is violated by the caller
struct PreconditionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct QuadratureError : std::runtime_error {
  double achieved_error;
  double value;
  QuadratureError(const std::string& msg, double achieved, double val)
      : std::runtime_error(msg), achieved_error(achieved), value(val) {}
};

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// thrown when an output file cannot be written
struct WriteError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// row-major numeric table
struct Table {
  int rows = 0;
  int cols = 0;
  std::vector<double> v;

  Table() = default;
  Table(int r, int c, double fill = 0.0) : rows(r), cols(c), v(static_cast<size_t>(r) * c, fill) {}
  double& at(int r, int c) { return v[static_cast<size_t>(r) * cols + c]; }
  double at(int r, int c) const { return v[static_cast<size_t>(r) * cols + c]; }
};

// 12 significant digits, '.' decimal, no grouping; shared by every CSV/text report
inline std::string fmt12(double x) {
  if (x == 0.0) x = 0.0;  // normalize -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

inline std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace pax
