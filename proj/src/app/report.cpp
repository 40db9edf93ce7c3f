#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "restriction_lab/app.hpp"

namespace rlab {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.11e", v);
  return buf;
}

std::string json_number(double v) { return std::isfinite(v) ? format_double(v) : "null"; }

std::string json_escape(const std::string& s) {
  std::string o;
  for (char ch : s) {
    const unsigned char c = static_cast<unsigned char>(ch);
    switch (c) {
      case '"':
        o += "\\\"";
        break;
      case '\\':
        o += "\\\\";
        break;
      case '\n':
        o += "\\n";
        break;
      case '\t':
        o += "\\t";
        break;
      case '\r':
        o += "\\r";
        break;
      default:
        if (c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          o += buf;
        } else {
          o += ch;
        }
    }
  }
  return o;
}

bool check_passes(CheckKind kind, double expected, double actual, double rel_tol) {
  if (!std::isfinite(actual)) return false;
  const double slack = expected == 0 ? rel_tol : rel_tol * std::abs(expected);
  switch (kind) {
    case CheckKind::Equal:
      return std::abs(actual - expected) <= slack;
    case CheckKind::AtLeast:
      return actual >= expected - slack;
    case CheckKind::AtMost:
      return actual <= expected + slack;
  }
  return false;
}

void CheckReport::add(const std::string& name, double expected, double actual, double rel_tol,
                      CheckKind kind) {
  checks.push_back({name, expected, actual, rel_tol, kind, check_passes(kind, expected, actual, rel_tol)});
}

bool CheckReport::overall_pass() const {
  for (const Check& c : checks)
    if (!c.pass) return false;
  return true;
}

namespace {

const char* kind_name(CheckKind k) {
  switch (k) {
    case CheckKind::Equal:
      return "equal";
    case CheckKind::AtLeast:
      return "at_least";
    case CheckKind::AtMost:
      return "at_most";
  }
  return "equal";
}

}  // namespace

std::string CheckReport::to_json() const {
  std::ostringstream o;
  o << "{\n  \"schema\": \"v1\",\n  \"suite\": \"" << json_escape(suite) << "\",\n  \"checks\": [";
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const Check& c = checks[i];
    o << (i ? ",\n" : "\n") << "    {\"name\": \"" << json_escape(c.name) << "\", \"expected\": "
      << json_number(c.expected) << ", \"actual\": " << json_number(c.actual)
      << ", \"rel_tol\": " << json_number(c.rel_tol) << ", \"kind\": \"" << kind_name(c.kind)
      << "\", \"pass\": " << (c.pass ? "true" : "false") << "}";
  }
  o << "\n  ],\n  \"overall_pass\": " << (overall_pass() ? "true" : "false") << "\n}\n";
  return o.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp + "' for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("write to '" + tmp + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename '" + tmp + "' to '" + path + "': " + ec.message());
}

}  // namespace rlab
