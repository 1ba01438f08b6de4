#pragma once

#include <cstdio>
#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace skewflow {

/// 12 significant digits, '.' decimal separator regardless of locale.
inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

/// Comma-separated writer: optional '#' metadata comment, a header row, data rows.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& os) : os_(os) {}

  void comment(std::string_view text) { os_ << "# " << text << '\n'; }

  void header(std::initializer_list<std::string_view> names) {
    bool first = true;
    for (auto n : names) {
      if (!first) os_ << ',';
      os_ << n;
      first = false;
    }
    os_ << '\n';
  }

  void header(const std::vector<std::string>& names) {
    for (std::size_t i = 0; i < names.size(); ++i) os_ << (i ? "," : "") << names[i];
    os_ << '\n';
  }

  CsvWriter& cell(double v) {
    sep();
    os_ << format_number(v);
    return *this;
  }
  CsvWriter& cell(std::string_view s) {
    sep();
    os_ << s;
    return *this;
  }
  void end_row() {
    os_ << '\n';
    fresh_ = true;
  }

 private:
  void sep() {
    if (!fresh_) os_ << ',';
    fresh_ = false;
  }

  std::ostream& os_;
  bool fresh_{true};
};

}  // namespace skewflow
