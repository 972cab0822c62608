#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace tfa {

// RFC-4180 writer: CRLF records, quotes doubled, fields quoted when needed
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path) : os_(path, std::ios::binary) {
    if (!os_) throw std::runtime_error("csv: cannot open " + path);
  }

  CsvWriter& field(const std::string& s) {
    if (!first_) os_ << ",";
    first_ = false;
    if (s.find_first_of(",\"\r\n") != std::string::npos) {
      os_ << '"';
      for (char c : s) {
        if (c == '"') os_ << '"';
        os_ << c;
      }
      os_ << '"';
    } else {
      os_ << s;
    }
    return *this;
  }
  CsvWriter& field(double v) { return field(format(v)); }
  CsvWriter& field(long long v) { return field(std::to_string(v)); }
  CsvWriter& field(int v) { return field(std::to_string(v)); }
  void endrow() {
    os_ << "\r\n";
    first_ = true;
  }

  static std::string format(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  }

 private:
  std::ofstream os_;
  bool first_ = true;
};

}  // namespace tfa
