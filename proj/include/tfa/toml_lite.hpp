#pragma once

// Small TOML subset reader: [sections], key = value with strings, numbers,
// booleans and flat arrays. Enough to describe experiment configs; keys are
// exposed as "section.key".

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace tfa {

struct TomlValue {
  enum class Kind { string, number, boolean, array } kind = Kind::string;
  std::string str;
  double num = 0.0;
  bool boolean = false;
  std::vector<TomlValue> items;
};

class TomlFile {
 public:
  static TomlFile parse_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("toml: cannot open " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return parse(ss.str());
  }

  static TomlFile parse(const std::string& text) {
    TomlFile f;
    std::string section;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
      ++lineno;
      std::string s = strip(line);
      if (s.empty() || s[0] == '#') continue;
      if (s.front() == '[') {
        auto close = s.find(']');
        if (close == std::string::npos)
          throw std::runtime_error("toml: unterminated section header");
        section = strip(s.substr(1, close - 1));
        continue;
      }
      auto eq = s.find('=');
      if (eq == std::string::npos)
        throw std::runtime_error("toml: expected key = value at line " +
                                 std::to_string(lineno));
      std::string key = strip(s.substr(0, eq));
      std::string val = strip(s.substr(eq + 1));
      std::string full = section.empty() ? key : section + "." + key;
      f.values_[full] = parse_value(val);
    }
    return f;
  }

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  double number(const std::string& key, double fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    return it->second.num;
  }
  long long integer(const std::string& key, long long fallback) const {
    return (long long)std::llround(number(key, (double)fallback));
  }
  bool boolean(const std::string& key, bool fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    return it->second.boolean;
  }
  std::string text(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    return it->second.str;
  }
  std::vector<double> numbers(const std::string& key,
                              std::vector<double> fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    std::vector<double> out;
    if (it->second.kind == TomlValue::Kind::array) {
      for (const auto& v : it->second.items) out.push_back(v.num);
    } else {
      out.push_back(it->second.num);
    }
    return out;
  }

  const std::map<std::string, TomlValue>& raw() const { return values_; }

 private:
  static std::string strip(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
  }

  static TomlValue parse_value(const std::string& v) {
    TomlValue out;
    if (v.empty()) return out;
    if (v.front() == '"') {
      auto close = v.rfind('"');
      out.kind = TomlValue::Kind::string;
      out.str = v.substr(1, close - 1);
      return out;
    }
    if (v.front() == '[') {
      auto close = v.rfind(']');
      if (close == std::string::npos)
        throw std::runtime_error("toml: unterminated array");
      out.kind = TomlValue::Kind::array;
      std::string body = v.substr(1, close - 1);
      std::string cur;
      int depth = 0;
      bool instr = false;
      for (char c : body) {
        if (c == '"') instr = !instr;
        if (!instr && c == '[') ++depth;
        if (!instr && c == ']') --depth;
        if (!instr && depth == 0 && c == ',') {
          if (!strip(cur).empty()) out.items.push_back(parse_value(strip(cur)));
          cur.clear();
        } else {
          cur += c;
        }
      }
      if (!strip(cur).empty()) out.items.push_back(parse_value(strip(cur)));
      return out;
    }
    if (v == "true" || v == "false") {
      out.kind = TomlValue::Kind::boolean;
      out.boolean = v == "true";
      return out;
    }
    out.kind = TomlValue::Kind::number;
    out.num = std::stod(v);
    out.str = v;
    return out;
  }

  std::map<std::string, TomlValue> values_;
};

}  // namespace tfa
