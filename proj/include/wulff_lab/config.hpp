#pragma once

// INI-style run configuration: [section] headers, key = value lines, '#' or ';'
// comments. Every value remembers its line and column for error reports.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "wulff_lab/error.hpp"

namespace wlab {

struct ConfigValue {
  std::string text;
  int line = 0;
  int column = 0;  ///< 1-based column of the value's first character
};

class ConfigSection {
 public:
  std::string name;
  int line = 0;

  bool has(const std::string& key) const { return values_.count(key) > 0; }
  const std::map<std::string, ConfigValue>& values() const { return values_; }

  void set(const std::string& key, ConfigValue v) { values_[key] = std::move(v); }

  const ConfigValue* find(const std::string& key) const {
    auto it = values_.find(key);
    return it == values_.end() ? nullptr : &it->second;
  }

 private:
  std::map<std::string, ConfigValue> values_;
};

inline std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

class RunConfig {
 public:
  static const std::set<std::string>& known_sections() {
    static const std::set<std::string> s = {"grid", "system", "data", "solver", "verify", "output"};
    return s;
  }

  static RunConfig parse(const std::string& text, const std::filesystem::path& origin = {}) {
    RunConfig cfg;
    cfg.origin_ = origin;
    std::istringstream is(text);
    std::string raw;
    int lineno = 0;
    ConfigSection* cur = nullptr;
    while (std::getline(is, raw)) {
      ++lineno;
      if (!raw.empty() && raw.back() == '\r') raw.pop_back();
      std::string line = raw;
      const auto cpos = line.find_first_of("#;");
      if (cpos != std::string::npos) line.resize(cpos);
      const std::string t = trim(line);
      if (t.empty()) continue;
      const int indent = static_cast<int>(line.find_first_not_of(" \t")) + 1;
      if (t.front() == '[') {
        if (t.back() != ']') cfg.fail(lineno, indent, "unterminated section header");
        std::string name = trim(t.substr(1, t.size() - 2));
        if (!known_sections().count(name)) cfg.fail(lineno, indent + 1, "unknown section [" + name + "]");
        if (cfg.sections_.count(name)) cfg.fail(lineno, indent, "duplicate section [" + name + "]");
        cur = &cfg.sections_[name];
        cur->name = name;
        cur->line = lineno;
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string::npos) cfg.fail(lineno, indent, "expected 'key = value'");
      if (!cur) cfg.fail(lineno, indent, "key outside of any section");
      const std::string key = trim(line.substr(0, eq));
      if (key.empty()) cfg.fail(lineno, indent, "empty key");
      const std::string rest = line.substr(eq + 1);
      const std::size_t vstart = rest.find_first_not_of(" \t");
      const int col = static_cast<int>(eq + 2 + (vstart == std::string::npos ? 0 : vstart));
      if (cur->has(key)) cfg.fail(lineno, indent, "duplicate key '" + key + "'");
      cur->set(key, {trim(rest), lineno, col});
    }
    return cfg;
  }

  static RunConfig load(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error(Errc::ConfigParse, path.string() + ": cannot open config file");
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse(ss.str(), path);
  }

  bool has_section(const std::string& s) const { return sections_.count(s) > 0; }

  const ConfigSection* section(const std::string& s) const {
    auto it = sections_.find(s);
    return it == sections_.end() ? nullptr : &it->second;
  }

  const ConfigValue* find(const std::string& sec, const std::string& key) const {
    const ConfigSection* s = section(sec);
    return s ? s->find(key) : nullptr;
  }

  std::string get_string(const std::string& sec, const std::string& key, const std::string& def = "") const {
    const ConfigValue* v = find(sec, key);
    return v ? v->text : def;
  }

  double get_double(const std::string& sec, const std::string& key, double def) const {
    const ConfigValue* v = find(sec, key);
    if (!v) return def;
    try {
      std::size_t pos = 0;
      double d = std::stod(v->text, &pos);
      if (pos == v->text.size()) return d;
    } catch (const std::exception&) {
    }
    fail(v->line, v->column, "'" + key + "' must be a number, got '" + v->text + "'");
  }

  long long get_int(const std::string& sec, const std::string& key, long long def) const {
    const ConfigValue* v = find(sec, key);
    if (!v) return def;
    try {
      std::size_t pos = 0;
      long long d = std::stoll(v->text, &pos);
      if (pos == v->text.size()) return d;
    } catch (const std::exception&) {
    }
    fail(v->line, v->column, "'" + key + "' must be an integer, got '" + v->text + "'");
  }

  std::uint64_t get_u64(const std::string& sec, const std::string& key, std::uint64_t def) const {
    const ConfigValue* v = find(sec, key);
    if (!v) return def;
    try {
      std::size_t pos = 0;
      unsigned long long d = std::stoull(v->text, &pos);
      if (pos == v->text.size() && v->text.find('-') == std::string::npos) return d;
    } catch (const std::exception&) {
    }
    fail(v->line, v->column, "'" + key + "' must be a non-negative integer, got '" + v->text + "'");
  }

  bool get_bool(const std::string& sec, const std::string& key, bool def) const {
    const ConfigValue* v = find(sec, key);
    if (!v) return def;
    if (v->text == "true" || v->text == "yes" || v->text == "1") return true;
    if (v->text == "false" || v->text == "no" || v->text == "0") return false;
    fail(v->line, v->column, "'" + key + "' must be true or false");
  }

  /// Comma-separated list; empty items are dropped.
  std::vector<std::string> get_list(const std::string& sec, const std::string& key) const {
    std::vector<std::string> out;
    const ConfigValue* v = find(sec, key);
    if (!v) return out;
    std::string item;
    std::istringstream is(v->text);
    while (std::getline(is, item, ','))
      if (auto t = trim(item); !t.empty()) out.push_back(t);
    return out;
  }

  /// Path relative to the config file's directory; must exist at parse time.
  std::filesystem::path get_existing_path(const std::string& sec, const std::string& key) const {
    const ConfigValue* v = find(sec, key);
    if (!v) return {};
    std::filesystem::path p(v->text);
    if (p.is_relative() && !origin_.empty()) p = origin_.parent_path() / p;
    if (!std::filesystem::exists(p)) fail(v->line, v->column, "referenced file does not exist: " + p.string());
    return p;
  }

  /// Rejects keys outside `allowed` in one section.
  void require_keys(const std::string& sec, const std::set<std::string>& allowed) const {
    const ConfigSection* s = section(sec);
    if (!s) return;
    for (const auto& [k, v] : s->values())
      if (!allowed.count(k)) fail(v.line, 1, "unknown key '" + k + "' in [" + sec + "]");
  }

  [[noreturn]] void fail(int line, int col, const std::string& msg) const {
    std::string where = origin_.empty() ? std::string("config") : origin_.string();
    throw Error(Errc::ConfigParse, where + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
  }

  [[noreturn]] void fail_at(const std::string& sec, const std::string& key, const std::string& msg) const {
    const ConfigValue* v = find(sec, key);
    if (v) fail(v->line, v->column, msg);
    const ConfigSection* s = section(sec);
    fail(s ? s->line : 0, 1, msg);
  }

  const std::filesystem::path& origin() const { return origin_; }

 private:
  std::map<std::string, ConfigSection> sections_;
  std::filesystem::path origin_;
};

}  // namespace wlab
