#pragma once

// Minimal TOML-style config reader: [dotted.section] headers, key = value
// pairs, strings, booleans, numbers, (multi-line) arrays, and single-line
// inline tables. Parse errors carry line numbers.

#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <stdexcept>

namespace saitoh {

class ConfigValue;
using ConfigArray = std::vector<ConfigValue>;
using ConfigTable = std::vector<std::pair<std::string, ConfigValue>>;

class ConfigValue {
 public:
  ConfigValue() : data_(0.0) {}
  explicit ConfigValue(double d) : data_(d) {}
  explicit ConfigValue(bool b) : data_(b) {}
  explicit ConfigValue(std::string s) : data_(std::move(s)) {}
  explicit ConfigValue(ConfigArray a) : data_(std::move(a)) {}
  explicit ConfigValue(ConfigTable t) : data_(std::move(t)) {}

  bool is_number() const { return std::holds_alternative<double>(data_); }
  bool is_bool() const { return std::holds_alternative<bool>(data_); }
  bool is_string() const { return std::holds_alternative<std::string>(data_); }
  bool is_array() const { return std::holds_alternative<ConfigArray>(data_); }
  bool is_table() const { return std::holds_alternative<ConfigTable>(data_); }

  double as_number() const {
    if (!is_number()) throw std::runtime_error("config: expected a number");
    return std::get<double>(data_);
  }
  int as_int() const {
    const double d = as_number();
    const int i = static_cast<int>(d);
    if (d != i) throw std::runtime_error("config: expected an integer");
    return i;
  }
  bool as_bool() const {
    if (!is_bool()) throw std::runtime_error("config: expected a boolean");
    return std::get<bool>(data_);
  }
  const std::string& as_string() const {
    if (!is_string()) throw std::runtime_error("config: expected a string");
    return std::get<std::string>(data_);
  }
  const ConfigArray& as_array() const {
    if (!is_array()) throw std::runtime_error("config: expected an array");
    return std::get<ConfigArray>(data_);
  }
  const ConfigTable& as_table() const {
    if (!is_table()) throw std::runtime_error("config: expected a table");
    return std::get<ConfigTable>(data_);
  }

  const ConfigValue* find(const std::string& key) const {
    for (const auto& [k, v] : as_table())
      if (k == key) return &v;
    return nullptr;
  }
  const ConfigValue& at(const std::string& key) const {
    const ConfigValue* v = find(key);
    if (!v) throw std::runtime_error("config: missing key '" + key + "'");
    return *v;
  }

 private:
  std::variant<double, bool, std::string, ConfigArray, ConfigTable> data_;
};

struct ConfigSection {
  std::string name;
  ConfigTable entries;

  const ConfigValue* find(const std::string& key) const {
    for (const auto& [k, v] : entries)
      if (k == key) return &v;
    return nullptr;
  }
  const ConfigValue& at(const std::string& key) const {
    const ConfigValue* v = find(key);
    if (!v)
      throw std::runtime_error("config section [" + name + "]: missing key '" + key + "'");
    return *v;
  }
};

struct ConfigFile {
  std::vector<ConfigSection> sections;
};

namespace detail {

class ConfigParser {
 public:
  explicit ConfigParser(std::string text) : text_(std::move(text)) {}

  ConfigFile parse() {
    ConfigFile file;
    ConfigSection* current = nullptr;
    for (;;) {
      skip_ws_and_comments(true);
      if (eof()) break;
      if (peek() == '[') {
        get();
        std::string name;
        while (!eof() && peek() != ']') name.push_back(get());
        expect(']');
        file.sections.push_back(ConfigSection{trim(name), {}});
        current = &file.sections.back();
        end_of_line();
        continue;
      }
      std::string key = parse_key();
      skip_ws_and_comments(false);
      expect('=');
      skip_ws_and_comments(false);
      ConfigValue v = parse_value();
      if (!current) fail("key/value pair before any [section] header");
      current->entries.push_back({std::move(key), std::move(v)});
      end_of_line();
    }
    return file;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw std::runtime_error("config parse error at line " + std::to_string(line_) +
                             ": " + msg);
  }

  bool eof() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  char get() {
    const char c = text_[pos_++];
    if (c == '\n') ++line_;
    return c;
  }
  void expect(char c) {
    if (eof() || peek() != c) fail(std::string("expected '") + c + "'");
    get();
  }

  static std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t");
    std::size_t b = s.find_last_not_of(" \t");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
  }

  /// Skip spaces/tabs; when `newlines` also skip line breaks and comments.
  void skip_ws_and_comments(bool newlines) {
    for (;;) {
      while (!eof() && (peek() == ' ' || peek() == '\t')) get();
      if (!eof() && peek() == '#') {
        while (!eof() && peek() != '\n') get();
        continue;
      }
      if (newlines && !eof() && (peek() == '\n' || peek() == '\r')) {
        get();
        continue;
      }
      break;
    }
  }

  void end_of_line() {
    skip_ws_and_comments(false);
    if (eof()) return;
    if (peek() == '\n' || peek() == '\r') return;
    fail("unexpected trailing characters");
  }

  std::string parse_key() {
    std::string key;
    while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' ||
                      peek() == '-' || peek() == '.'))
      key.push_back(get());
    if (key.empty()) fail("expected a key");
    return key;
  }

  ConfigValue parse_value() {
    if (eof()) fail("expected a value");
    const char c = peek();
    if (c == '"') return parse_string();
    if (c == '[') return parse_array();
    if (c == '{') return parse_inline_table();
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_bool();
    return parse_number();
  }

  ConfigValue parse_string() {
    expect('"');
    std::string s;
    while (!eof() && peek() != '"') {
      char c = get();
      if (c == '\\' && !eof()) {
        const char e = get();
        switch (e) {
          case 'n': c = '\n'; break;
          case 't': c = '\t'; break;
          case '"': c = '"'; break;
          case '\\': c = '\\'; break;
          default: fail("unknown escape");
        }
      }
      s.push_back(c);
    }
    expect('"');
    return ConfigValue(std::move(s));
  }

  ConfigValue parse_bool() {
    std::string word;
    while (!eof() && std::isalpha(static_cast<unsigned char>(peek()))) word.push_back(get());
    if (word == "true") return ConfigValue(true);
    if (word == "false") return ConfigValue(false);
    if (word == "nan" || word == "inf") fail("non-finite literals are not accepted");
    fail("unknown literal '" + word + "'");
  }

  ConfigValue parse_number() {
    std::string num;
    while (!eof() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '+' ||
                      peek() == '-' || peek() == '.' || peek() == 'e' || peek() == 'E' ||
                      peek() == '_'))
      num.push_back(get());
    std::erase(num, '_');
    try {
      std::size_t used = 0;
      const double d = std::stod(num, &used);
      if (used != num.size()) fail("malformed number '" + num + "'");
      return ConfigValue(d);
    } catch (const std::logic_error&) {
      fail("malformed number '" + num + "'");
    }
  }

  ConfigValue parse_array() {
    expect('[');
    ConfigArray arr;
    for (;;) {
      skip_ws_and_comments(true);
      if (eof()) fail("unterminated array");
      if (peek() == ']') {
        get();
        break;
      }
      arr.push_back(parse_value());
      skip_ws_and_comments(true);
      if (!eof() && peek() == ',') {
        get();
        continue;
      }
      skip_ws_and_comments(true);
      if (eof() || peek() != ']') fail("expected ',' or ']' in array");
    }
    return ConfigValue(std::move(arr));
  }

  ConfigValue parse_inline_table() {
    expect('{');
    ConfigTable table;
    skip_ws_and_comments(false);
    if (!eof() && peek() == '}') {
      get();
      return ConfigValue(std::move(table));
    }
    for (;;) {
      skip_ws_and_comments(false);
      std::string key = parse_key();
      skip_ws_and_comments(false);
      expect('=');
      skip_ws_and_comments(false);
      table.push_back({std::move(key), parse_value()});
      skip_ws_and_comments(false);
      if (!eof() && peek() == ',') {
        get();
        continue;
      }
      expect('}');
      break;
    }
    return ConfigValue(std::move(table));
  }

  std::string text_;
  std::size_t pos_ = 0;
  int line_ = 1;
};

}  // namespace detail

inline ConfigFile parse_config(const std::string& text) {
  return detail::ConfigParser(text).parse();
}

}  // namespace saitoh
