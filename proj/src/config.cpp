#include "nflab/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "nflab/error.hpp"

namespace nflab {

namespace {

// ---------------------------------------------------------------------------
// TOML subset: comments, [table] headers, key = value with basic and literal
// strings, integers, floats, booleans and (possibly multi-line) arrays.

struct TomlValue {
  enum class Kind { String, Integer, Float, Boolean, Array } kind = Kind::String;
  std::string str;
  long long integer = 0;
  double real = 0.0;
  bool boolean = false;
  std::vector<TomlValue> items;
};

[[noreturn]] void config_error(const std::string& msg, int line = 0) {
  throw Error(ErrorKind::Config, line > 0 ? "config line " + std::to_string(line) + ": " + msg : msg);
}

class TomlReader {
 public:
  TomlReader(std::string_view text, int line) : text_(text), line_(line) {}

  TomlValue value() {
    skip_space();
    if (at_end()) fail("missing value");
    const char c = text_[pos_];
    if (c == '"') return basic_string();
    if (c == '\'') return literal_string();
    if (c == '[') return array();
    if (text_.substr(pos_, 4) == "true") {
      pos_ += 4;
      TomlValue v;
      v.kind = TomlValue::Kind::Boolean;
      v.boolean = true;
      return v;
    }
    if (text_.substr(pos_, 5) == "false") {
      pos_ += 5;
      TomlValue v;
      v.kind = TomlValue::Kind::Boolean;
      return v;
    }
    return number();
  }

  void finish() {
    skip_space();
    if (!at_end()) fail("trailing characters after value");
  }

 private:
  TomlValue basic_string() {
    ++pos_;
    TomlValue v;
    while (!at_end() && text_[pos_] != '"') {
      char c = text_[pos_++];
      if (c == '\\') {
        if (at_end()) fail("unterminated escape");
        const char e = text_[pos_++];
        switch (e) {
          case 'n': c = '\n'; break;
          case 't': c = '\t'; break;
          case '"': c = '"'; break;
          case '\\': c = '\\'; break;
          default: fail(std::string("unsupported escape \\") + e);
        }
      }
      v.str.push_back(c);
    }
    if (at_end()) fail("unterminated string");
    ++pos_;
    return v;
  }

  TomlValue literal_string() {
    ++pos_;
    const std::size_t end = text_.find('\'', pos_);
    if (end == std::string_view::npos) fail("unterminated string");
    TomlValue v;
    v.str = std::string(text_.substr(pos_, end - pos_));
    pos_ = end + 1;
    return v;
  }

  TomlValue array() {
    ++pos_;
    TomlValue v;
    v.kind = TomlValue::Kind::Array;
    for (;;) {
      skip_space();
      if (at_end()) fail("unterminated array");
      if (text_[pos_] == ']') {
        ++pos_;
        return v;
      }
      v.items.push_back(value());
      skip_space();
      if (!at_end() && text_[pos_] == ',') {
        ++pos_;
      } else if (at_end() || text_[pos_] != ']') {
        fail("expected ',' or ']' in array");
      }
    }
  }

  TomlValue number() {
    const std::size_t start = pos_;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                         text_[pos_] == '.' || text_[pos_] == '+' || text_[pos_] == '-' ||
                         text_[pos_] == '_'))
      ++pos_;
    std::string tok;
    for (char c : text_.substr(start, pos_ - start))
      if (c != '_') tok.push_back(c);
    if (tok.empty()) fail("expected a value");
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    if (*first == '+') ++first;
    TomlValue v;
    const bool is_float = tok.find_first_of(".eE") != std::string::npos || tok.find("inf") != std::string::npos ||
                          tok.find("nan") != std::string::npos;
    if (!is_float) {
      v.kind = TomlValue::Kind::Integer;
      const auto [p, ec] = std::from_chars(first, last, v.integer);
      if (ec != std::errc() || p != last) fail("malformed number '" + tok + "'");
    } else {
      v.kind = TomlValue::Kind::Float;
      const auto [p, ec] = std::from_chars(first, last, v.real);
      if (ec != std::errc() || p != last) fail("malformed number '" + tok + "'");
    }
    return v;
  }

  void skip_space() {
    while (!at_end()) {
      const char c = text_[pos_];
      if (c == '#') {
        while (!at_end() && text_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  bool at_end() const { return pos_ >= text_.size(); }
  [[noreturn]] void fail(const std::string& msg) const { config_error(msg, line_); }

  std::string_view text_;
  int line_;
  std::size_t pos_ = 0;
};

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

// Bracket depth of a line, ignoring strings and comments.
int bracket_balance(std::string_view s) {
  int depth = 0;
  char quote = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (quote) {
      if (c == '\\' && quote == '"') ++i;
      else if (c == quote) quote = 0;
    } else if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '#') {
      while (i + 1 < s.size() && s[i + 1] != '\n') ++i;
    } else if (c == '[') {
      ++depth;
    } else if (c == ']') {
      --depth;
    }
  }
  return depth;
}

// Flat "table.key" -> value map.
std::map<std::string, std::pair<TomlValue, int>> read_toml(std::string_view text) {
  std::map<std::string, std::pair<TomlValue, int>> out;
  std::string table;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    if (t.front() == '[') {
      const std::size_t close = t.find(']');
      if (close == std::string::npos) config_error("unterminated table header", lineno);
      const std::string rest = trim(std::string_view(t).substr(close + 1));
      if (!rest.empty() && rest.front() != '#') config_error("text after table header", lineno);
      table = trim(std::string_view(t).substr(1, close - 1));
      if (table.empty()) config_error("empty table name", lineno);
      continue;
    }
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos) config_error("expected key = value", lineno);
    std::string key = trim(std::string_view(t).substr(0, eq));
    if (key.size() >= 2 && (key.front() == '"' || key.front() == '\''))
      key = key.substr(1, key.size() - 2);
    if (key.empty()) config_error("empty key", lineno);
    std::string value_text = t.substr(eq + 1);
    const int start_line = lineno;
    while (bracket_balance(value_text) > 0 && std::getline(in, line)) {
      ++lineno;
      value_text += "\n" + line;
    }
    TomlReader reader(value_text, start_line);
    TomlValue v = reader.value();
    reader.finish();
    const std::string full = table.empty() ? key : table + "." + key;
    if (!out.emplace(full, std::make_pair(std::move(v), start_line)).second)
      config_error("duplicate key '" + full + "'", start_line);
  }
  return out;
}

std::string as_string(const std::string& key, const TomlValue& v) {
  if (v.kind != TomlValue::Kind::String) config_error("'" + key + "' must be a string");
  return v.str;
}

double as_double(const std::string& key, const TomlValue& v) {
  if (v.kind == TomlValue::Kind::Float) return v.real;
  if (v.kind == TomlValue::Kind::Integer) return static_cast<double>(v.integer);
  config_error("'" + key + "' must be a number");
}

int as_int(const std::string& key, const TomlValue& v) {
  if (v.kind != TomlValue::Kind::Integer || v.integer < -2147483647 || v.integer > 2147483647)
    config_error("'" + key + "' must be an integer");
  return static_cast<int>(v.integer);
}

const std::vector<TomlValue>& as_array(const std::string& key, const TomlValue& v) {
  if (v.kind != TomlValue::Kind::Array) config_error("'" + key + "' must be an array");
  return v.items;
}

Expr parse_field(const std::string& key, const std::string& text) {
  try {
    return parse(text);
  } catch (const Error& e) {
    config_error("'" + key + "': " + e.what());
  }
}

// Built-in scenarios, in the same format users write.
struct Builtin {
  const char* name;
  const char* toml;
};

constexpr Builtin kBuiltins[] = {
    {"cara-counterexample", R"toml(# f_n = e^{nz} omits 0, inf and the continuous -e^{i n Im z}
name = "cara-counterexample"
f = "exp(n*z)"
a = "0"
b = "inf"
c = "-exp(i*n*im(z))"
families = ["exp(n*z)"]
epsilon = 0.96
n_list = [2, 4, 6, 8, 12, 16, 24, 32]

[domain]
center = [0.0, 0.0]
radius = 0.5

[grid]
radial = 64
angular = 256
)toml"},
    {"zalcman-counterexample", R"toml(# f_n = nz + sqrt(n), g_n = -nz + sqrt(n): no common blow-up sequence
name = "zalcman-counterexample"
f = "n*z + sqrt(n)"
families = ["n*z + sqrt(n)", "-n*z + sqrt(n)"]
n_list = [256, 1024, 4096, 16384, 65536, 262144, 1048576, 4194304]

# The ring radii i/2048 contain every -1/sqrt(n) above.
[domain]
center = [0.0, 0.0]
radius = 0.0625

[grid]
radial = 129
angular = 256
)toml"},
};

}  // namespace

std::vector<Expr> ScenarioConfig::family_exprs() const {
  std::vector<Expr> out;
  if (families.empty()) {
    out.push_back(parse_field("f", f));
  } else {
    for (std::size_t i = 0; i < families.size(); ++i)
      out.push_back(parse_field("families[" + std::to_string(i) + "]", families[i]));
  }
  return out;
}

FamilyScenario ScenarioConfig::scenario() const {
  if (!a || !b || !c || !epsilon)
    config_error("scenario '" + name + "' has no exceptional functions a, b, c with epsilon");
  FamilyScenario s;
  s.f = parse_field("f", f);
  s.a = parse_field("a", *a);
  s.b = parse_field("b", *b);
  s.c = parse_field("c", *c);
  s.epsilon = *epsilon;
  s.domain = domain();
  s.n_list = n_list;
  return s;
}

void ScenarioConfig::validate() const {
  // The name becomes part of output file names.
  if (name.empty() || name.front() == '.' ||
      !std::all_of(name.begin(), name.end(), [](unsigned char ch) {
        return std::isalnum(ch) || ch == '-' || ch == '_' || ch == '.';
      }))
    config_error("name must be non-empty and use only letters, digits, '-', '_' and '.'");
  if (f.empty()) config_error("missing required key 'f'");
  parse_field("f", f);
  family_exprs();
  const int present = a.has_value() + b.has_value() + c.has_value();
  if (present != 0 && present != 3) config_error("give all of a, b, c or none");
  if (n_list.empty()) config_error("n_list must not be empty");
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (n_list[i] < 1) config_error("n_list entries must be >= 1");
    if (i > 0 && n_list[i] <= n_list[i - 1]) config_error("n_list must be strictly increasing");
  }
  try {
    domain().validate();
    if (present == 3) {
      if (!epsilon) config_error("epsilon is required with a, b, c");
      scenario().validate();
    } else if (epsilon && (!(*epsilon > 0.0) || *epsilon > kMaxSeparation)) {
      config_error("epsilon must lie in (0, (pi/2)^3]");
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Config) throw;
    config_error(e.what());
  }
}

ScenarioConfig parse_config(std::string_view toml) {
  static const std::set<std::string> kKnown = {
      "name", "f", "a", "b", "c", "families", "epsilon", "n_list", "out",
      "domain.center", "domain.radius", "grid.radial", "grid.angular"};
  const auto entries = read_toml(toml);
  ScenarioConfig cfg;
  for (const auto& [key, entry] : entries) {
    const auto& [v, line] = entry;
    if (!kKnown.count(key)) config_error("unknown key '" + key + "'", line);
    if (key == "name") cfg.name = as_string(key, v);
    else if (key == "f") cfg.f = as_string(key, v);
    else if (key == "a") cfg.a = as_string(key, v);
    else if (key == "b") cfg.b = as_string(key, v);
    else if (key == "c") cfg.c = as_string(key, v);
    else if (key == "families") {
      for (const auto& item : as_array(key, v)) cfg.families.push_back(as_string(key, item));
    } else if (key == "epsilon") cfg.epsilon = as_double(key, v);
    else if (key == "n_list") {
      for (const auto& item : as_array(key, v)) cfg.n_list.push_back(as_int(key, item));
    } else if (key == "out") cfg.out = as_string(key, v);
    else if (key == "domain.center") {
      const auto& items = as_array(key, v);
      if (items.size() != 2) config_error("domain.center must be [re, im]", line);
      cfg.center = {as_double(key, items[0]), as_double(key, items[1])};
    } else if (key == "domain.radius") cfg.radius = as_double(key, v);
    else if (key == "grid.radial") cfg.radial = as_int(key, v);
    else if (key == "grid.angular") cfg.angular = as_int(key, v);
  }
  if (cfg.name.empty()) cfg.name = "scenario";
  cfg.validate();
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) config_error("cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::vector<std::string> builtin_names() {
  std::vector<std::string> out;
  for (const auto& b : kBuiltins) out.emplace_back(b.name);
  return out;
}

std::optional<ScenarioConfig> builtin_config(std::string_view name) {
  for (const auto& b : kBuiltins)
    if (name == b.name) return parse_config(b.toml);
  return std::nullopt;
}

ScenarioConfig resolve_config(const std::string& name_or_path) {
  if (auto b = builtin_config(name_or_path)) return *b;
  return load_config(name_or_path);
}

}  // namespace nflab
