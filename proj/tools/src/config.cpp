#include "dicke/app/config.hpp"

#include <cctype>
#include <charconv>
#include <limits>
#include <fstream>
#include <functional>
#include <sstream>

#include <fmt/format.h>

#include "dicke/error.hpp"

namespace dicke::app {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool is_bare_key(std::string_view k) {
  if (k.empty()) return false;
  for (char c : k)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) return false;
  return true;
}

// Strips a trailing comment outside of a string literal.
std::string_view strip_comment(std::string_view line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) in_string = !in_string;
    if (line[i] == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

struct Field {
  std::string key;
  std::function<void(RunConfig&, const Value&)> set;
  std::function<std::string(const RunConfig&)> get;
};

double as_double(const Value& v) {
  if (const auto* d = std::get_if<double>(&v)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
  throw ConfigError("expected a number");
}

int as_int(const Value& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) {
    if (*i < std::numeric_limits<int>::min() || *i > std::numeric_limits<int>::max())
      throw ConfigError("integer out of range");
    return static_cast<int>(*i);
  }
  throw ConfigError("expected an integer");
}

bool as_bool(const Value& v) {
  if (const auto* b = std::get_if<bool>(&v)) return *b;
  throw ConfigError("expected true or false");
}

std::string as_string(const Value& v) {
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  throw ConfigError("expected a quoted string");
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + '"';
}

std::string num(double d) {
  std::string s = fmt::format("{}", d);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

template <typename Enum>
Enum parse_enum(const std::string& s, std::initializer_list<std::pair<std::string_view, Enum>> options) {
  std::string allowed;
  for (const auto& [name, value] : options) {
    if (s == name) return value;
    allowed += (allowed.empty() ? "" : "|") + std::string(name);
  }
  throw ConfigError(fmt::format("expected one of {}, got \"{}\"", allowed, s));
}

SweepCoupling parse_coupling(const std::string& s) {
  return parse_enum<SweepCoupling>(s, {{"rwa", SweepCoupling::rwa}, {"full", SweepCoupling::full}, {"fixed", SweepCoupling::fixed}});
}

#define DOUBLE_FIELD(key, member) \
  Field { key, [](RunConfig& c, const Value& v) { c.member = as_double(v); }, [](const RunConfig& c) { return num(c.member); } }
#define INT_FIELD(key, member) \
  Field { key, [](RunConfig& c, const Value& v) { c.member = as_int(v); }, [](const RunConfig& c) { return fmt::format("{}", c.member); } }
#define BOOL_FIELD(key, member) \
  Field { key, [](RunConfig& c, const Value& v) { c.member = as_bool(v); }, [](const RunConfig& c) { return c.member ? std::string("true") : std::string("false"); } }
#define GRID_FIELDS(prefix, member)                                 \
  DOUBLE_FIELD(prefix "_min", member.min), DOUBLE_FIELD(prefix "_max", member.max), INT_FIELD(prefix "_points", member.points)

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      INT_FIELD("model.N", model.emitters),
      DOUBLE_FIELD("model.omega_c", model.omega_c),
      DOUBLE_FIELD("model.omega_x", model.omega_x),
      DOUBLE_FIELD("model.omega_d", model.omega_d),
      DOUBLE_FIELD("model.g", model.g),
      DOUBLE_FIELD("model.g_prime", model.g_prime),
      DOUBLE_FIELD("model.Omega", model.Omega),
      DOUBLE_FIELD("model.Omega_prime", model.Omega_prime),
      INT_FIELD("model.n_ph", model.n_ph),
      INT_FIELD("numerics.n_fourier", model.n_fourier),
      INT_FIELD("numerics.n_steps", model.n_steps),
      INT_FIELD("numerics.max_dim", model.max_dim),
      DOUBLE_FIELD("bath.gamma", model.gamma),
      DOUBLE_FIELD("bath.T", model.T),
      BOOL_FIELD("bath.lamb_shift", model.lamb_shift),
      DOUBLE_FIELD("bath.cutoff", model.cutoff),
      GRID_FIELDS("spectrum.omega", spectrum.omega),
      GRID_FIELDS("g2.tau", g2.tau),
      GRID_FIELDS("quasienergies.g", quasienergies.g),
      DOUBLE_FIELD("quasienergies.crossing_tol", quasienergies.crossing_tol),
      Field{"quasienergies.coupling",
            [](RunConfig& c, const Value& v) { c.quasienergies.coupling = parse_coupling(as_string(v)); },
            [](const RunConfig& c) { return quote(std::string(to_string(c.quasienergies.coupling))); }},
      Field{"sweep.observable",
            [](RunConfig& c, const Value& v) {
              c.sweep.observable = parse_enum<SweepObservable>(
                  as_string(v), {{"g2", SweepObservable::g2}, {"eof", SweepObservable::eof}});
            },
            [](const RunConfig& c) { return quote(std::string(to_string(c.sweep.observable))); }},
      Field{"sweep.coupling",
            [](RunConfig& c, const Value& v) { c.sweep.coupling = parse_coupling(as_string(v)); },
            [](const RunConfig& c) { return quote(std::string(to_string(c.sweep.coupling))); }},
      GRID_FIELDS("sweep.T", sweep.T),
      GRID_FIELDS("sweep.g", sweep.g),
      INT_FIELD("sweep.budget", sweep.budget),
      Field{"output.path", [](RunConfig& c, const Value& v) { c.output.path = as_string(v); },
            [](const RunConfig& c) { return quote(c.output.path); }},
      Field{"output.format",
            [](RunConfig& c, const Value& v) {
              c.output.format =
                  parse_enum<OutputFormat>(as_string(v), {{"csv", OutputFormat::csv}, {"json", OutputFormat::json}});
            },
            [](const RunConfig& c) { return quote(std::string(to_string(c.output.format))); }},
  };
  return table;
}

#undef DOUBLE_FIELD
#undef INT_FIELD
#undef BOOL_FIELD
#undef GRID_FIELDS

const Field& find_field(std::string_view key) {
  for (const auto& f : fields())
    if (f.key == key) return f;
  throw ConfigError(fmt::format("unknown key \"{}\"", key));
}

void assign(RunConfig& config, std::string_view key, const Value& value) {
  const Field& f = find_field(key);
  try {
    f.set(config, value);
  } catch (const ConfigError& e) {
    throw ConfigError(fmt::format("{}: {}", key, e.what()));
  }
}

}  // namespace

std::vector<double> Grid::values() const {
  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(std::max(points, 0)));
  if (points == 1) {
    v.push_back(min);
    return v;
  }
  for (int i = 0; i < points; ++i) v.push_back(i == points - 1 ? max : min + (max - min) * i / (points - 1));
  return v;
}

void Grid::validate(std::string_view name) const {
  if (points < 1) throw ConfigError(fmt::format("{}_points must be >= 1", name));
  if (points > 1 && !(max > min))
    throw ConfigError(fmt::format("{} grid must be strictly increasing ({}_max > {}_min)", name, name, name));
}

void RunConfig::validate() const {
  model.validate();
  spectrum.omega.validate("spectrum.omega");
  g2.tau.validate("g2.tau");
  if (g2.tau.min < 0.0) throw ConfigError("g2.tau_min must be >= 0");
  quasienergies.g.validate("quasienergies.g");
  if (quasienergies.g.min < 0.0) throw ConfigError("quasienergies.g_min must be >= 0");
  if (!(quasienergies.crossing_tol > 0.0)) throw ConfigError("quasienergies.crossing_tol must be > 0");
  sweep.T.validate("sweep.T");
  sweep.g.validate("sweep.g");
  if (sweep.T.min < 0.0 || sweep.g.min < 0.0) throw ConfigError("sweep grids must be non-negative");
  if (sweep.budget < 1) throw ConfigError("sweep.budget must be >= 1");
  const long long cells = static_cast<long long>(sweep.T.points) * sweep.g.points;
  if (cells > sweep.budget)
    throw ConfigError(fmt::format("sweep grid has {} points, above sweep.budget = {}", cells, sweep.budget));
}

Value parse_value(std::string_view text) {
  text = trim(text);
  if (text.empty()) throw ConfigError("missing value");
  if (text == "true") return true;
  if (text == "false") return false;
  if (text.front() == '"') {
    if (text.size() < 2 || text.back() != '"') throw ConfigError("unterminated string");
    std::string out;
    for (std::size_t i = 1; i + 1 < text.size(); ++i) {
      char c = text[i];
      if (c == '\\') {
        if (i + 2 >= text.size()) throw ConfigError("dangling escape in string");
        c = text[++i];
        if (c == 'n') c = '\n';
        else if (c == 't') c = '\t';
        else if (c != '"' && c != '\\') throw ConfigError(fmt::format("unsupported escape \\{}", c));
      } else if (c == '"') {
        throw ConfigError("unexpected quote inside string");
      }
      out += c;
    }
    return out;
  }
  std::string cleaned;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '_' && i > 0 && i + 1 < text.size() && std::isdigit(static_cast<unsigned char>(text[i - 1])) &&
        std::isdigit(static_cast<unsigned char>(text[i + 1])))
      continue;
    cleaned += text[i];
  }
  const char* b = cleaned.data();
  const char* e = b + cleaned.size();
  if (*b == '+') ++b;
  const bool looks_float = cleaned.find_first_of(".eE") != std::string::npos || cleaned.find("inf") != std::string::npos ||
                           cleaned.find("nan") != std::string::npos;
  if (!looks_float) {
    std::int64_t i = 0;
    auto [ptr, ec] = std::from_chars(b, e, i);
    if (ec == std::errc() && ptr == e) return i;
  } else {
    double d = 0.0;
    auto [ptr, ec] = std::from_chars(b, e, d);
    if (ec == std::errc() && ptr == e) return d;
  }
  throw ConfigError(fmt::format("cannot parse value \"{}\"", text));
}

Document parse_toml(std::string_view text, std::string_view source) {
  Document doc;
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    const std::string_view raw = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    const std::string_view line = trim(strip_comment(raw));
    if (line.empty()) {
      if (end == text.size()) break;
      continue;
    }
    auto fail = [&](const std::string& what) {
      return ConfigError(fmt::format("{}:{}: {}", source, line_no, what));
    };
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) throw fail("malformed section header");
      const std::string_view name = trim(line.substr(1, line.size() - 2));
      if (!is_bare_key(name)) throw fail(fmt::format("invalid section name \"{}\"", name));
      section = std::string(name);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw fail("expected key = value");
    const std::string_view key = trim(line.substr(0, eq));
    if (!is_bare_key(key)) throw fail(fmt::format("invalid key \"{}\"", key));
    const std::string full = section.empty() ? std::string(key) : section + "." + std::string(key);
    if (doc.entries.count(full)) throw fail(fmt::format("duplicate key \"{}\"", full));
    try {
      doc.entries.emplace(full, Document::Entry{parse_value(line.substr(eq + 1)), line_no});
    } catch (const ConfigError& e) {
      throw fail(e.what());
    }
    if (end == text.size()) break;
  }
  return doc;
}

RunConfig config_from_text(std::string_view text, std::string_view source) {
  const Document doc = parse_toml(text, source);
  RunConfig config;
  for (const auto& [key, entry] : doc.entries) {
    try {
      assign(config, key, entry.value);
    } catch (const ConfigError& e) {
      throw ConfigError(fmt::format("{}:{}: {}", source, entry.line, e.what()));
    }
  }
  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config file \"{}\"", path));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return config_from_text(buffer.str(), path);
}

void apply_override(RunConfig& config, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos)
    throw ConfigError(fmt::format("override \"{}\" is not KEY=VALUE", assignment));
  const std::string_view key = trim(assignment.substr(0, eq));
  std::string_view raw = trim(assignment.substr(eq + 1));
  Value value;
  try {
    value = parse_value(raw);
  } catch (const ConfigError&) {
    // bare words are accepted as strings on the command line
    value = std::string(raw);
  }
  try {
    assign(config, key, value);
  } catch (const ConfigError& e) {
    throw ConfigError(fmt::format("--override {}: {}", assignment, e.what()));
  }
}

std::string serialize(const RunConfig& config) {
  std::string out;
  std::string section;
  for (const auto& f : fields()) {
    const auto dot = f.key.find('.');
    const std::string sec = f.key.substr(0, dot);
    if (sec != section) {
      out += fmt::format("{}[{}]\n", section.empty() ? "" : "\n", sec);
      section = sec;
    }
    out += fmt::format("{} = {}\n", f.key.substr(dot + 1), f.get(config));
  }
  return out;
}

std::string_view to_string(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "json"; }

std::string_view to_string(SweepObservable o) { return o == SweepObservable::g2 ? "g2" : "eof"; }

std::string_view to_string(SweepCoupling c) {
  switch (c) {
    case SweepCoupling::rwa: return "rwa";
    case SweepCoupling::full: return "full";
    case SweepCoupling::fixed: return "fixed";
  }
  return "rwa";
}

}  // namespace dicke::app
