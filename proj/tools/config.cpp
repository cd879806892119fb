#include "config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace bose::cli {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string where(const std::string& source, int line, const std::string& key) {
  std::ostringstream os;
  os << source << ":" << line;
  if (!key.empty()) os << ": field '" << key << "'";
  return os.str();
}

long parse_long(const std::string& text) {
  long v = 0;
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) throw std::invalid_argument("not an integer: '" + text + "'");
  return v;
}

}  // namespace

std::vector<ConfigEntry> read_config(std::istream& in, const std::string& source) {
  std::vector<ConfigEntry> out;
  std::set<std::string> seen;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string text = trim(raw);
    if (text.empty() || text[0] == '#') continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ConfigError(where(source, line, "") + ": expected key = value");
    ConfigEntry e{trim(text.substr(0, eq)), trim(text.substr(eq + 1)), line};
    if (e.key.empty()) throw ConfigError(where(source, line, "") + ": empty key");
    if (e.key.rfind("--", 0) == 0) e.key = e.key.substr(2);
    if (e.value.empty()) throw ConfigError(where(source, line, e.key) + ": empty value");
    if (!seen.insert(e.key).second) throw ConfigError(where(source, line, e.key) + ": duplicate key");
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<ConfigEntry> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  return read_config(in, path);
}

void apply_config(CLI::App& app, const std::vector<ConfigEntry>& entries, const std::string& source) {
  for (const auto& e : entries) {
    if (e.key == "config") throw ConfigError(where(source, e.line, e.key) + ": nested config files are not supported");
    CLI::Option* opt = app.get_option_no_throw("--" + e.key);
    if (opt == nullptr)
      throw ConfigError(where(source, e.line, e.key) + ": unknown field for '" + app.get_name() + "'");
    if (opt->count() > 0) continue;
    try {
      if (opt->get_type_size() == 0) {
        // flag: accept true/false
        if (e.value == "true" || e.value == "1") {
          opt->add_result("true");
        } else if (e.value == "false" || e.value == "0") {
          continue;
        } else {
          throw ConfigError(where(source, e.line, e.key) + ": expected true or false");
        }
      } else {
        opt->add_result(e.value);
      }
      opt->run_callback();
    } catch (const CLI::Error& err) {
      throw ConfigError(where(source, e.line, e.key) + ": " + err.what());
    }
  }
}

std::vector<long> parse_n_sequence(const std::string& text) {
  std::vector<long> out;
  const auto dots = text.find("..");
  if (dots != std::string::npos) {
    auto exponent = [&](const std::string& part) {
      const std::string p = trim(part);
      if (p.rfind("2^", 0) != 0) throw std::invalid_argument("range bounds must be written 2^k");
      return parse_long(p.substr(2));
    };
    const long a = exponent(text.substr(0, dots)), b = exponent(text.substr(dots + 2));
    if (a < 0 || b > 40 || a > b) throw std::invalid_argument("bad power-of-two range '" + text + "'");
    for (long k = a; k <= b; ++k) out.push_back(1L << k);
  } else {
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_long(trim(item)));
  }
  if (out.empty()) throw std::invalid_argument("empty N sequence");
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i] <= 0) throw std::invalid_argument("N values must be positive");
    if (i > 0 && out[i] <= out[i - 1]) throw std::invalid_argument("N sequence must be strictly increasing");
  }
  return out;
}

}  // namespace bose::cli
