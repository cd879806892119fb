#pragma once

#include <CLI11.hpp>
#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

namespace bose::cli {

/// Raised for malformed or invalid configuration; message carries the
/// source, line and field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ConfigEntry {
  std::string key;
  std::string value;
  int line = 0;
};

/// Key-value text format:
///
///   # comment
///   beta = 1.0
///   N-seq = 128,256,512
///
/// Keys are the long flag names without leading dashes. Blank lines and
/// lines starting with '#' are ignored. Duplicate keys are rejected.
std::vector<ConfigEntry> read_config(std::istream& in, const std::string& source);
std::vector<ConfigEntry> read_config_file(const std::string& path);

/// Feeds entries to the options of `app` that were not given on the command
/// line, so flags take precedence. Unknown keys and values rejected by an
/// option's validator raise ConfigError naming the line and field.
void apply_config(CLI::App& app, const std::vector<ConfigEntry>& entries, const std::string& source);

/// Comma-separated integers, or a power-of-two range written 2^a..2^b.
/// Must be positive and strictly increasing.
std::vector<long> parse_n_sequence(const std::string& text);

}  // namespace bose::cli
