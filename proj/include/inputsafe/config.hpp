#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace inputsafe {

struct ConfigEntry {
  std::string section;  // empty for top-level keys
  std::string key;
  std::string value;
  int line = 0;
};

/// Flat `[section]` / `key = value` document. Order is preserved.
struct ConfigDocument {
  std::vector<ConfigEntry> entries;

  const ConfigEntry* find(std::string_view section, std::string_view key) const;
  void set(std::string_view section, std::string_view key, std::string value);
  void erase(std::string_view section, std::string_view key);
};

inline constexpr const char* kConfigSections[] = {"model",     "barrier", "disturbance",
                                                  "estimator", "gains",   "run"};

// Throws Error{ParseError} with "line N:" prefix; rejects unknown sections and
// duplicate keys.
ConfigDocument parse_config(std::string_view text);

// Shortest decimal that round-trips to the same double.
std::string format_double(double value);

}  // namespace inputsafe
