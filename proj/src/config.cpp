#include "inputsafe/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

#include "inputsafe/error.hpp"

namespace inputsafe {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

[[noreturn]] void fail(int line, const std::string& what) {
  throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what);
}

bool valid_key(std::string_view key) {
  return !key.empty() && std::all_of(key.begin(), key.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

}  // namespace

const ConfigEntry* ConfigDocument::find(std::string_view section, std::string_view key) const {
  for (const auto& e : entries) {
    if (e.section == section && e.key == key) return &e;
  }
  return nullptr;
}

void ConfigDocument::set(std::string_view section, std::string_view key, std::string value) {
  for (auto& e : entries) {
    if (e.section == section && e.key == key) {
      e.value = std::move(value);
      return;
    }
  }
  entries.push_back({std::string(section), std::string(key), std::move(value), 0});
}

void ConfigDocument::erase(std::string_view section, std::string_view key) {
  std::erase_if(entries, [&](const ConfigEntry& e) { return e.section == section && e.key == key; });
}

ConfigDocument parse_config(std::string_view text) {
  ConfigDocument doc;
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') fail(line_no, "unterminated section header");
      const auto name = trim(line.substr(1, line.size() - 2));
      const bool known = std::any_of(std::begin(kConfigSections), std::end(kConfigSections),
                                     [&](const char* s) { return name == s; });
      if (!known) fail(line_no, "unknown section [" + std::string(name) + "]");
      section = std::string(name);
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(line_no, "expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (!valid_key(key)) fail(line_no, "invalid key '" + std::string(key) + "'");
    if (value.empty()) fail(line_no, "empty value for '" + std::string(key) + "'");
    if (doc.find(section, key)) fail(line_no, "duplicate key '" + std::string(key) + "'");
    doc.entries.push_back({section, std::string(key), std::string(value), line_no});
  }
  return doc;
}

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

}  // namespace inputsafe
