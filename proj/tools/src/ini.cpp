#include "blowup/cli/ini.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "blowup/error.hpp"

namespace blowup::cli {

namespace {

[[noreturn]] void fail(int line, const std::string& what) {
  throw Error(ErrorKind::Parse, "line " + std::to_string(line) + ": " + what);
}

std::string strip_comment(const std::string& s) {
  const auto pos = s.find_first_of("#;");
  return pos == std::string::npos ? s : s.substr(0, pos);
}

}  // namespace

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

IniDocument IniDocument::parse(std::istream& in) {
  IniDocument doc;
  std::string section;
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(lineno, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) fail(lineno, "empty section name");
      doc.sections_[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(lineno, "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) fail(lineno, "missing key");
    auto& sec = doc.sections_[section];
    if (sec.count(key)) fail(lineno, "duplicate key '" + key + "'");
    sec[key] = Entry{trim(line.substr(eq + 1)), lineno};
  }
  return doc;
}

IniDocument IniDocument::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open scenario " + path);
  return parse(in);
}

bool IniDocument::has(const std::string& section, const std::string& key) const {
  return find(section, key) != nullptr;
}

bool IniDocument::has_section(const std::string& section) const { return sections_.count(section) > 0; }

const IniDocument::Entry* IniDocument::find(const std::string& section, const std::string& key) const {
  auto s = sections_.find(section);
  if (s == sections_.end()) return nullptr;
  auto k = s->second.find(key);
  if (k == s->second.end()) return nullptr;
  k->second.used = true;
  return &k->second;
}

void IniDocument::set(const std::string& section, const std::string& key, const std::string& value) {
  auto& e = sections_[section][key];
  e.value = value;
}

std::optional<std::string> IniDocument::get_string(const std::string& section, const std::string& key) const {
  const Entry* e = find(section, key);
  if (!e) return std::nullopt;
  return e->value;
}

std::optional<double> IniDocument::get_double(const std::string& section, const std::string& key) const {
  const Entry* e = find(section, key);
  if (!e) return std::nullopt;
  try {
    std::size_t used = 0;
    const double v = std::stod(e->value, &used);
    if (used != e->value.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    fail(e->line, "'" + section + "." + key + "' is not a number: " + e->value);
  }
}

std::optional<int> IniDocument::get_int(const std::string& section, const std::string& key) const {
  const Entry* e = find(section, key);
  if (!e) return std::nullopt;
  try {
    std::size_t used = 0;
    const int v = std::stoi(e->value, &used);
    if (used != e->value.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    fail(e->line, "'" + section + "." + key + "' is not an integer: " + e->value);
  }
}

std::optional<bool> IniDocument::get_bool(const std::string& section, const std::string& key) const {
  const Entry* e = find(section, key);
  if (!e) return std::nullopt;
  std::string v = e->value;
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  fail(e->line, "'" + section + "." + key + "' is not a boolean: " + e->value);
}

std::vector<std::string> IniDocument::get_list(const std::string& section, const std::string& key) const {
  const Entry* e = find(section, key);
  std::vector<std::string> out;
  if (!e) return out;
  std::stringstream ss(e->value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void IniDocument::reject_unused() const {
  for (const auto& [section, keys] : sections_) {
    for (const auto& [key, e] : keys) {
      if (!e.used && e.line > 0) fail(e.line, "unknown key '" + section + "." + key + "'");
    }
  }
}

}  // namespace blowup::cli
