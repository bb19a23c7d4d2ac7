#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace blowup::cli {

/// Flat sectioned key/value document:
///
///   # comment
///   [section]
///   key = value      ; trailing comment
///
/// Keys outside any section land in section "". Values keep inner spaces.
class IniDocument {
 public:
  struct Entry {
    std::string value;
    int line = 0;
    mutable bool used = false;
  };

  static IniDocument parse(std::istream& in);
  static IniDocument parse_file(const std::string& path);

  bool has(const std::string& section, const std::string& key) const;
  const Entry* find(const std::string& section, const std::string& key) const;
  void set(const std::string& section, const std::string& key, const std::string& value);

  std::optional<std::string> get_string(const std::string& section, const std::string& key) const;
  std::optional<double> get_double(const std::string& section, const std::string& key) const;
  std::optional<int> get_int(const std::string& section, const std::string& key) const;
  std::optional<bool> get_bool(const std::string& section, const std::string& key) const;
  std::vector<std::string> get_list(const std::string& section, const std::string& key) const;

  bool has_section(const std::string& section) const;

  /// Throws Parse naming the first entry nobody asked for.
  void reject_unused() const;

 private:
  std::map<std::string, std::map<std::string, Entry>> sections_;
};

std::string trim(const std::string& s);

}  // namespace blowup::cli
