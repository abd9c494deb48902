#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fillinglab {

// Flat "key = value" text. Lines starting with '#' are comments; repeated
// keys are kept in order. "include = path" splices another file (relative to
// the including file) at that position.
class KeyValueFile {
 public:
  static KeyValueFile parse(const std::string& text, const std::filesystem::path& base_dir = {});
  static KeyValueFile load(const std::filesystem::path& path);

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }
  std::vector<std::string> all(const std::string& key) const;
  std::optional<std::string> get(const std::string& key) const;  // last occurrence
  bool has(const std::string& key) const { return get(key).has_value(); }

  void set(const std::string& key, const std::string& value);
  std::string serialize() const;

 private:
  static void parse_into(KeyValueFile& out, const std::string& text, const std::filesystem::path& base_dir,
                         int include_depth);
  std::vector<std::pair<std::string, std::string>> entries_;
};

std::string trim(const std::string& s);
std::vector<std::string> split(const std::string& s, char sep);

}  // namespace fillinglab
