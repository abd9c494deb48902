#include "fillinglab/kv.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fillinglab {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

void KeyValueFile::parse_into(KeyValueFile& out, const std::string& text, const std::filesystem::path& base_dir,
                              int include_depth) {
  if (include_depth > 8) throw std::runtime_error("include nesting too deep");
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw std::runtime_error("line " + std::to_string(lineno) + ": empty key");
    if (key == "include") {
      auto path = base_dir / value;
      std::ifstream f(path);
      if (!f) throw std::runtime_error("cannot open include '" + path.string() + "'");
      std::stringstream ss;
      ss << f.rdbuf();
      parse_into(out, ss.str(), path.parent_path(), include_depth + 1);
      continue;
    }
    out.entries_.emplace_back(std::move(key), std::move(value));
  }
}

KeyValueFile KeyValueFile::parse(const std::string& text, const std::filesystem::path& base_dir) {
  KeyValueFile out;
  parse_into(out, text, base_dir, 0);
  return out;
}

KeyValueFile KeyValueFile::load(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str(), path.parent_path());
}

std::vector<std::string> KeyValueFile::all(const std::string& key) const {
  std::vector<std::string> out;
  for (const auto& [k, v] : entries_)
    if (k == key) out.push_back(v);
  return out;
}

std::optional<std::string> KeyValueFile::get(const std::string& key) const {
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it)
    if (it->first == key) return it->second;
  return std::nullopt;
}

void KeyValueFile::set(const std::string& key, const std::string& value) {
  for (auto& [k, v] : entries_)
    if (k == key) {
      v = value;
      return;
    }
  entries_.emplace_back(key, value);
}

std::string KeyValueFile::serialize() const {
  std::string s;
  for (const auto& [k, v] : entries_) s += k + " = " + v + "\n";
  return s;
}

}  // namespace fillinglab
