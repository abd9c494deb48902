#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "fillinglab/group.hpp"
#include "fillinglab/kv.hpp"

namespace fillinglab {

struct Fixture {
  std::string name;
  GroupContext ctx;
  std::string backend = "normal-form";
};

// Text format:
//   name = FIX2
//   factor = Z^2
//   factor = Z
//   peripheral = 0
//   generators = a b ; y      (optional)
//   backend = normal-form     (reserved; only normal-form is implemented)
Fixture parse_fixture(const KeyValueFile& kv);
Fixture load_fixture_file(const std::filesystem::path& path);

// FIX1, FIX2, FIX3 and the single-horoball fixture ZH (Z relative to itself).
Fixture builtin_fixture(const std::string& name);
std::vector<std::string> builtin_fixture_names();
std::string builtin_fixture_text(const std::string& name);

// Resolves a builtin name or a path to a fixture file.
Fixture resolve_fixture(const std::string& name_or_path);

// Slopes per peripheral factor, separated by ';'. Each entry is a
// comma-separated vector; a lone integer n means (n) on a rank-1 factor and
// (1,n) on a rank-2 factor. A single entry applies to every peripheral.
// "none" or "" gives the trivial filling.
FillingSpec parse_slopes(const GroupContext& ctx, const std::string& text);

}  // namespace fillinglab
