#include "fillinglab/budget.hpp"

#include <cstdlib>

namespace fillinglab::budget {

namespace {

std::size_t from_env(const char* name, std::size_t fallback) {
  const char* v = std::getenv(name);
  if (v == nullptr || *v == '\0') return fallback;
  char* end = nullptr;
  unsigned long long parsed = std::strtoull(v, &end, 10);
  if (end == v || parsed == 0) return fallback;
  return static_cast<std::size_t>(parsed);
}

}  // namespace

std::size_t max_ball_vertices() {
  static const std::size_t cap = from_env("FILLINGLAB_MAX_VERTICES", 400000);
  return cap;
}

std::size_t max_group_elements() {
  static const std::size_t cap = from_env("FILLINGLAB_MAX_ELEMENTS", 2000000);
  return cap;
}

std::size_t max_table_entries() {
  static const std::size_t cap = from_env("FILLINGLAB_MAX_TABLE", 60000000);
  return cap;
}

}  // namespace fillinglab::budget
