#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fillinglab {

// Raised when a computation would exceed a configured resource cap.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace budget {

// Caps are read once from the environment:
//   FILLINGLAB_MAX_VERTICES   ball vertex cap (default 400000)
//   FILLINGLAB_MAX_ELEMENTS   peripheral enumeration cap (default 2000000)
//   FILLINGLAB_MAX_TABLE      distance-table entry cap (default 60000000)
std::size_t max_ball_vertices();
std::size_t max_group_elements();
std::size_t max_table_entries();

}  // namespace budget
}  // namespace fillinglab
