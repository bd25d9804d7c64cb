#pragma once

#include <vector>

namespace toolsim {

struct AssignmentResult {
  double cost = 0.0;
  std::vector<int> column_of_row;  // size = rows
};

/// Minimum-cost assignment of every row to a distinct column (Hungarian
/// method with potentials, O(rows^2 * cols)). Requires rows <= cols and a
/// rectangular, finite cost matrix; throws std::invalid_argument otherwise.
AssignmentResult solve_assignment(const std::vector<std::vector<double>>& cost);

}  // namespace toolsim
