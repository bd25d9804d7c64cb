#include "toolsim/assignment.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace toolsim {

AssignmentResult solve_assignment(const std::vector<std::vector<double>>& cost) {
  const std::size_t n = cost.size();
  AssignmentResult result;
  if (n == 0) return result;
  const std::size_t m = cost[0].size();
  if (n > m) throw std::invalid_argument("assignment needs at least as many columns as rows");
  for (const auto& row : cost) {
    if (row.size() != m) throw std::invalid_argument("cost matrix is not rectangular");
    for (double c : row) {
      if (!std::isfinite(c)) throw std::invalid_argument("cost matrix entries must be finite");
    }
  }

  // 1-based arrays; p[j] is the row matched to column j, index 0 is the virtual start.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(m + 1, inf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  result.column_of_row.assign(n, -1);
  for (std::size_t j = 1; j <= m; ++j) {
    if (p[j] != 0) result.column_of_row[p[j] - 1] = static_cast<int>(j - 1);
  }
  for (std::size_t i = 0; i < n; ++i) result.cost += cost[i][static_cast<std::size_t>(result.column_of_row[i])];
  return result;
}

}  // namespace toolsim
