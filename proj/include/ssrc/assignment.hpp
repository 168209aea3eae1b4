#pragma once

#include <vector>

#include <Eigen/Dense>

namespace ssrc {

// Minimum-cost perfect matching on a square cost matrix (Hungarian algorithm, O(n^3)).
// Returns, for each row, the matched column.
std::vector<int> solve_assignment(const Eigen::MatrixXd& cost);

}  // namespace ssrc
