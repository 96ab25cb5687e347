#pragma once

#include <functional>
#include <span>
#include <vector>

namespace wmcs {

struct SimplexResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Nelder-Mead maximization over R^d. Converged once the spread of objective
// values across the simplex falls below rel_tol * max(1, |best|); the simplex
// is then rebuilt around the best vertex and the search repeated until a
// rebuild no longer improves the objective by more than that tolerance, or
// the iteration budget runs out. Non-finite objective values are treated as
// -inf. The returned value is never worse than the objective at `start`.
SimplexResult maximize_simplex(const std::function<double(std::span<const double>)>& objective,
                               std::vector<double> start, std::span<const double> step,
                               int max_iter, double rel_tol);

}  // namespace wmcs
