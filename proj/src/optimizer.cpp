#include "wmcs/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace wmcs {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double safe_eval(const std::function<double(std::span<const double>)>& f,
                 std::span<const double> x) {
  const double v = f(x);
  return std::isnan(v) || v == std::numeric_limits<double>::infinity() ? kNegInf : v;
}

bool small_spread(double best, double worst, double rel_tol) {
  if (best == kNegInf) return false;
  return best - worst <= rel_tol * std::max(1.0, std::abs(best));
}

}  // namespace

SimplexResult maximize_simplex(const std::function<double(std::span<const double>)>& objective,
                               std::vector<double> start, std::span<const double> step,
                               int max_iter, double rel_tol) {
  const std::size_t d = start.size();
  SimplexResult res;
  res.x = start;
  res.value = safe_eval(objective, start);

  std::vector<std::vector<double>> pts(d + 1, start);
  std::vector<double> vals(d + 1);
  std::vector<std::size_t> order(d + 1);
  std::vector<double> centroid(d), trial(d), trial2(d);

  auto build = [&](const std::vector<double>& base, double scale) {
    pts.assign(d + 1, base);
    vals[0] = safe_eval(objective, base);
    for (std::size_t i = 0; i < d; ++i) {
      pts[i + 1][i] += scale * step[i];
      vals[i + 1] = safe_eval(objective, pts[i + 1]);
    }
  };
  auto along = [&](double t, std::vector<double>& out, const std::vector<double>& worst) {
    for (std::size_t k = 0; k < d; ++k) out[k] = centroid[k] + t * (worst[k] - centroid[k]);
  };

  build(start, 1.0);
  double scale = 1.0;
  int iter = 0;
  while (iter < max_iter) {
    // Inner Nelder-Mead loop.
    bool inner_converged = false;
    while (iter < max_iter) {
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(),
                [&](std::size_t a, std::size_t b) { return vals[a] > vals[b]; });
      const std::size_t best = order.front(), worst = order.back();
      const std::size_t second_worst = order[d > 0 ? d - 1 : 0];
      if (small_spread(vals[best], vals[worst], rel_tol)) {
        inner_converged = true;
        break;
      }
      ++iter;
      std::fill(centroid.begin(), centroid.end(), 0.0);
      for (std::size_t i = 0; i <= d; ++i) {
        if (i == worst) continue;
        for (std::size_t k = 0; k < d; ++k) centroid[k] += pts[i][k] / static_cast<double>(d);
      }
      along(-1.0, trial, pts[worst]);
      const double fr = safe_eval(objective, trial);
      if (fr > vals[best]) {
        along(-2.0, trial2, pts[worst]);
        const double fe = safe_eval(objective, trial2);
        if (fe > fr) {
          pts[worst] = trial2;
          vals[worst] = fe;
        } else {
          pts[worst] = trial;
          vals[worst] = fr;
        }
        continue;
      }
      if (fr > vals[second_worst]) {
        pts[worst] = trial;
        vals[worst] = fr;
        continue;
      }
      // Contraction, outside or inside.
      const bool outside = fr > vals[worst];
      along(outside ? -0.5 : 0.5, trial2, pts[worst]);
      const double fc = safe_eval(objective, trial2);
      if (fc > (outside ? fr : vals[worst])) {
        pts[worst] = trial2;
        vals[worst] = fc;
        continue;
      }
      // Shrink towards the best vertex.
      for (std::size_t i = 0; i <= d; ++i) {
        if (i == best) continue;
        for (std::size_t k = 0; k < d; ++k) pts[i][k] = pts[best][k] + 0.5 * (pts[i][k] - pts[best][k]);
        vals[i] = safe_eval(objective, pts[i]);
      }
    }

    const auto best_it = std::max_element(vals.begin(), vals.end());
    const std::size_t best = static_cast<std::size_t>(best_it - vals.begin());
    const double improvement = vals[best] - res.value;
    if (vals[best] > res.value || (res.value == kNegInf && vals[best] > kNegInf)) {
      res.x = pts[best];
      res.value = vals[best];
    }
    if (!inner_converged) break;
    if (res.converged && !(improvement > rel_tol * std::max(1.0, std::abs(res.value)))) break;
    res.converged = true;
    // Restart around the best point with a smaller simplex.
    scale = 0.1;
    build(res.x, scale);
  }
  res.iterations = iter;
  return res;
}

}  // namespace wmcs
