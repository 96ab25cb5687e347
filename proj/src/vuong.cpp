#include "wmcs/vuong.hpp"

#include <algorithm>
#include <cmath>

#include "wmcs/errors.hpp"
#include "wmcs/normal.hpp"

namespace wmcs {

double a_hat_squared(std::span<const double> log_f_i, std::span<const double> log_f_j) {
  if (log_f_i.size() != log_f_j.size()) {
    throw DimensionError("a_hat_squared: log-density vectors differ in length");
  }
  if (log_f_i.size() < 2) throw DimensionError("a_hat_squared: need at least two observations");
  const auto n = static_cast<double>(log_f_i.size());
  // Shifted single pass; the shift keeps cancellation small when the ratios
  // share a large common offset.
  const double shift = log_f_i[0] - log_f_j[0];
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t l = 0; l < log_f_i.size(); ++l) {
    const double d = log_f_i[l] - log_f_j[l] - shift;
    sum += d;
    sum_sq += d * d;
  }
  const double mean = sum / n;
  return std::max(0.0, sum_sq / n - mean * mean);
}

PairStatistic t_statistic(const FittedModel& fit_i, const FittedModel& fit_j, std::size_t i,
                          std::size_t j) {
  const auto& li = fit_i.loglik_per_obs;
  const auto& lj = fit_j.loglik_per_obs;
  if (li.size() != lj.size()) throw DimensionError("t_statistic: fits use different samples");
  for (std::size_t l = 0; l < li.size(); ++l) {
    if (!std::isfinite(li[l] - lj[l])) {
      throw DegenerateVarianceError("t_statistic: non-finite log-likelihood ratio");
    }
  }
  PairStatistic s;
  s.i = i;
  s.j = j;
  const auto n = static_cast<double>(li.size());
  double total = 0.0;
  for (std::size_t l = 0; l < li.size(); ++l) total += li[l] - lj[l];
  s.lr_total = total;
  s.mean_lr = total / n;
  s.penalty = static_cast<double>(fit_i.param_dim()) - static_cast<double>(fit_j.param_dim());
  s.a_hat = std::sqrt(a_hat_squared(li, lj));
  const double numerator = s.lr_total - s.penalty;
  if (s.a_hat > 0.0) {
    s.t_value = numerator / (std::sqrt(n) * s.a_hat);
  } else if (numerator == 0.0) {
    s.t_value = 0.0;
  } else {
    throw DegenerateVarianceError("t_statistic: zero variance with a non-zero likelihood ratio");
  }
  return s;
}

double critical_value(double alpha, std::size_t k) {
  if (k < 2) throw DomainError("critical_value: need at least two models");
  const double level = alpha / static_cast<double>(k - 1);
  if (!(level > 0.0 && level < 1.0)) {
    throw DomainError("critical_value: alpha/(k-1) must lie in (0, 1)");
  }
  return -normal_quantile(level);
}

std::vector<TestOutcome> decide(std::span<const FittedModel> fits, double alpha) {
  const std::size_t k = fits.size();
  const double crit = critical_value(alpha, k);
  std::vector<TestOutcome> out(k);
  for (std::size_t i = 0; i < k; ++i) {
    auto& o = out[i];
    o.model_index = i;
    o.critical = crit;
    o.min_t = kInf;
    for (std::size_t j = 0; j < k; ++j) {
      if (j == i) continue;
      o.t_row.push_back(t_statistic(fits[i], fits[j], i, j));
      o.min_t = std::min(o.min_t, o.t_row.back().t_value);
    }
    o.accepted = o.min_t >= -crit;
  }
  return out;
}

}  // namespace wmcs
