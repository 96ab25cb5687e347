#pragma once

#include <span>
#include <vector>

#include "wmcs/estimation.hpp"

namespace wmcs {

// Penalized, variance-normalized log-likelihood ratio between two fitted
// models on the same sample:
//   t = (lr_total - (dim_i - dim_j)) / (sqrt(n) * a_hat)
struct PairStatistic {
  std::size_t i = 0;
  std::size_t j = 0;
  double lr_total = 0.0;
  double penalty = 0.0;
  double a_hat = 0.0;
  double t_value = 0.0;
  double mean_lr = 0.0;
};

struct TestOutcome {
  std::size_t model_index = 0;
  std::vector<PairStatistic> t_row;  // against every other model, in index order
  double min_t = 0.0;
  double critical = 0.0;  // H0 rejected iff min_t < -critical
  bool accepted = false;
};

// Population variance of the per-observation log ratios (divisor n).
// Throws DimensionError on a length mismatch or fewer than two points.
double a_hat_squared(std::span<const double> log_f_i, std::span<const double> log_f_j);

// Throws DimensionError when the fits were made on samples of different size,
// DegenerateVarianceError when the log ratios have zero variance but a
// non-zero penalized total, or when a ratio is not finite. Zero variance with a
// zero total gives t = 0.
PairStatistic t_statistic(const FittedModel& fit_i, const FittedModel& fit_j,
                          std::size_t i = 0, std::size_t j = 1);

// Upper alpha/(k-1) point of the standard normal. Throws DomainError unless
// 0 < alpha/(k-1) < 1 and k >= 2.
double critical_value(double alpha, std::size_t k);

// One outcome per fit; H0_i accepted iff min_j t_ij >= -critical_value(alpha, k).
std::vector<TestOutcome> decide(std::span<const FittedModel> fits, double alpha);

}  // namespace wmcs
