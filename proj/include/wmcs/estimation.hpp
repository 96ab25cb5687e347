#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "wmcs/densities.hpp"

namespace wmcs {

// An i.i.d. sample with a cached sorted copy for ECDF queries.
class Dataset {
 public:
  // Throws InsufficientDataError when empty and DomainError on non-finite values.
  explicit Dataset(std::vector<double> values);

  std::span<const double> values() const { return values_; }
  std::span<const double> sorted() const { return sorted_; }
  std::size_t size() const { return values_.size(); }

 private:
  std::vector<double> values_;
  std::vector<double> sorted_;
};

// (1/n) #{x_i <= t}.
double ecdf(const Dataset& data, double t);

// Empirical mass of a half-open region, ecdf(upper) - ecdf(lower).
double ecdf_measure(const Dataset& data, const Interval& region);

// Mean of weighted_log_pdf over all observations; -inf as soon as one
// observation has zero weighted density.
double mean_log_density(const WeightedFamily& wf, const Dataset& data,
                        std::optional<double> norm_constant = std::nullopt);

struct OptimizerOptions {
  int max_iter = 500;  // per start
  double tol = 1e-8;   // relative objective change
  int restarts = 4;    // perturbed starts in addition to the moment start
  std::uint64_t seed = 20140101;
};

// Quasi-maximum-likelihood fit of a weighted family.
//
// For indicator weights only observations inside the region enter the
// likelihood. Their stored contribution carries the -log P_h(A) constant;
// observations outside the region contribute exactly zero and are flagged in
// `in_region`. For other weights every observation is in the region.
struct FittedModel {
  WeightedFamily wf;             // base family carries theta_hat
  double norm_constant = 1.0;    // normalizer used for the stored log-densities
  std::vector<double> loglik_per_obs;
  std::vector<bool> in_region;
  double loglik_total = 0.0;
  double mean_loglik = 0.0;
  std::size_t effective_n = 0;
  bool converged = false;
  int n_restarts_used = 0;

  std::span<const double> theta_hat() const { return wf.base().params(); }
  std::size_t param_dim() const { return wf.base().param_dim(); }
};

// Builds the FittedModel record for fixed parameters (no optimization).
// Used by fit_qmle and by tests that compare statistics on known densities.
FittedModel evaluate_model(const WeightedFamily& wf, const Dataset& data,
                           std::optional<double> norm_constant = std::nullopt);

// Moment-based starting point for the family's parameters, computed from the
// observations that fall inside the weight's region.
std::vector<double> moment_start(const WeightedFamily& wf, std::span<const double> xs);

// Maximizes the (local) log-likelihood over the family's parameter domain.
// Positive parameters are optimized on the log scale. The moment start plus
// `opts.restarts` perturbed starts are run; the best finite objective wins,
// ties going to the earliest start.
//
// Throws InsufficientDataError when fewer than param_dim + 1 observations lie
// in the region or all of them coincide, NotAvailableError for families that
// cannot be fitted, and NonConvergenceError when no start reaches a finite
// objective.
FittedModel fit_qmle(const WeightedFamily& wf, const Dataset& data,
                     const OptimizerOptions& opts = {});

}  // namespace wmcs
