#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wmcs/confidence_set.hpp"
#include "wmcs/metrics.hpp"

namespace wmcs {

// Largest per-partition level beta with (1 - beta)^m >= 1 - alpha.
double beta_budget(double alpha, std::size_t m);

// (1/n) sum log(a f(x_l) + (1 - a) g(x_l)), from per-observation log-densities.
// -inf when some observation has zero density under the mixture.
double psi_hat(double alpha_mix, std::span<const double> f_log, std::span<const double> g_log);

// Maximizer of psi_hat over [0, 1]. A concave psi_hat whose slope at an end
// points outwards is maximized exactly at that end. Otherwise a 200-point grid
// brackets the maximum and golden-section search refines it to 1e-6. Returns
// 0.5 when psi_hat is flat to 1e-12 over the grid.
//
// Observations with zero density under both components add -inf for every
// weight and are ignored. Throws DegenerateMixtureError when that leaves
// nothing, and DimensionError on a length mismatch.
double optimal_alpha(std::span<const double> f_log, std::span<const double> g_log);

// A convex combination of a component fitted on A and one fitted on A'.
// Component densities are the fitted families restricted to their region and
// renormalized by their own mass there.
struct MixtureCandidate {
  FittedModel f_component;
  FittedModel g_component;
  double alpha_opt = 0.5;
  double psi_at_opt = 0.0;
  std::optional<double> hellinger;
  std::optional<double> l2;

  DensityHandle density() const;
  std::string label() const;
};

struct MixtureSet {
  double alpha = 0.05;
  double beta = 0.025;
  double partition_point = 0.0;
  Interval region_a;
  Interval region_b;
  ConfidenceSet local_a;
  ConfidenceSet local_b;
  std::vector<MixtureCandidate> candidates;  // row-major over (members A) x (members B)
  std::vector<std::string> warnings;
};

// Pairs every fit in `fits_a` with every fit in `fits_b` and computes the
// optimal mixture weight on the full sample. When `reference` is given, the
// Hellinger and L2 distances of each mixture to it are attached.
std::vector<MixtureCandidate> combine_local_fits(std::span<const FittedModel> fits_a,
                                                 std::span<const FittedModel> fits_b,
                                                 const Dataset& data,
                                                 const DensityHandle* reference = nullptr,
                                                 double quad_tol = kDefaultQuadTol);

// Two-partition mixture confidence set with A = (-inf, c] and A' = (c, inf).
// beta defaults to beta_budget(alpha, 2); a larger beta is a DomainError and
// equality is accepted with a warning.
MixtureSet build_mixture_set(const std::vector<ParamFamily>& candidates_a,
                             const std::vector<ParamFamily>& candidates_b, const Dataset& data,
                             double partition_point, double alpha,
                             std::optional<double> beta = std::nullopt,
                             const DensityHandle* reference = nullptr,
                             const OptimizerOptions& opts = {});

}  // namespace wmcs
