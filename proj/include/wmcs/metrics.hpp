#pragma once

#include <functional>
#include <string>
#include <vector>

#include "wmcs/densities.hpp"

namespace wmcs {

// A normalized univariate density for quadrature. `lower`/`upper` bound a
// finite interval holding at least 1 - 1e-10 of the mass; `breakpoints`
// lists interior points where the density is not smooth plus a ladder of
// quantiles that the quadrature splits at.
struct DensityHandle {
  std::function<double(double)> pdf;
  Interval support;
  double lower = 0.0;
  double upper = 0.0;
  std::vector<double> breakpoints;
  std::string label;
};

inline constexpr double kDefaultQuadTol = 1e-6;

DensityHandle make_density(const ParamFamily& family);

// Identity or length-biased weighted density.
DensityHandle make_density(const WeightedFamily& wf);

// I_A(x) f(x) / F(A): the family restricted to `region` and renormalized by
// its own mass there. Throws DomainError when that mass underflows to zero.
DensityHandle make_truncated_density(const ParamFamily& family, const Interval& region);

// weight * a + (1 - weight) * b.
DensityHandle make_mixture_density(const DensityHandle& a, const DensityHandle& b, double weight);

// Adaptive Gauss-Kronrod over [lower, upper], split at the given breakpoints.
// Throws QuadratureError when the error estimate exceeds `abs_tol`.
double integrate(const std::function<double(double)>& f, double lower, double upper,
                 std::vector<double> breakpoints, double abs_tol);

// KL(h || f) = int h log(h / f). +inf when f vanishes somewhere h does not.
double kl_divergence(const DensityHandle& h, const DensityHandle& f,
                     double quad_tol = kDefaultQuadTol);

// sqrt(int (sqrt f - sqrt g)^2), ranging over [0, sqrt 2]; no 1/sqrt 2 factor.
double hellinger(const DensityHandle& f, const DensityHandle& g, double quad_tol = kDefaultQuadTol);

// sqrt(int (f - g)^2).
double l2_distance(const DensityHandle& f, const DensityHandle& g,
                   double quad_tol = kDefaultQuadTol);

// The densities evaluated on an equally spaced grid, one row per x:
// {x, d_0(x), d_1(x), ...}.
std::vector<std::vector<double>> density_grid(const std::vector<DensityHandle>& densities,
                                              double lower, double upper, std::size_t points);

}  // namespace wmcs
