#pragma once

namespace wmcs {

// Standard normal density.
double normal_pdf(double z);

// Standard normal lower tail P(Z <= z), accurate in both tails.
double normal_cdf(double z);

// Upper tail P(Z > z).
double normal_sf(double z);

// Inverse of normal_cdf on (0, 1). Wichura's AS241 (PPND16), relative
// accuracy about 1e-16 across the range. Throws DomainError outside (0, 1).
double normal_quantile(double p);

}  // namespace wmcs
