#include "wmcs/metrics.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "wmcs/errors.hpp"

namespace wmcs {
namespace {

constexpr double kTailMass = 5e-11;  // per side
constexpr int kPiecesPerSpan = 16;

template <class Cdf>
double bisect_cdf(Cdf cdf, double p, double lo, double hi) {
  for (int it = 0; it < 300 && hi - lo > 1e-12 * (1.0 + std::abs(lo) + std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    (cdf(mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Quantiles used as extra split points so heavy tails cannot hide the bulk
// of the mass from the quadrature.
constexpr double kSplitProbs[] = {1e-8, 1e-6, 1e-4, 1e-3, 0.01, 0.05, 0.1, 0.25, 0.5,
                                  0.75, 0.9, 0.95, 0.99, 0.999, 1 - 1e-4, 1 - 1e-6, 1 - 1e-8};

std::vector<double> merged(std::vector<double> a, const std::vector<double>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

DensityHandle make_density(const ParamFamily& family) {
  DensityHandle d;
  d.pdf = [family](double x) { return family.pdf(x); };
  d.support = family.support();
  d.lower = family.quantile(kTailMass);
  d.upper = family.quantile(1.0 - kTailMass);
  d.breakpoints = family.kinks();
  for (double p : kSplitProbs) d.breakpoints.push_back(family.quantile(p));
  d.label = std::string(family.name());
  return d;
}

DensityHandle make_density(const WeightedFamily& wf) {
  if (wf.weight().kind == WeightKind::Identity) return make_density(wf.base());
  if (wf.weight().kind == WeightKind::IndicatorRegion) {
    throw NotAvailableError("indicator-weighted densities need make_truncated_density");
  }
  DensityHandle d;
  d.pdf = [wf](double x) { return std::exp(weighted_log_pdf(wf, x)); };
  d.support = wf.base().support();
  auto cdf = [&wf](double x) { return weighted_cdf(wf, x); };
  double hi = std::max(1.0, wf.base().quantile(1.0 - kTailMass));
  while (cdf(hi) < 1.0 - kTailMass) hi *= 2.0;
  d.lower = bisect_cdf(cdf, kTailMass, 0.0, hi);
  d.upper = bisect_cdf(cdf, 1.0 - kTailMass, 0.0, hi);
  d.breakpoints = wf.base().kinks();
  for (double p : kSplitProbs) d.breakpoints.push_back(bisect_cdf(cdf, p, 0.0, hi));
  d.label = wf.label();
  return d;
}

DensityHandle make_truncated_density(const ParamFamily& family, const Interval& region) {
  const double f_lo = region.lower == -kInf ? 0.0 : family.cdf(region.lower);
  const double f_hi = region.upper == kInf ? 1.0 : family.cdf(region.upper);
  const double mass = f_hi - f_lo;
  if (!(mass > 0.0)) {
    throw DomainError(std::string(family.name()) + " has no mass on " + to_string(region));
  }
  DensityHandle d;
  d.pdf = [family, region, mass](double x) {
    return region.contains(x) ? family.pdf(x) / mass : 0.0;
  };
  d.support = region;
  const double q_lo = std::clamp(f_lo + kTailMass * mass, 1e-300, 1.0 - 1e-16);
  const double q_hi = std::clamp(f_hi - kTailMass * mass, 1e-300, 1.0 - 1e-16);
  d.lower = std::max(family.quantile(q_lo), region.lower);
  d.upper = std::min(family.quantile(q_hi), region.upper);
  d.breakpoints = family.kinks();
  for (double p : kSplitProbs) {
    const double q = std::clamp(f_lo + p * mass, 1e-300, 1.0 - 1e-16);
    d.breakpoints.push_back(std::clamp(family.quantile(q), d.lower, d.upper));
  }
  if (region.lower != -kInf) d.breakpoints.push_back(region.lower);
  if (region.upper != kInf) d.breakpoints.push_back(region.upper);
  d.label = std::string(family.name()) + "|" + to_string(region);
  return d;
}

DensityHandle make_mixture_density(const DensityHandle& a, const DensityHandle& b, double weight) {
  if (!(weight >= 0.0 && weight <= 1.0)) throw DomainError("mixture weight must lie in [0, 1]");
  DensityHandle d;
  d.pdf = [fa = a.pdf, fb = b.pdf, weight](double x) {
    return weight * fa(x) + (1.0 - weight) * fb(x);
  };
  d.support = {std::min(a.support.lower, b.support.lower), std::max(a.support.upper, b.support.upper)};
  d.lower = std::min(a.lower, b.lower);
  d.upper = std::max(a.upper, b.upper);
  d.breakpoints = merged(a.breakpoints, b.breakpoints);
  d.label = a.label + " + " + b.label;
  return d;
}

double integrate(const std::function<double(double)>& f, double lower, double upper,
                 std::vector<double> breakpoints, double abs_tol) {
  if (!(upper > lower)) return 0.0;
  // Equal-width pieces keep a narrow peak from slipping between the first
  // Kronrod nodes on a wide interval.
  const double width = (upper - lower) / kPiecesPerSpan;
  for (int k = 1; k < kPiecesPerSpan; ++k) breakpoints.push_back(lower + k * width);
  breakpoints.push_back(lower);
  breakpoints.push_back(upper);
  std::sort(breakpoints.begin(), breakpoints.end());
  breakpoints.erase(std::remove_if(breakpoints.begin(), breakpoints.end(),
                                   [&](double x) { return x < lower || x > upper; }),
                    breakpoints.end());
  breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());

  using boost::math::quadrature::gauss_kronrod;
  double total = 0.0, total_err = 0.0;
  for (std::size_t k = 0; k + 1 < breakpoints.size(); ++k) {
    double err = 0.0, l1 = 0.0;
    const double v = gauss_kronrod<double, 31>::integrate(f, breakpoints[k], breakpoints[k + 1], 15,
                                                          1e-10, &err, &l1);
    total += v;
    total_err += std::min(err, l1);
    if (!std::isfinite(v)) return v;
  }
  if (total_err > abs_tol && total_err > abs_tol * std::abs(total)) {
    throw QuadratureError("quadrature error estimate " + std::to_string(total_err) +
                          " exceeds tolerance");
  }
  return total;
}

double kl_divergence(const DensityHandle& h, const DensityHandle& f, double quad_tol) {
  bool singular = false;
  auto integrand = [&](double x) {
    const double hx = h.pdf(x);
    if (!(hx > 0.0)) return 0.0;
    const double fx = f.pdf(x);
    if (!(fx > 0.0)) {
      singular = true;
      return 0.0;
    }
    return hx * std::log(hx / fx);
  };
  try {
    const double v = integrate(integrand, h.lower, h.upper, merged(h.breakpoints, f.breakpoints), quad_tol);
    return singular ? kInf : v;
  } catch (const QuadratureError&) {
    if (singular) return kInf;
    throw;
  }
}

double hellinger(const DensityHandle& f, const DensityHandle& g, double quad_tol) {
  auto integrand = [&](double x) {
    const double d = std::sqrt(f.pdf(x)) - std::sqrt(g.pdf(x));
    return d * d;
  };
  const double v = integrate(integrand, std::min(f.lower, g.lower), std::max(f.upper, g.upper),
                             merged(f.breakpoints, g.breakpoints), quad_tol);
  return std::sqrt(std::max(0.0, v));
}

double l2_distance(const DensityHandle& f, const DensityHandle& g, double quad_tol) {
  auto integrand = [&](double x) {
    const double d = f.pdf(x) - g.pdf(x);
    return d * d;
  };
  const double v = integrate(integrand, std::min(f.lower, g.lower), std::max(f.upper, g.upper),
                             merged(f.breakpoints, g.breakpoints), quad_tol);
  return std::sqrt(std::max(0.0, v));
}

std::vector<std::vector<double>> density_grid(const std::vector<DensityHandle>& densities,
                                              double lower, double upper, std::size_t points) {
  if (points < 2 || !(upper > lower)) throw DomainError("density_grid: need >= 2 points on a proper interval");
  std::vector<std::vector<double>> rows;
  rows.reserve(points);
  for (std::size_t k = 0; k < points; ++k) {
    const double x = lower + (upper - lower) * static_cast<double>(k) / static_cast<double>(points - 1);
    std::vector<double> row{x};
    for (const auto& d : densities) row.push_back(d.pdf(x));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace wmcs
