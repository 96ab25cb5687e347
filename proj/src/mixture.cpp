#include "wmcs/mixture.hpp"

#include <algorithm>
#include <cmath>

#include "wmcs/errors.hpp"

namespace wmcs {
namespace {

constexpr int kGridPoints = 200;
constexpr double kGoldenTol = 1e-6;
constexpr double kFlatTol = 1e-12;

double log_mix(double a, double lf, double lg) {
  if (a <= 0.0) return lg;
  if (a >= 1.0) return lf;
  const double x = std::log(a) + lf;
  const double y = std::log1p(-a) + lg;
  const double m = std::max(x, y);
  if (m == -kInf) return -kInf;
  return m + std::log(std::exp(x - m) + std::exp(y - m));
}

// Slope of psi_hat at the end points: mean of (f - g) / mixture.
double slope_at_zero(std::span<const double> f, std::span<const double> g) {
  double s = 0.0;
  for (std::size_t l = 0; l < f.size(); ++l) {
    if (g[l] == -kInf) return kInf;
    s += std::expm1(f[l] - g[l]);
  }
  return s / static_cast<double>(f.size());
}

double slope_at_one(std::span<const double> f, std::span<const double> g) {
  double s = 0.0;
  for (std::size_t l = 0; l < f.size(); ++l) {
    if (f[l] == -kInf) return -kInf;
    s -= std::expm1(g[l] - f[l]);
  }
  return s / static_cast<double>(f.size());
}

// log of a component density restricted to its own region and renormalized
// by the model's mass there.
std::vector<double> truncated_log_density(const FittedModel& fm, const Dataset& data) {
  const auto& base = fm.wf.base();
  const Interval region = fm.wf.weight().region;
  const double lo = region.lower == -kInf ? 0.0 : base.cdf(region.lower);
  const double hi = region.upper == kInf ? 1.0 : base.cdf(region.upper);
  const double log_mass = std::log(hi - lo);
  std::vector<double> out;
  out.reserve(data.size());
  for (double x : data.values()) {
    out.push_back(region.contains(x) ? base.log_pdf(x) - log_mass : -kInf);
  }
  return out;
}

}  // namespace

double beta_budget(double alpha, std::size_t m) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("beta_budget: alpha must lie in (0, 1)");
  if (m < 1) throw DomainError("beta_budget: need at least one partition");
  return -std::expm1(std::log1p(-alpha) / static_cast<double>(m));
}

double psi_hat(double alpha_mix, std::span<const double> f_log, std::span<const double> g_log) {
  if (f_log.size() != g_log.size() || f_log.empty()) {
    throw DimensionError("psi_hat: log-density vectors must be non-empty and equal in length");
  }
  double s = 0.0;
  for (std::size_t l = 0; l < f_log.size(); ++l) {
    const double v = log_mix(alpha_mix, f_log[l], g_log[l]);
    if (v == -kInf) return -kInf;
    s += v;
  }
  return s / static_cast<double>(f_log.size());
}

double optimal_alpha(std::span<const double> f_log, std::span<const double> g_log) {
  if (f_log.size() != g_log.size()) throw DimensionError("optimal_alpha: length mismatch");
  std::vector<double> f, g;
  for (std::size_t l = 0; l < f_log.size(); ++l) {
    if (f_log[l] == -kInf && g_log[l] == -kInf) continue;
    f.push_back(f_log[l]);
    g.push_back(g_log[l]);
  }
  if (f.empty()) throw DegenerateMixtureError("every observation has zero density under both components");

  auto psi = [&](double a) { return psi_hat(a, f, g); };
  std::vector<double> grid(kGridPoints), vals(kGridPoints);
  for (int k = 0; k < kGridPoints; ++k) {
    grid[k] = static_cast<double>(k) / (kGridPoints - 1);
    vals[k] = psi(grid[k]);
  }
  const auto [lo_it, hi_it] = std::minmax_element(vals.begin(), vals.end());
  if (*hi_it - *lo_it <= kFlatTol) return 0.5;

  if (slope_at_zero(f, g) <= 0.0) return 0.0;
  if (slope_at_one(f, g) >= 0.0) return 1.0;

  const int k_best = static_cast<int>(hi_it - vals.begin());
  double a = grid[std::max(k_best - 1, 0)];
  double b = grid[std::min(k_best + 1, kGridPoints - 1)];
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = psi(c), fd = psi(d);
  while (b - a > kGoldenTol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = psi(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = psi(d);
    }
  }
  return std::clamp(0.5 * (a + b), 0.0, 1.0);
}

DensityHandle MixtureCandidate::density() const {
  const auto fa = make_truncated_density(f_component.wf.base(), f_component.wf.weight().region);
  const auto gb = make_truncated_density(g_component.wf.base(), g_component.wf.weight().region);
  auto d = make_mixture_density(fa, gb, alpha_opt);
  d.label = label();
  return d;
}

std::string MixtureCandidate::label() const {
  return std::string(f_component.wf.base().name()) + "+" + std::string(g_component.wf.base().name());
}

std::vector<MixtureCandidate> combine_local_fits(std::span<const FittedModel> fits_a,
                                                 std::span<const FittedModel> fits_b,
                                                 const Dataset& data, const DensityHandle* reference,
                                                 double quad_tol) {
  std::vector<std::vector<double>> logs_b;
  for (const auto& fb : fits_b) logs_b.push_back(truncated_log_density(fb, data));
  std::vector<MixtureCandidate> out;
  for (const auto& fa : fits_a) {
    const auto log_a = truncated_log_density(fa, data);
    for (std::size_t jb = 0; jb < fits_b.size(); ++jb) {
      MixtureCandidate mc{fa, fits_b[jb]};
      mc.alpha_opt = optimal_alpha(log_a, logs_b[jb]);
      mc.psi_at_opt = psi_hat(mc.alpha_opt, log_a, logs_b[jb]);
      if (reference) {
        const auto dens = mc.density();
        mc.hellinger = hellinger(dens, *reference, quad_tol);
        mc.l2 = l2_distance(dens, *reference, quad_tol);
      }
      out.push_back(std::move(mc));
    }
  }
  return out;
}

MixtureSet build_mixture_set(const std::vector<ParamFamily>& candidates_a,
                             const std::vector<ParamFamily>& candidates_b, const Dataset& data,
                             double partition_point, double alpha, std::optional<double> beta,
                             const DensityHandle* reference, const OptimizerOptions& opts) {
  const double budget = beta_budget(alpha, 2);
  MixtureSet ms;
  ms.alpha = alpha;
  ms.beta = beta.value_or(budget);
  if (!(ms.beta > 0.0) || ms.beta > budget * (1.0 + 1e-12)) {
    throw DomainError("beta must lie in (0, 1 - sqrt(1 - alpha)]");
  }
  if (ms.beta >= budget * (1.0 - 1e-12)) {
    ms.warnings.push_back("beta sits on the budget bound 1 - sqrt(1 - alpha)");
  }
  ms.partition_point = partition_point;
  ms.region_a = Interval::at_most(partition_point);
  ms.region_b = Interval::above(partition_point);
  ms.local_a = build_local_mcs(candidates_a, data, ms.region_a, ms.beta, opts);
  ms.local_b = build_local_mcs(candidates_b, data, ms.region_b, ms.beta, opts);
  const auto fa = ms.local_a.member_fits();
  const auto fb = ms.local_b.member_fits();
  ms.candidates = combine_local_fits(fa, fb, data, reference);
  return ms;
}

}  // namespace wmcs
