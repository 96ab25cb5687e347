#include "wmcs/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "wmcs/errors.hpp"
#include "wmcs/optimizer.hpp"
#include "wmcs/random.hpp"

namespace wmcs {
namespace {

constexpr double kEulerGamma = 0.57721566490153286061;

double mean_of(std::span<const double> xs) {
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double var_of(std::span<const double> xs) {
  const double m = mean_of(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return s / static_cast<double>(xs.size());
}

double quantile_sorted(std::span<const double> sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::vector<double> logs_of_positive(std::span<const double> xs) {
  std::vector<double> out;
  for (double x : xs) {
    if (x > 0.0) out.push_back(std::log(x));
  }
  return out;
}

// Which coordinates are optimized on the log scale.
std::vector<bool> log_scaled(FamilyId id) {
  switch (id) {
    case FamilyId::Gamma:
    case FamilyId::Weibull: return {true, true};
    case FamilyId::TwoComponentMixture: return {};
    default: return {false, true};
  }
}

}  // namespace

Dataset::Dataset(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw InsufficientDataError("dataset is empty");
  for (double v : values_) {
    if (!std::isfinite(v)) throw DomainError("dataset contains a non-finite value");
  }
  sorted_ = values_;
  std::sort(sorted_.begin(), sorted_.end());
}

double ecdf(const Dataset& data, double t) {
  const auto s = data.sorted();
  const auto count = std::upper_bound(s.begin(), s.end(), t) - s.begin();
  return static_cast<double>(count) / static_cast<double>(s.size());
}

double ecdf_measure(const Dataset& data, const Interval& region) {
  const double hi = region.upper == kInf ? 1.0 : ecdf(data, region.upper);
  const double lo = region.lower == -kInf ? 0.0 : ecdf(data, region.lower);
  return hi - lo;
}

double mean_log_density(const WeightedFamily& wf, const Dataset& data,
                        std::optional<double> norm_constant) {
  double sum = 0.0;
  for (double x : data.values()) {
    const double v = weighted_log_pdf(wf, x, norm_constant);
    if (v == -kInf) return -kInf;
    sum += v;
  }
  return sum / static_cast<double>(data.size());
}

FittedModel evaluate_model(const WeightedFamily& wf, const Dataset& data,
                           std::optional<double> norm_constant) {
  FittedModel fm{wf};
  const bool local = wf.weight().kind == WeightKind::IndicatorRegion;
  if (local) {
    fm.norm_constant = norm_constant ? *norm_constant : ecdf_measure(data, wf.weight().region);
    if (!(fm.norm_constant > 0.0)) {
      throw InsufficientDataError("region " + to_string(wf.weight().region) + " holds no observations");
    }
  } else {
    fm.norm_constant = wf.analytic_normalizer();
  }
  const auto xs = data.values();
  fm.loglik_per_obs.resize(xs.size());
  fm.in_region.resize(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const bool in = !local || wf.weight().region.contains(xs[i]);
    fm.in_region[i] = in;
    fm.loglik_per_obs[i] = in ? weighted_log_pdf(wf, xs[i], fm.norm_constant) : 0.0;
    fm.effective_n += in ? 1 : 0;
  }
  fm.loglik_total = std::accumulate(fm.loglik_per_obs.begin(), fm.loglik_per_obs.end(), 0.0);
  fm.mean_loglik = fm.loglik_total / static_cast<double>(xs.size());
  return fm;
}

std::vector<double> moment_start(const WeightedFamily& wf, std::span<const double> xs) {
  const bool biased = wf.weight().kind == WeightKind::LengthBiased;
  std::vector<double> sorted(xs.begin(), xs.end());
  std::sort(sorted.begin(), sorted.end());
  const double med = quantile_sorted(sorted, 0.5);
  const double sd = std::sqrt(std::max(var_of(xs), 1e-12));
  switch (wf.base().id()) {
    case FamilyId::Normal: return {mean_of(xs), sd * sd};
    case FamilyId::Cauchy: {
      const double half_iqr = 0.5 * (quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25));
      return {med, half_iqr > 0.0 ? half_iqr : sd};
    }
    case FamilyId::Logistic: return {med, sd * std::numbers::sqrt3 / std::numbers::pi};
    case FamilyId::Laplace: {
      double mad = 0.0;
      for (double x : xs) mad += std::abs(x - med);
      mad /= static_cast<double>(xs.size());
      return {med, mad > 0.0 ? mad : sd};
    }
    case FamilyId::Gamma: {
      std::vector<double> pos;
      for (double x : xs) {
        if (x > 0.0) pos.push_back(x);
      }
      if (pos.size() < 2) return {1.0, 1.0};
      const double m = mean_of(pos), v = std::max(var_of(pos), 1e-12);
      const double shape = m * m / v - (biased ? 1.0 : 0.0);
      return {std::max(shape, 0.1), v / m};
    }
    case FamilyId::Weibull: {
      const auto lx = logs_of_positive(xs);
      if (lx.size() < 2) return {1.0, 1.0};
      const double shape = std::numbers::pi / std::sqrt(6.0 * std::max(var_of(lx), 1e-12));
      return {shape, std::exp(mean_of(lx) + kEulerGamma / shape)};
    }
    case FamilyId::Lognormal: {
      const auto lx = logs_of_positive(xs);
      if (lx.size() < 2) return {0.0, 1.0};
      const double v = std::max(var_of(lx), 1e-12);
      return {mean_of(lx) - (biased ? v : 0.0), v};
    }
    case FamilyId::TwoComponentMixture: break;
  }
  throw NotAvailableError("no fitting support for " + wf.label());
}

FittedModel fit_qmle(const WeightedFamily& wf, const Dataset& data, const OptimizerOptions& opts) {
  const FamilyId id = wf.base().id();
  if (id == FamilyId::TwoComponentMixture) {
    throw NotAvailableError("no fitting support for " + wf.label());
  }
  const bool local = wf.weight().kind == WeightKind::IndicatorRegion;
  std::vector<double> xs;
  for (double x : data.values()) {
    if (!local || wf.weight().region.contains(x)) xs.push_back(x);
  }
  const std::size_t dim = wf.base().param_dim();
  if (xs.size() < dim + 1) {
    throw InsufficientDataError(wf.label() + ": " + std::to_string(xs.size()) +
                                " effective observations for " + std::to_string(dim) + " parameters");
  }
  if (std::all_of(xs.begin(), xs.end(), [&](double x) { return x == xs.front(); })) {
    throw InsufficientDataError(wf.label() + ": all effective observations are equal");
  }

  const auto logged = log_scaled(id);
  const bool biased = wf.weight().kind == WeightKind::LengthBiased;
  auto to_params = [&](std::span<const double> z) {
    std::vector<double> p(z.begin(), z.end());
    for (std::size_t k = 0; k < dim; ++k) {
      if (logged[k]) p[k] = std::exp(p[k]);
    }
    return p;
  };
  // Local fits drop the parameter-free -log P_h(A) term; it is restored when
  // the FittedModel is assembled.
  auto objective = [&](std::span<const double> z) -> double {
    auto p = to_params(z);
    if (!ParamFamily::valid_params(id, p)) return -kInf;
    const ParamFamily fam(id, std::move(p));
    double sum = 0.0;
    if (biased) {
      const double mu = fam.mean_closed_form();
      if (!(mu > 0.0) || !std::isfinite(mu)) return -kInf;
      sum -= static_cast<double>(xs.size()) * std::log(mu);
      for (double x : xs) sum += std::log(x);
    }
    for (double x : xs) sum += fam.log_pdf(x);
    return std::isnan(sum) ? -kInf : sum;
  };

  auto p0 = moment_start(wf, xs);
  std::vector<double> z0(dim), step(dim);
  const double spread = std::sqrt(std::max(var_of(xs), 1e-12));
  for (std::size_t k = 0; k < dim; ++k) {
    z0[k] = logged[k] ? std::log(p0[k]) : p0[k];
    step[k] = logged[k] ? 0.25 : 0.25 * spread;
  }

  SimplexResult best;
  best.value = -kInf;
  bool have_best = false;
  int starts = 0;
  for (int r = 0; r <= opts.restarts; ++r) {
    std::vector<double> start = z0;
    if (r > 0) {
      Rng rng(derive_seed(opts.seed, static_cast<std::uint64_t>(r)));
      for (std::size_t k = 0; k < dim; ++k) {
        start[k] += 0.5 * rng.standard_normal() * (logged[k] ? 1.0 : spread);
      }
    }
    ++starts;
    auto res = maximize_simplex(objective, std::move(start), step, opts.max_iter, opts.tol);
    if (!have_best || res.value > best.value) {
      best = std::move(res);
      have_best = true;
    }
  }
  if (!(best.value > -kInf)) {
    throw NonConvergenceError(wf.label() + ": no start reached a finite likelihood", to_params(best.x));
  }

  FittedModel fm = evaluate_model(wf.with_params(to_params(best.x)), data);
  fm.converged = best.converged;
  fm.n_restarts_used = starts;
  return fm;
}

}  // namespace wmcs
