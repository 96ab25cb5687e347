#include "wmcs/densities.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/special_functions/gamma.hpp>

#include "wmcs/errors.hpp"
#include "wmcs/normal.hpp"
#include "wmcs/random.hpp"

namespace wmcs {
namespace {

using namespace std::string_view_literals;

constexpr std::array<std::string_view, 2> kNormalNames = {"mu"sv, "sigma2"sv};
constexpr std::array<std::string_view, 2> kLocScaleNames = {"location"sv, "scale"sv};
constexpr std::array<std::string_view, 2> kShapeScaleNames = {"shape"sv, "scale"sv};
constexpr std::array<std::string_view, 5> kMixtureNames = {
    "weight"sv, "laplace_location"sv, "laplace_scale"sv, "logistic_location"sv,
    "logistic_scale"sv};

constexpr double kLogSqrt2Pi = 0.91893853320467274178;

double logistic_log_pdf(double x, double loc, double scale) {
  const double z = std::abs((x - loc) / scale);
  return -z - std::log(scale) - 2.0 * std::log1p(std::exp(-z));
}

double laplace_log_pdf(double x, double loc, double scale) {
  return -std::abs(x - loc) / scale - std::log(2.0 * scale);
}

double logistic_cdf(double x, double loc, double scale) {
  return 1.0 / (1.0 + std::exp(-(x - loc) / scale));
}

double laplace_cdf(double x, double loc, double scale) {
  const double z = (x - loc) / scale;
  return z < 0.0 ? 0.5 * std::exp(z) : 1.0 - 0.5 * std::exp(-z);
}

// Bisection on a monotone CDF; used where no closed-form inverse exists.
template <class Cdf>
double invert_cdf(Cdf cdf, double p, double lo, double hi) {
  while (cdf(lo) > p) lo -= 2.0 * (hi - lo);
  while (cdf(hi) < p) hi += 2.0 * (hi - lo);
  for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    (cdf(mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::string_view family_name(FamilyId id) {
  switch (id) {
    case FamilyId::Normal: return "normal";
    case FamilyId::Cauchy: return "cauchy";
    case FamilyId::Logistic: return "logistic";
    case FamilyId::Laplace: return "laplace";
    case FamilyId::Gamma: return "gamma";
    case FamilyId::Weibull: return "weibull";
    case FamilyId::Lognormal: return "lognormal";
    case FamilyId::TwoComponentMixture: return "two_component_mixture";
  }
  return "unknown";
}

FamilyId family_from_name(std::string_view name) {
  for (auto id : {FamilyId::Normal, FamilyId::Cauchy, FamilyId::Logistic, FamilyId::Laplace,
                  FamilyId::Gamma, FamilyId::Weibull, FamilyId::Lognormal,
                  FamilyId::TwoComponentMixture}) {
    if (family_name(id) == name) return id;
  }
  throw ParseError("unknown family '" + std::string(name) + "'");
}

std::span<const std::string_view> param_names(FamilyId id) {
  switch (id) {
    case FamilyId::Normal:
    case FamilyId::Lognormal: return kNormalNames;
    case FamilyId::Cauchy:
    case FamilyId::Logistic:
    case FamilyId::Laplace: return kLocScaleNames;
    case FamilyId::Gamma:
    case FamilyId::Weibull: return kShapeScaleNames;
    case FamilyId::TwoComponentMixture: return kMixtureNames;
  }
  return {};
}

bool ParamFamily::valid_params(FamilyId id, std::span<const double> p) {
  if (p.size() != param_names(id).size()) return false;
  for (double v : p) {
    if (!std::isfinite(v)) return false;
  }
  switch (id) {
    case FamilyId::Normal:
    case FamilyId::Lognormal:
    case FamilyId::Cauchy:
    case FamilyId::Logistic:
    case FamilyId::Laplace: return p[1] > 0.0;
    case FamilyId::Gamma:
    case FamilyId::Weibull: return p[0] > 0.0 && p[1] > 0.0;
    case FamilyId::TwoComponentMixture:
      return p[0] >= 0.0 && p[0] <= 1.0 && p[2] > 0.0 && p[4] > 0.0;
  }
  return false;
}

ParamFamily::ParamFamily(FamilyId id, std::vector<double> params)
    : id_(id), params_(std::move(params)) {
  if (!valid_params(id_, params_)) {
    std::ostringstream msg;
    msg << "invalid parameters for " << family_name(id_) << ":";
    for (double v : params_) msg << ' ' << v;
    throw ParameterDomainError(msg.str());
  }
  const auto& p = params_;
  switch (id_) {
    case FamilyId::Normal:
    case FamilyId::Lognormal: log_norm_ = kLogSqrt2Pi + 0.5 * std::log(p[1]); break;
    case FamilyId::Gamma: log_norm_ = std::lgamma(p[0]) + p[0] * std::log(p[1]); break;
    case FamilyId::Weibull: log_norm_ = std::log(p[0] / p[1]); break;
    case FamilyId::Cauchy: log_norm_ = std::log(std::numbers::pi * p[1]); break;
    default: break;
  }
}

Interval ParamFamily::support() const {
  switch (id_) {
    case FamilyId::Gamma:
    case FamilyId::Weibull:
    case FamilyId::Lognormal: return {0.0, kInf};
    default: return Interval::whole_line();
  }
}

double ParamFamily::log_pdf(double x) const {
  const auto& p = params_;
  switch (id_) {
    case FamilyId::Normal: {
      const double d = x - p[0];
      return -0.5 * d * d / p[1] - log_norm_;
    }
    case FamilyId::Cauchy: {
      const double z = (x - p[0]) / p[1];
      return -std::log1p(z * z) - log_norm_;
    }
    case FamilyId::Logistic: return logistic_log_pdf(x, p[0], p[1]);
    case FamilyId::Laplace: return laplace_log_pdf(x, p[0], p[1]);
    case FamilyId::Gamma:
      if (!(x > 0.0)) return -kInf;
      return (p[0] - 1.0) * std::log(x) - x / p[1] - log_norm_;
    case FamilyId::Weibull: {
      if (!(x > 0.0)) return -kInf;
      const double lz = std::log(x / p[1]);
      return log_norm_ + (p[0] - 1.0) * lz - std::exp(p[0] * lz);
    }
    case FamilyId::Lognormal: {
      if (!(x > 0.0)) return -kInf;
      const double lx = std::log(x);
      const double d = lx - p[0];
      return -lx - 0.5 * d * d / p[1] - log_norm_;
    }
    case FamilyId::TwoComponentMixture: {
      const double a = std::log(p[0]) + laplace_log_pdf(x, p[1], p[2]);
      const double b = std::log1p(-p[0]) + logistic_log_pdf(x, p[3], p[4]);
      const double m = std::max(a, b);
      if (m == -kInf) return -kInf;
      return m + std::log(std::exp(a - m) + std::exp(b - m));
    }
  }
  return -kInf;
}

double ParamFamily::pdf(double x) const { return std::exp(log_pdf(x)); }

double ParamFamily::cdf(double x) const {
  const auto& p = params_;
  switch (id_) {
    case FamilyId::Normal: return normal_cdf((x - p[0]) / std::sqrt(p[1]));
    case FamilyId::Cauchy: return 0.5 + std::atan((x - p[0]) / p[1]) / std::numbers::pi;
    case FamilyId::Logistic: return logistic_cdf(x, p[0], p[1]);
    case FamilyId::Laplace: return laplace_cdf(x, p[0], p[1]);
    case FamilyId::Gamma:
      return x <= 0.0 ? 0.0 : boost::math::gamma_p(p[0], x / p[1]);
    case FamilyId::Weibull:
      return x <= 0.0 ? 0.0 : -std::expm1(-std::pow(x / p[1], p[0]));
    case FamilyId::Lognormal:
      return x <= 0.0 ? 0.0 : normal_cdf((std::log(x) - p[0]) / std::sqrt(p[1]));
    case FamilyId::TwoComponentMixture:
      return p[0] * laplace_cdf(x, p[1], p[2]) + (1.0 - p[0]) * logistic_cdf(x, p[3], p[4]);
  }
  return 0.0;
}

double ParamFamily::quantile(double q) const {
  if (!(q > 0.0 && q < 1.0)) throw DomainError("quantile: probability must lie in (0, 1)");
  const auto& p = params_;
  switch (id_) {
    case FamilyId::Normal: return p[0] + std::sqrt(p[1]) * normal_quantile(q);
    case FamilyId::Cauchy: return p[0] + p[1] * std::tan(std::numbers::pi * (q - 0.5));
    case FamilyId::Logistic: return p[0] + p[1] * std::log(q / (1.0 - q));
    case FamilyId::Laplace:
      return q < 0.5 ? p[0] + p[1] * std::log(2.0 * q) : p[0] - p[1] * std::log(2.0 * (1.0 - q));
    case FamilyId::Gamma: return p[1] * boost::math::gamma_p_inv(p[0], q);
    case FamilyId::Weibull: return p[1] * std::pow(-std::log1p(-q), 1.0 / p[0]);
    case FamilyId::Lognormal: return std::exp(p[0] + std::sqrt(p[1]) * normal_quantile(q));
    case FamilyId::TwoComponentMixture:
      return invert_cdf([this](double x) { return cdf(x); }, q, std::min(p[1], p[3]),
                        std::max(p[1], p[3]));
  }
  return 0.0;
}

double ParamFamily::mean_closed_form() const {
  const auto& p = params_;
  switch (id_) {
    case FamilyId::Gamma: return p[0] * p[1];
    case FamilyId::Weibull: return p[1] * std::tgamma(1.0 + 1.0 / p[0]);
    case FamilyId::Lognormal: return std::exp(p[0] + 0.5 * p[1]);
    default:
      throw NotAvailableError("no closed-form mean for " + std::string(name()));
  }
}

std::vector<double> ParamFamily::kinks() const {
  switch (id_) {
    case FamilyId::Laplace: return {params_[0]};
    case FamilyId::Gamma:
    case FamilyId::Weibull:
    case FamilyId::Lognormal: return {0.0};
    case FamilyId::TwoComponentMixture: return {params_[1]};
    default: return {};
  }
}

ParamFamily example2_truth() {
  return ParamFamily(FamilyId::TwoComponentMixture, {1.0 / 3.0, -4.0, 0.5, 6.0, 1.0});
}

// ---------------------------------------------------------------------------

std::string_view weight_kind_name(WeightKind kind) {
  switch (kind) {
    case WeightKind::Identity: return "identity";
    case WeightKind::LengthBiased: return "length_biased";
    case WeightKind::IndicatorRegion: return "indicator_region";
  }
  return "unknown";
}

WeightKind weight_kind_from_name(std::string_view name) {
  for (auto k : {WeightKind::Identity, WeightKind::LengthBiased, WeightKind::IndicatorRegion}) {
    if (weight_kind_name(k) == name) return k;
  }
  throw ParseError("unknown weight kind '" + std::string(name) + "'");
}

double WeightSpec::log_delta(double x) const {
  switch (kind) {
    case WeightKind::Identity: return 0.0;
    case WeightKind::LengthBiased: return x > 0.0 ? std::log(x) : -kInf;
    case WeightKind::IndicatorRegion: return region.contains(x) ? 0.0 : -kInf;
  }
  return -kInf;
}

WeightedFamily::WeightedFamily(ParamFamily base, WeightSpec weight)
    : base_(std::move(base)), weight_(weight) {
  if (weight_.kind == WeightKind::LengthBiased) {
    const auto id = base_.id();
    if (id != FamilyId::Gamma && id != FamilyId::Weibull && id != FamilyId::Lognormal) {
      throw NotAvailableError("length-biased weight needs a positive family with a closed-form mean; got " +
                              std::string(base_.name()));
    }
  }
}

double WeightedFamily::analytic_normalizer() const {
  switch (weight_.kind) {
    case WeightKind::Identity: return 1.0;
    case WeightKind::LengthBiased: return base_.mean_closed_form();
    case WeightKind::IndicatorRegion:
      throw NotAvailableError("indicator weights are normalized empirically");
  }
  return 1.0;
}

std::string WeightedFamily::label() const {
  const std::string base(base_.name());
  if (weight_.kind == WeightKind::Identity) return base;
  if (weight_.kind == WeightKind::LengthBiased) return "length_biased(" + base + ")";
  return base + "|" + to_string(weight_.region);
}

double weighted_log_pdf(const WeightedFamily& wf, double x, std::optional<double> norm_constant) {
  double norm;
  if (wf.weight().normalizer == Normalizer::EmpiricalUnderH) {
    if (!norm_constant) throw DomainError("weighted_log_pdf: empirical normalizer required");
    norm = *norm_constant;
  } else {
    norm = wf.analytic_normalizer();
  }
  if (!(norm > 0.0)) throw DomainError("weighted_log_pdf: normalizer must be positive");
  const double ld = wf.weight().log_delta(x);
  if (ld == -kInf) return -kInf;
  const double lf = wf.base().log_pdf(x);
  if (lf == -kInf) return -kInf;
  return ld - std::log(norm) + lf;
}

double weighted_cdf(const WeightedFamily& wf, double x) {
  const auto& base = wf.base();
  switch (wf.weight().kind) {
    case WeightKind::Identity: return base.cdf(x);
    case WeightKind::LengthBiased: {
      if (x <= 0.0) return 0.0;
      const auto p = base.params();
      switch (base.id()) {
        case FamilyId::Lognormal:
          return ParamFamily(FamilyId::Lognormal, {p[0] + p[1], p[1]}).cdf(x);
        case FamilyId::Gamma: return ParamFamily(FamilyId::Gamma, {p[0] + 1.0, p[1]}).cdf(x);
        case FamilyId::Weibull:
          return boost::math::gamma_p(1.0 + 1.0 / p[0], std::pow(x / p[1], p[0]));
        default: break;
      }
      break;
    }
    case WeightKind::IndicatorRegion: break;
  }
  throw NotAvailableError("no CDF for " + wf.label());
}

std::vector<double> sample(const ParamFamily& family, std::size_t n, std::uint64_t seed) {
  return sample(WeightedFamily(family, WeightSpec::identity()), n, seed);
}

std::vector<double> sample(const WeightedFamily& wf, std::size_t n, std::uint64_t seed) {
  if (n < 1) throw DomainError("sample: n must be at least 1");
  if (wf.weight().kind == WeightKind::IndicatorRegion) {
    throw NotAvailableError("no sampler for indicator-weighted " + wf.label());
  }
  const bool biased = wf.weight().kind == WeightKind::LengthBiased;
  const auto p = wf.base().params();
  Rng rng(seed);
  std::vector<double> out(n);
  for (auto& x : out) {
    switch (wf.base().id()) {
      case FamilyId::Normal: x = p[0] + std::sqrt(p[1]) * rng.standard_normal(); break;
      case FamilyId::Cauchy:
        x = p[0] + p[1] * std::tan(std::numbers::pi * (rng.uniform() - 0.5));
        break;
      case FamilyId::Logistic: {
        const double u = rng.uniform();
        x = p[0] + p[1] * std::log(u / (1.0 - u));
        break;
      }
      case FamilyId::Laplace: {
        const double u = rng.uniform() - 0.5;
        x = p[0] - p[1] * std::copysign(std::log1p(-2.0 * std::abs(u)), u);
        break;
      }
      case FamilyId::Gamma:
        // Length-biased Gamma(a, s) is Gamma(a + 1, s).
        x = p[1] * rng.standard_gamma(biased ? p[0] + 1.0 : p[0]);
        break;
      case FamilyId::Weibull:
        // If X is length-biased Weibull(k, s) then (X/s)^k ~ Gamma(1 + 1/k, 1).
        if (biased) {
          x = p[1] * std::pow(rng.standard_gamma(1.0 + 1.0 / p[0]), 1.0 / p[0]);
        } else {
          x = p[1] * std::pow(-std::log(rng.uniform()), 1.0 / p[0]);
        }
        break;
      case FamilyId::Lognormal: {
        // Length-biased LN(mu, s2) is LN(mu + s2, s2).
        const double mu = biased ? p[0] + p[1] : p[0];
        x = std::exp(mu + std::sqrt(p[1]) * rng.standard_normal());
        break;
      }
      case FamilyId::TwoComponentMixture: {
        const bool first = rng.uniform() < p[0];
        const double u = rng.uniform();
        if (first) {
          const double c = u - 0.5;
          x = p[1] - p[2] * std::copysign(std::log1p(-2.0 * std::abs(c)), c);
        } else {
          x = p[3] + p[4] * std::log(u / (1.0 - u));
        }
        break;
      }
    }
  }
  return out;
}

std::string to_string(const Interval& iv) {
  std::ostringstream os;
  os.precision(17);
  os << '(' << iv.lower << ", " << iv.upper << ']';
  return os.str();
}

}  // namespace wmcs
