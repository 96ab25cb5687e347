#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wmcs/interval.hpp"

namespace wmcs {

enum class FamilyId {
  Normal,
  Cauchy,
  Logistic,
  Laplace,
  Gamma,
  Weibull,
  Lognormal,
  TwoComponentMixture,
};

std::string_view family_name(FamilyId id);
FamilyId family_from_name(std::string_view name);

// Parameter names in storage order.
//   Normal               mu, sigma2
//   Cauchy               location, scale
//   Logistic             location, scale
//   Laplace              location, scale        density exp(-|x-loc|/b) / (2b)
//   Gamma                shape, scale           mean shape*scale
//   Weibull              shape, scale
//   Lognormal            mu, sigma2             parameters of log X
//   TwoComponentMixture  weight, laplace_location, laplace_scale,
//                        logistic_location, logistic_scale
std::span<const std::string_view> param_names(FamilyId id);

// A parametric density with a fixed parameter vector. Immutable; the
// parameter-dependent normalizing constant is computed once at construction
// so that repeated log_pdf calls in likelihood loops stay cheap.
class ParamFamily {
 public:
  // Throws ParameterDomainError on a wrong arity, non-finite values, or
  // non-positive scale/shape parameters.
  ParamFamily(FamilyId id, std::vector<double> params);

  FamilyId id() const { return id_; }
  std::string_view name() const { return family_name(id_); }
  std::span<const double> params() const { return params_; }
  std::size_t param_dim() const { return params_.size(); }
  Interval support() const;

  ParamFamily with_params(std::vector<double> params) const {
    return ParamFamily(id_, std::move(params));
  }

  // log f(x; theta); -inf off the support (including excluded endpoints).
  double log_pdf(double x) const;
  double pdf(double x) const;
  double cdf(double x) const;
  double quantile(double p) const;

  // E_f(X) in closed form. Gamma, Weibull and Lognormal only; other
  // families throw NotAvailableError.
  double mean_closed_form() const;

  // Points where the density is not smooth (cusps, support edges). Used to
  // split quadrature intervals.
  std::vector<double> kinks() const;

  static bool valid_params(FamilyId id, std::span<const double> params);

 private:
  FamilyId id_;
  std::vector<double> params_;
  double log_norm_ = 0.0;  // family-specific cached constant
};

// The bimodal reference density used by the second simulation study:
// 1/3 Laplace(-4, 0.5) + 2/3 Logistic(6, 1).
ParamFamily example2_truth();

enum class WeightKind { Identity, LengthBiased, IndicatorRegion };
enum class Normalizer { AnalyticUnderF, EmpiricalUnderH };

std::string_view weight_kind_name(WeightKind kind);
WeightKind weight_kind_from_name(std::string_view name);

// Weight function delta(x) and the rule for its normalizing constant.
//   Identity         delta = 1, constant 1
//   LengthBiased     delta = x, constant E_f(X) in closed form
//   IndicatorRegion  delta = I_A(x), constant P_h(X in A) estimated from data
struct WeightSpec {
  WeightKind kind = WeightKind::Identity;
  Interval region;
  Normalizer normalizer = Normalizer::AnalyticUnderF;

  static WeightSpec identity() { return {}; }
  static WeightSpec length_biased() {
    return {WeightKind::LengthBiased, Interval::whole_line(), Normalizer::AnalyticUnderF};
  }
  static WeightSpec indicator(Interval region) {
    return {WeightKind::IndicatorRegion, region, Normalizer::EmpiricalUnderH};
  }

  // log delta(x); -inf where delta vanishes.
  double log_delta(double x) const;

  friend bool operator==(const WeightSpec&, const WeightSpec&) = default;
};

// A base family paired with a weight: f^w(x) = delta(x) f(x) / normalizer.
class WeightedFamily {
 public:
  // Throws NotAvailableError for a length-biased weight on a family without a
  // closed-form mean or with support reaching below zero.
  WeightedFamily(ParamFamily base, WeightSpec weight);

  const ParamFamily& base() const { return base_; }
  const WeightSpec& weight() const { return weight_; }
  WeightedFamily with_params(std::vector<double> params) const {
    return WeightedFamily(base_.with_params(std::move(params)), weight_);
  }

  // Normalizer computable from theta alone: E_f(X) for length-biased, 1 for
  // identity. Indicator weights throw NotAvailableError (their constant is
  // estimated from data).
  double analytic_normalizer() const;

  // Human-readable label such as "length_biased(gamma)".
  std::string label() const;

 private:
  ParamFamily base_;
  WeightSpec weight_;
};

// log delta(x) - log(norm) + log f(x). `norm_constant` is required for
// EmpiricalUnderH weights and ignored for AnalyticUnderF ones. Returns -inf
// where delta(x) f(x) = 0. Throws DomainError for a non-positive constant.
double weighted_log_pdf(const WeightedFamily& wf, double x,
                        std::optional<double> norm_constant = std::nullopt);

// CDF of a properly normalized weighted density (Identity or LengthBiased).
double weighted_cdf(const WeightedFamily& wf, double x);

// n i.i.d. draws, deterministic in `seed`. Indicator-weighted families throw
// NotAvailableError.
std::vector<double> sample(const WeightedFamily& wf, std::size_t n, std::uint64_t seed);
std::vector<double> sample(const ParamFamily& family, std::size_t n, std::uint64_t seed);

}  // namespace wmcs
