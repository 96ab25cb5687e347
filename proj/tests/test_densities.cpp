#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wmcs/densities.hpp"
#include "wmcs/errors.hpp"
#include "wmcs/normal.hpp"
#include "wmcs/random.hpp"

using namespace wmcs;

namespace {

struct Reference {
  FamilyId id;
  std::vector<double> params;
  double x;
  double log_pdf;
  double cdf;
  double q30;  // quantile at 0.3
};

// Frozen from scipy.stats with matching parameterizations.
const std::vector<Reference> kReferences = {
    {FamilyId::Normal, {1.0, 4.0}, 2.5, -1.893335713764618, 0.7733726476231317, -0.04880102541608178},
    {FamilyId::Cauchy, {1.0, 2.0}, -1.0, -2.5310242469692907, 0.25, -0.453085056010722},
    {FamilyId::Logistic, {6.0, 1.0}, 4.5, -1.9028265559655049, 0.18242552380635635, 5.1527021396127966},
    {FamilyId::Laplace, {-4.0, 0.5}, -3.2, -1.6, 0.8990517410026723, -4.255412811882995},
    {FamilyId::Gamma, {2.0, 3.0}, 6.0, -2.4054651081081646, 0.5939941502901616, 3.2920476321104752},
    {FamilyId::Weibull, {1.5, 2.0}, 1.7, -1.1526028160705637, 0.5432692722262781, 1.005877429831437},
    {FamilyId::Lognormal, {2.0, 0.5}, 9.0, -2.8084870541663696, 0.6098459969270387, 5.099756744349915},
};

double mean(const std::vector<double>& xs) {
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

// Largest gap between the empirical CDF of xs and cdf.
template <class F>
double ks_distance(std::vector<double> xs, F cdf) {
  std::sort(xs.begin(), xs.end());
  double d = 0.0;
  const double n = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double c = cdf(xs[i]);
    d = std::max({d, std::abs(c - i / n), std::abs((i + 1) / n - c)});
  }
  return d;
}

}  // namespace

TEST_CASE("log density, cdf and quantile agree with reference values") {
  for (const auto& r : kReferences) {
    CAPTURE(family_name(r.id));
    const ParamFamily f(r.id, r.params);
    CHECK(f.log_pdf(r.x) == doctest::Approx(r.log_pdf).epsilon(1e-12));
    CHECK(f.pdf(r.x) == doctest::Approx(std::exp(r.log_pdf)).epsilon(1e-12));
    CHECK(f.cdf(r.x) == doctest::Approx(r.cdf).epsilon(1e-12));
    CHECK(f.quantile(0.3) == doctest::Approx(r.q30).epsilon(1e-9));
    CHECK(f.cdf(f.quantile(0.77)) == doctest::Approx(0.77).epsilon(1e-10));
  }
}

TEST_CASE("positive families vanish off their support") {
  for (auto id : {FamilyId::Gamma, FamilyId::Weibull, FamilyId::Lognormal}) {
    const ParamFamily f(id, {2.0, 1.0});
    CHECK(f.log_pdf(-1.0) == -kInf);
    CHECK(f.log_pdf(0.0) == -kInf);
    CHECK(f.cdf(-3.0) == 0.0);
    CHECK(f.support() == Interval::above(0.0));
  }
}

TEST_CASE("closed-form means") {
  CHECK(ParamFamily(FamilyId::Gamma, {2.0, 3.0}).mean_closed_form() == doctest::Approx(6.0));
  CHECK(ParamFamily(FamilyId::Weibull, {1.5, 2.0}).mean_closed_form() ==
        doctest::Approx(1.805490585901867).epsilon(1e-12));
  CHECK(ParamFamily(FamilyId::Lognormal, {2.0, 0.5}).mean_closed_form() ==
        doctest::Approx(9.48773583636).epsilon(1e-11));
  CHECK(ParamFamily(FamilyId::Lognormal, {2.5, 0.5}).mean_closed_form() ==
        doctest::Approx(15.6426318842).epsilon(1e-11));
  CHECK_THROWS_AS(ParamFamily(FamilyId::Cauchy, {0.0, 1.0}).mean_closed_form(), NotAvailableError);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(ParamFamily(FamilyId::Normal, {0.0, 0.0}), ParameterDomainError);
  CHECK_THROWS_AS(ParamFamily(FamilyId::Gamma, {-1.0, 1.0}), ParameterDomainError);
  CHECK_THROWS_AS(ParamFamily(FamilyId::Weibull, {1.0}), ParameterDomainError);
  CHECK_THROWS_AS(ParamFamily(FamilyId::Laplace, {NAN, 1.0}), ParameterDomainError);
  CHECK_THROWS_AS(ParamFamily(FamilyId::TwoComponentMixture, {1.5, 0, 1, 0, 1}), ParameterDomainError);
  CHECK(ParamFamily::valid_params(FamilyId::Cauchy, std::vector<double>{-3.0, 0.1}));
  CHECK_THROWS_AS(ParamFamily(FamilyId::Gamma, {1.0, 1.0}).quantile(1.0), DomainError);
}

TEST_CASE("family and weight names round trip") {
  for (auto id : {FamilyId::Normal, FamilyId::Cauchy, FamilyId::Logistic, FamilyId::Laplace, FamilyId::Gamma,
                  FamilyId::Weibull, FamilyId::Lognormal, FamilyId::TwoComponentMixture}) {
    CHECK(family_from_name(family_name(id)) == id);
  }
  for (auto k : {WeightKind::Identity, WeightKind::LengthBiased, WeightKind::IndicatorRegion}) {
    CHECK(weight_kind_from_name(weight_kind_name(k)) == k);
  }
  CHECK_THROWS_AS(family_from_name("beta"), ParseError);
  CHECK(param_names(FamilyId::Gamma)[0] == "shape");
}

TEST_CASE("bimodal reference density") {
  const auto t = example2_truth();
  CHECK(t.log_pdf(-4.0) == doctest::Approx(-1.098521501173947).epsilon(1e-12));
  CHECK(t.log_pdf(5.0) == doctest::Approx(-2.0319884444135443).epsilon(1e-12));
  CHECK(t.cdf(0.0) == doctest::Approx(0.33492583833310613).epsilon(1e-12));
  CHECK(t.cdf(-4.0) == doctest::Approx(0.1666969319124683).epsilon(1e-12));
  CHECK(t.cdf(t.quantile(0.5)) == doctest::Approx(0.5).epsilon(1e-10));
  const auto k = t.kinks();
  CHECK(std::find(k.begin(), k.end(), -4.0) != k.end());
}

TEST_CASE("length-biased density is x f(x) / E(X)") {
  for (auto id : {FamilyId::Gamma, FamilyId::Weibull, FamilyId::Lognormal}) {
    const ParamFamily f(id, {2.0, 0.7});
    const WeightedFamily wf(f, WeightSpec::length_biased());
    CHECK(wf.analytic_normalizer() == doctest::Approx(f.mean_closed_form()));
    for (double x : {0.3, 1.0, 4.2}) {
      const double expected = std::log(x) + f.log_pdf(x) - std::log(f.mean_closed_form());
      CHECK(weighted_log_pdf(wf, x) == doctest::Approx(expected).epsilon(1e-12));
    }
    // The weighted CDF is the integral of the weighted density (midpoint rule).
    double acc = 0.0;
    const double h = 1e-4;
    for (double x = h / 2; x < 2.0; x += h) acc += std::exp(weighted_log_pdf(wf, x)) * h;
    CHECK(weighted_cdf(wf, 2.0) == doctest::Approx(acc).epsilon(1e-6));
  }
  CHECK_THROWS_AS(WeightedFamily(ParamFamily(FamilyId::Normal, {0.0, 1.0}), WeightSpec::length_biased()),
                  NotAvailableError);
  CHECK(WeightedFamily(ParamFamily(FamilyId::Gamma, {1.0, 1.0}), WeightSpec::length_biased()).label() ==
        "length_biased(gamma)");
}

TEST_CASE("indicator weights need an empirical normalizer") {
  const WeightedFamily wf(ParamFamily(FamilyId::Logistic, {0.0, 1.0}), WeightSpec::indicator(Interval::at_most(0.0)));
  CHECK_THROWS_AS(weighted_log_pdf(wf, -1.0), DomainError);
  CHECK_THROWS_AS(weighted_log_pdf(wf, -1.0, 0.0), DomainError);
  CHECK_THROWS_AS(wf.analytic_normalizer(), NotAvailableError);
  CHECK(weighted_log_pdf(wf, 0.5, 0.4) == -kInf);
  CHECK(weighted_log_pdf(wf, 0.0, 0.4) ==
        doctest::Approx(wf.base().log_pdf(0.0) - std::log(0.4)).epsilon(1e-14));
  CHECK_THROWS_AS(sample(wf, 10, 1), NotAvailableError);
}

TEST_CASE("interval membership is half-open") {
  const Interval a = Interval::at_most(0.0);
  CHECK(a.contains(0.0));
  CHECK(a.contains(-1e300));
  CHECK_FALSE(a.contains(1e-300));
  const Interval b = Interval::above(0.0);
  CHECK_FALSE(b.contains(0.0));
  CHECK(b.contains(5.0));
  CHECK(Interval::whole_line().is_whole_line());
}

TEST_CASE("samplers are deterministic in the seed") {
  const ParamFamily f(FamilyId::Gamma, {2.0, 3.0});
  CHECK(sample(f, 100, 42) == sample(f, 100, 42));
  CHECK(sample(f, 100, 42) != sample(f, 100, 43));
  Rng a(7), b(7);
  for (int i = 0; i < 1000; ++i) {
    const double u = a.uniform();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
    CHECK(u == b.uniform());
  }
}

TEST_CASE("samplers match their distributions") {
  const std::size_t n = 20000;
  const double bound = 1.63 / std::sqrt(static_cast<double>(n));  // 1% KS level
  for (const auto& r : kReferences) {
    CAPTURE(family_name(r.id));
    const ParamFamily f(r.id, r.params);
    CHECK(ks_distance(sample(f, n, 11), [&](double x) { return f.cdf(x); }) < bound);
  }
  const auto t = example2_truth();
  CHECK(ks_distance(sample(t, n, 12), [&](double x) { return t.cdf(x); }) < bound);
  for (auto id : {FamilyId::Gamma, FamilyId::Weibull, FamilyId::Lognormal}) {
    CAPTURE(family_name(id));
    const WeightedFamily wf(ParamFamily(id, {2.0, 0.5}), WeightSpec::length_biased());
    CHECK(ks_distance(sample(wf, n, 13), [&](double x) { return weighted_cdf(wf, x); }) < bound);
  }
}

TEST_CASE("length-biased Weibull sampler agrees with acceptance-rejection") {
  // Oracle: propose from the unweighted family and accept with probability
  // x / c, c a far quantile. The truncation above c carries negligible mass.
  const ParamFamily f(FamilyId::Weibull, {1.7, 3.0});
  const double c = f.quantile(1.0 - 1e-12);
  Rng rng(99);
  std::vector<double> oracle;
  while (oracle.size() < 20000) {
    const double x = f.quantile(rng.uniform());
    if (rng.uniform() * c < x) oracle.push_back(x);
  }
  const auto direct = sample(WeightedFamily(f, WeightSpec::length_biased()), 20000, 5);
  const double exact_mean = 3.0 * std::tgamma(1.0 + 2.0 / 1.7) / std::tgamma(1.0 + 1.0 / 1.7);
  CHECK(mean(oracle) == doctest::Approx(exact_mean).epsilon(0.02));
  CHECK(mean(direct) == doctest::Approx(exact_mean).epsilon(0.02));
  std::sort(oracle.begin(), oracle.end());
  const WeightedFamily wf(f, WeightSpec::length_biased());
  CHECK(ks_distance(oracle, [&](double x) { return weighted_cdf(wf, x); }) < 0.0115);
}

TEST_CASE("standard gamma variates have the right moments") {
  Rng rng(3);
  for (double shape : {0.4, 1.0, 3.5}) {
    std::vector<double> xs(40000);
    for (auto& x : xs) x = rng.standard_gamma(shape);
    const double m = mean(xs);
    double v = 0.0;
    for (double x : xs) v += (x - m) * (x - m);
    v /= static_cast<double>(xs.size());
    CHECK(m == doctest::Approx(shape).epsilon(0.03));
    CHECK(v == doctest::Approx(shape).epsilon(0.06));
  }
}

TEST_CASE("normal quantile inverts the cdf") {
  for (double p : {1e-300, 1e-20, 0.001, 0.025, 0.3, 0.5, 0.9, 0.999999}) {
    CHECK(normal_cdf(normal_quantile(p)) == doctest::Approx(p).epsilon(1e-13));
  }
  CHECK(normal_quantile(0.975) == doctest::Approx(1.95996398454005).epsilon(1e-14));
  CHECK(normal_sf(1.0) == doctest::Approx(1.0 - normal_cdf(1.0)).epsilon(1e-14));
  CHECK_THROWS_AS(normal_quantile(0.0), DomainError);
  CHECK_THROWS_AS(normal_quantile(1.0), DomainError);
}
