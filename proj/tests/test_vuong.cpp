#include <doctest.h>

#include <cmath>

#include "wmcs/errors.hpp"
#include "wmcs/vuong.hpp"

using namespace wmcs;

namespace {

FittedModel fake_fit(std::vector<double> logliks, std::size_t dim) {
  std::vector<double> params(dim, 1.0);
  FamilyId id = dim == 2 ? FamilyId::Normal : FamilyId::TwoComponentMixture;
  if (dim == 5) params = {0.5, 0.0, 1.0, 0.0, 1.0};
  FittedModel fm{WeightedFamily(ParamFamily(id, params), {})};
  fm.loglik_per_obs = std::move(logliks);
  fm.in_region.assign(fm.loglik_per_obs.size(), true);
  for (double v : fm.loglik_per_obs) fm.loglik_total += v;
  fm.effective_n = fm.loglik_per_obs.size();
  return fm;
}

// Two-pass textbook statistic used as the reference.
double oracle_t(const std::vector<double>& a, const std::vector<double>& b, double penalty) {
  const double n = static_cast<double>(a.size());
  double total = 0.0;
  for (std::size_t l = 0; l < a.size(); ++l) total += a[l] - b[l];
  const double m = total / n;
  double ss = 0.0;
  for (std::size_t l = 0; l < a.size(); ++l) ss += (a[l] - b[l] - m) * (a[l] - b[l] - m);
  return (total - penalty) / (std::sqrt(n) * std::sqrt(ss / n));
}

}  // namespace

TEST_CASE("critical values") {
  // Frozen from mpmath: -Phi^{-1}(alpha / (k - 1)).
  CHECK(critical_value(0.05, 3) == doctest::Approx(1.95996398454).epsilon(1e-11));
  CHECK(critical_value(0.025, 4) == doctest::Approx(2.39397979982).epsilon(1e-11));
  CHECK(critical_value(0.025, 3) == doctest::Approx(2.24140272760).epsilon(1e-11));
  CHECK(critical_value(0.05, 2) == doctest::Approx(1.64485362695).epsilon(1e-11));
  CHECK_THROWS_AS(critical_value(0.05, 1), DomainError);
  CHECK_THROWS_AS(critical_value(0.0, 3), DomainError);
  CHECK_THROWS_AS(critical_value(2.5, 3), DomainError);
}

TEST_CASE("variance of the log ratios") {
  const std::vector<double> a{1.0, 2.0, 4.0, 7.0};
  const std::vector<double> b{0.0, 0.0, 0.0, 0.0};
  // ratios 1, 2, 4, 7: mean 3.5, population variance 5.25
  CHECK(a_hat_squared(a, b) == doctest::Approx(5.25).epsilon(1e-14));
  // A common offset of 1e8 does not swamp the variance.
  std::vector<double> big(a);
  for (auto& v : big) v += 1e8;
  CHECK(a_hat_squared(big, b) == doctest::Approx(5.25).epsilon(1e-8));
  CHECK_THROWS_AS(a_hat_squared(a, std::vector<double>{1.0}), DimensionError);
  CHECK_THROWS_AS(a_hat_squared(std::vector<double>{1.0}, std::vector<double>{1.0}), DimensionError);
}

TEST_CASE("t statistic matches a two-pass oracle") {
  const std::vector<double> a{-1.2, -0.7, -2.5, -1.1, -0.3, -1.9};
  const std::vector<double> b{-1.0, -1.3, -2.0, -1.6, -0.9, -2.2};
  const auto s = t_statistic(fake_fit(a, 2), fake_fit(b, 5), 3, 4);
  CHECK(s.i == 3);
  CHECK(s.j == 4);
  CHECK(s.penalty == -3.0);
  CHECK(s.t_value == doctest::Approx(oracle_t(a, b, -3.0)).epsilon(1e-13));
  CHECK(s.mean_lr == doctest::Approx(s.lr_total / 6.0));
  // Equal dimensions make the statistic antisymmetric.
  const auto ab = t_statistic(fake_fit(a, 2), fake_fit(b, 2));
  const auto ba = t_statistic(fake_fit(b, 2), fake_fit(a, 2));
  CHECK(ab.t_value == doctest::Approx(-ba.t_value).epsilon(1e-14));
}

TEST_CASE("degenerate statistics") {
  const std::vector<double> a{-1.0, -2.0, -3.0};
  CHECK(t_statistic(fake_fit(a, 2), fake_fit(a, 2)).t_value == 0.0);
  std::vector<double> shifted{-1.5, -2.5, -3.5};
  CHECK_THROWS_AS(t_statistic(fake_fit(a, 2), fake_fit(shifted, 2)), DegenerateVarianceError);
  CHECK_THROWS_AS(t_statistic(fake_fit(a, 2), fake_fit(a, 5)), DegenerateVarianceError);
  std::vector<double> inf{-1.0, -kInf, -3.0};
  CHECK_THROWS_AS(t_statistic(fake_fit(a, 2), fake_fit(inf, 2)), DegenerateVarianceError);
  CHECK_THROWS_AS(t_statistic(fake_fit(a, 2), fake_fit({-1.0, -2.0}, 2)), DimensionError);
}

TEST_CASE("decision rule") {
  const std::vector<double> good{-1.0, -1.1, -0.9, -1.2, -0.8, -1.0, -1.05, -0.95};
  std::vector<double> mid(good), bad(good);
  const std::vector<double> noise{0.1, -0.1, 0.05, -0.05, 0.2, -0.2, 0.0, 0.01};
  for (std::size_t l = 0; l < good.size(); ++l) {
    mid[l] += -0.05 + noise[l];
    bad[l] += -2.0 + noise[l];
  }
  const std::vector<FittedModel> fits{fake_fit(good, 2), fake_fit(mid, 2), fake_fit(bad, 2)};
  const auto out = decide(fits, 0.05);
  REQUIRE(out.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(out[i].model_index == i);
    CHECK(out[i].t_row.size() == 2);
    CHECK(out[i].critical == doctest::Approx(1.95996398454));
    double m = kInf;
    for (const auto& s : out[i].t_row) m = std::min(m, s.t_value);
    CHECK(out[i].min_t == m);
    CHECK(out[i].accepted == (m >= -out[i].critical));
  }
  CHECK(out[0].accepted);
  CHECK(out[1].accepted);
  CHECK_FALSE(out[2].accepted);
}
