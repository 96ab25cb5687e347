#include <doctest.h>

#include <cmath>
#include <random>

#include "wmcs/errors.hpp"
#include "wmcs/mixture.hpp"

using namespace wmcs;

namespace {

double direct_psi(double a, const std::vector<double>& f, const std::vector<double>& g) {
  double s = 0.0;
  for (std::size_t l = 0; l < f.size(); ++l) s += std::log(a * std::exp(f[l]) + (1.0 - a) * std::exp(g[l]));
  return s / static_cast<double>(f.size());
}

}  // namespace

TEST_CASE("level budget across partitions") {
  CHECK(beta_budget(0.05, 2) == doctest::Approx(0.0253205655191).epsilon(1e-12));
  CHECK(beta_budget(0.05, 1) == doctest::Approx(0.05).epsilon(1e-14));
  CHECK(std::pow(1.0 - beta_budget(0.1, 4), 4) == doctest::Approx(0.9).epsilon(1e-14));
  CHECK_THROWS_AS(beta_budget(0.0, 2), DomainError);
  CHECK_THROWS_AS(beta_budget(0.05, 0), DomainError);
}

TEST_CASE("psi_hat is the mean log mixture") {
  const std::vector<double> f{-1.0, -2.0, -0.5, -3.0};
  const std::vector<double> g{-2.0, -0.4, -1.5, -1.0};
  for (double a : {0.0, 0.2, 0.5, 0.9, 1.0}) {
    CHECK(psi_hat(a, f, g) == doctest::Approx(direct_psi(a, f, g)).epsilon(1e-13));
  }
  const std::vector<double> g_zero{-2.0, -kInf, -1.5, -1.0};
  CHECK(psi_hat(0.0, f, g_zero) == -kInf);
  CHECK(std::isfinite(psi_hat(0.3, f, g_zero)));
  CHECK_THROWS_AS(psi_hat(0.5, f, std::vector<double>{1.0}), DimensionError);
}

TEST_CASE("optimal weight against a fine grid") {
  std::mt19937_64 gen(17);
  std::normal_distribution<double> z(0.0, 1.0);
  for (int rep = 0; rep < 10; ++rep) {
    std::vector<double> f(40), g(40);
    for (std::size_t l = 0; l < f.size(); ++l) {
      f[l] = -1.0 + z(gen);
      g[l] = -1.0 + z(gen);
    }
    const double a = optimal_alpha(f, g);
    double best = -kInf, arg = 0.0;
    for (int k = 0; k <= 20000; ++k) {
      const double t = k / 20000.0;
      const double v = psi_hat(t, f, g);
      if (v > best) {
        best = v;
        arg = t;
      }
    }
    CHECK(std::abs(a - arg) < 1e-4);
  }
}

TEST_CASE("end points are returned exactly") {
  // g dominates everywhere: the weight on f goes to zero.
  CHECK(optimal_alpha(std::vector<double>{-3.0, -4.0, -5.0}, std::vector<double>{-1.0, -1.0, -1.0}) == 0.0);
  CHECK(optimal_alpha(std::vector<double>{-1.0, -1.0, -1.0}, std::vector<double>{-3.0, -4.0, -5.0}) == 1.0);
  // A zero of f forces a positive weight on g and vice versa.
  CHECK(optimal_alpha(std::vector<double>{-kInf, -1.0}, std::vector<double>{-9.0, -9.0}) < 1.0);
  CHECK(optimal_alpha(std::vector<double>{-1.0, -1.0}, std::vector<double>{-1.0, -1.0}) == 0.5);
}

TEST_CASE("disjoint components give the empirical split") {
  // 3 observations only under f, 7 only under g.
  std::vector<double> f(10, -kInf), g(10, -kInf);
  for (int l = 0; l < 3; ++l) f[l] = -1.0 - 0.1 * l;
  for (int l = 3; l < 10; ++l) g[l] = -2.0 + 0.05 * l;
  CHECK(optimal_alpha(f, g) == doctest::Approx(0.3).epsilon(1e-6));
  std::vector<double> nothing(10, -kInf);
  CHECK_THROWS_AS(optimal_alpha(nothing, nothing), DegenerateMixtureError);
  CHECK_THROWS_AS(optimal_alpha(f, std::vector<double>{1.0}), DimensionError);
}

TEST_CASE("two-partition mixture set") {
  const Dataset d(sample(example2_truth(), 1000, 404));
  const std::vector<ParamFamily> a{ParamFamily(FamilyId::Logistic, {0.0, 1.0}), ParamFamily(FamilyId::Laplace, {0.0, 1.0})};
  const std::vector<ParamFamily> b{ParamFamily(FamilyId::Gamma, {1.0, 1.0}), ParamFamily(FamilyId::Weibull, {1.0, 1.0})};
  CHECK_THROWS_AS(build_mixture_set(a, b, d, 0.0, 0.05, 0.03), DomainError);

  const auto reference = make_density(example2_truth());
  const auto ms = build_mixture_set(a, b, d, 0.0, 0.05, beta_budget(0.05, 2), &reference);
  CHECK(ms.warnings.size() == 1);
  CHECK(ms.region_a == Interval::at_most(0.0));
  CHECK(ms.region_b == Interval::above(0.0));
  const double share = ecdf(d, 0.0);
  REQUIRE(ms.candidates.size() == ms.local_a.members.size() * ms.local_b.members.size());
  for (const auto& c : ms.candidates) {
    CHECK(c.alpha_opt == doctest::Approx(share).epsilon(1e-5));
    REQUIRE(c.hellinger.has_value());
    CHECK(*c.hellinger > 0.0);
    CHECK(*c.hellinger < 0.3);
    CHECK(*c.l2 < 0.2);
    const auto dens = c.density();
    CHECK(integrate(dens.pdf, dens.lower, dens.upper, dens.breakpoints, 1e-8) == doctest::Approx(1.0).epsilon(1e-7));
  }
  const auto plain = build_mixture_set(a, b, d, 0.0, 0.05);
  CHECK(plain.warnings.size() == 1);
  CHECK_FALSE(plain.candidates.front().hellinger.has_value());
  CHECK(plain.candidates.front().label().find('+') != std::string::npos);
}
