#include <doctest.h>

#include <cmath>

#include "wmcs/confidence_set.hpp"
#include "wmcs/errors.hpp"

using namespace wmcs;

namespace {

std::vector<WeightedFamily> length_biased_candidates() {
  std::vector<WeightedFamily> out;
  for (auto id : {FamilyId::Lognormal, FamilyId::Gamma, FamilyId::Weibull}) {
    out.emplace_back(ParamFamily(id, {1.0, 1.0}), WeightSpec::length_biased());
  }
  return out;
}

}  // namespace

TEST_CASE("set built from length-biased candidates") {
  const WeightedFamily truth(ParamFamily(FamilyId::Lognormal, {2.0, 0.5}), WeightSpec::length_biased());
  const Dataset d(sample(truth, 300, 2024));
  const auto cs = build_mcs(length_biased_candidates(), d, 0.05);
  REQUIRE(cs.fits.size() == 3);
  CHECK(cs.warnings.empty());
  CHECK(cs.outcomes.size() == 3);
  CHECK(cs.contains(0));
  CHECK_FALSE(cs.region.has_value());
  for (std::size_t m : cs.members) CHECK(cs.outcomes[m].accepted);
  const auto mf = cs.member_fits();
  REQUIRE(mf.size() == cs.members.size());
  for (std::size_t k = 0; k < mf.size(); ++k) CHECK(mf[k].wf.base().id() == cs.candidates[cs.members[k]].base().id());
  // Rebuilding from the fits gives the same decisions.
  const auto again = confidence_set_from_fits(cs.fits, 0.05);
  CHECK(again.members == cs.members);
}

TEST_CASE("candidates that cannot be fitted are dropped") {
  const Dataset d(sample(ParamFamily(FamilyId::Normal, {0.0, 1.0}), 200, 5));
  const std::vector<WeightedFamily> cands{WeightedFamily(ParamFamily(FamilyId::Gamma, {1.0, 1.0}), {}),
                                          WeightedFamily(ParamFamily(FamilyId::Normal, {0.0, 1.0}), {}),
                                          WeightedFamily(ParamFamily(FamilyId::Logistic, {0.0, 1.0}), {})};
  const auto cs = build_mcs(cands, d, 0.05);
  CHECK(cs.fits.size() == 2);
  CHECK(cs.candidate_index == std::vector<std::size_t>{1, 2});
  REQUIRE(cs.warnings.size() == 1);
  CHECK(cs.warnings[0].find("gamma") != std::string::npos);
  CHECK_FALSE(cs.contains(0));
  // k counts the fitted models only.
  CHECK(cs.outcomes[0].critical == doctest::Approx(critical_value(0.05, 2)));

  const std::vector<WeightedFamily> one_left{cands[0], cands[1]};
  const auto single = build_mcs(one_left, d, 0.05);
  CHECK(single.members == std::vector<std::size_t>{1});
  CHECK(single.outcomes.empty());

  const std::vector<WeightedFamily> none_left{cands[0], WeightedFamily(ParamFamily(FamilyId::Weibull, {1.0, 1.0}), {})};
  CHECK_THROWS_AS(build_mcs(none_left, d, 0.05), InsufficientDataError);
}

TEST_CASE("argument checks") {
  const Dataset d(sample(ParamFamily(FamilyId::Gamma, {2.0, 1.0}), 50, 1));
  auto cands = length_biased_candidates();
  CHECK_THROWS_AS(build_mcs({cands[0]}, d, 0.05), DomainError);
  CHECK_THROWS_AS(build_mcs(cands, d, 1.5), DomainError);
  cands[1] = WeightedFamily(ParamFamily(FamilyId::Gamma, {1.0, 1.0}), {});
  CHECK_THROWS_AS(build_mcs(cands, d, 0.05), DomainError);
  const std::vector<ParamFamily> fams{ParamFamily(FamilyId::Normal, {0.0, 1.0}), ParamFamily(FamilyId::Logistic, {0.0, 1.0})};
  CHECK_THROWS_AS(build_local_mcs(fams, d, Interval::at_most(-1.0), 0.05), InsufficientDataError);
}

TEST_CASE("local sets") {
  const Dataset d(sample(example2_truth(), 1000, 31));
  const std::vector<ParamFamily> fams{ParamFamily(FamilyId::Normal, {0.0, 1.0}), ParamFamily(FamilyId::Cauchy, {0.0, 1.0}),
                                      ParamFamily(FamilyId::Logistic, {0.0, 1.0}), ParamFamily(FamilyId::Laplace, {0.0, 1.0})};
  const auto cs = build_local_mcs(fams, d, Interval::at_most(0.0), 0.025);
  REQUIRE(cs.region.has_value());
  CHECK(*cs.region == Interval::at_most(0.0));
  CHECK(cs.outcomes.front().critical == doctest::Approx(2.39397979982).epsilon(1e-10));
  // The laplace component generated the left mode.
  CHECK(cs.contains(3));
  CHECK_FALSE(cs.contains(1));
  for (const auto& f : cs.fits) CHECK(f.norm_constant == ecdf_measure(d, Interval::at_most(0.0)));
}

TEST_CASE("local statistics do not depend on the shared empirical mass") {
  const Dataset d(sample(example2_truth(), 600, 77));
  const std::vector<ParamFamily> fams{ParamFamily(FamilyId::Gamma, {1.0, 1.0}), ParamFamily(FamilyId::Weibull, {1.0, 1.0}),
                                      ParamFamily(FamilyId::Lognormal, {0.0, 1.0})};
  const auto cs = build_local_mcs(fams, d, Interval::above(0.0), 0.025);
  // Drop the -log P_hat term from every in-region contribution.
  std::vector<FittedModel> stripped = cs.fits;
  for (auto& f : stripped) {
    f.loglik_total = 0.0;
    for (std::size_t l = 0; l < f.loglik_per_obs.size(); ++l) {
      if (f.in_region[l]) f.loglik_per_obs[l] += std::log(f.norm_constant);
      f.loglik_total += f.loglik_per_obs[l];
    }
  }
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      if (i == j) continue;
      const double with = t_statistic(cs.fits[i], cs.fits[j]).t_value;
      const double without = t_statistic(stripped[i], stripped[j]).t_value;
      CHECK(std::abs(with - without) <= 1e-10);
    }
  }
}
