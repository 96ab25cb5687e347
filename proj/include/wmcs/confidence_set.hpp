#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wmcs/vuong.hpp"

namespace wmcs {

// Result of the pairwise-testing procedure over a candidate list.
//
// `fits` and `outcomes` cover the successfully fitted candidates only;
// `candidate_index[m]` maps position m back into the caller's candidate list.
// Candidates that failed to fit are reported in `warnings` and do not count
// towards k.
struct ConfidenceSet {
  double alpha = 0.05;
  WeightSpec weight;
  std::optional<Interval> region;  // set for local confidence sets
  std::vector<WeightedFamily> candidates;
  std::vector<FittedModel> fits;
  std::vector<std::size_t> candidate_index;
  std::vector<TestOutcome> outcomes;
  std::vector<std::size_t> members;  // indices into `candidates`
  std::vector<std::string> warnings;

  bool contains(std::size_t candidate) const;
  // Fitted models of the members, in member order.
  std::vector<FittedModel> member_fits() const;
};

// Fits every candidate and keeps those whose null hypothesis survives the
// Bonferroni-adjusted pairwise tests. All candidates must share one weight
// spec (DomainError otherwise). With a single surviving fit the set is that
// fit alone; with none, InsufficientDataError.
ConfidenceSet build_mcs(const std::vector<WeightedFamily>& candidates, const Dataset& data,
                        double alpha, const OptimizerOptions& opts = {});

// Local confidence set on `region`: each family is wrapped in the indicator
// weight I_A(x) / P_hat(A), with P_hat the empirical mass of the region.
// Throws InsufficientDataError when the region holds no observations.
ConfidenceSet build_local_mcs(const std::vector<ParamFamily>& candidates, const Dataset& data,
                              const Interval& region, double alpha,
                              const OptimizerOptions& opts = {});

// Same procedure on models that are already fitted. `fits` must come from one
// sample; the result's candidate_index is the identity.
ConfidenceSet confidence_set_from_fits(std::vector<FittedModel> fits, double alpha);

}  // namespace wmcs
