#include "wmcs/confidence_set.hpp"

#include <algorithm>
#include <future>

#include "wmcs/errors.hpp"

namespace wmcs {
namespace {

void assemble(ConfidenceSet& cs) {
  if (cs.fits.empty()) throw InsufficientDataError("no candidate could be fitted");
  if (cs.fits.size() == 1) {
    cs.members = {cs.candidate_index.front()};
    cs.warnings.push_back("only one candidate fitted; it forms the set without testing");
    return;
  }
  cs.outcomes = decide(cs.fits, cs.alpha);
  for (auto& o : cs.outcomes) {
    const std::size_t original = cs.candidate_index[o.model_index];
    if (o.accepted) cs.members.push_back(original);
  }
}

}  // namespace

bool ConfidenceSet::contains(std::size_t candidate) const {
  return std::find(members.begin(), members.end(), candidate) != members.end();
}

std::vector<FittedModel> ConfidenceSet::member_fits() const {
  std::vector<FittedModel> out;
  for (std::size_t m : members) {
    const auto it = std::find(candidate_index.begin(), candidate_index.end(), m);
    out.push_back(fits[static_cast<std::size_t>(it - candidate_index.begin())]);
  }
  return out;
}

ConfidenceSet build_mcs(const std::vector<WeightedFamily>& candidates, const Dataset& data,
                        double alpha, const OptimizerOptions& opts) {
  if (candidates.size() < 2) throw DomainError("build_mcs: need at least two candidates");
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("build_mcs: alpha must lie in (0, 1)");
  const WeightSpec& weight = candidates.front().weight();
  for (const auto& c : candidates) {
    if (!(c.weight() == weight)) throw DomainError("build_mcs: candidates use different weights");
  }

  ConfidenceSet cs;
  cs.alpha = alpha;
  cs.weight = weight;
  cs.candidates = candidates;
  if (weight.kind == WeightKind::IndicatorRegion) cs.region = weight.region;

  // Fits are independent; launch them together and collect in candidate order.
  std::vector<std::future<FittedModel>> pending;
  pending.reserve(candidates.size());
  for (const auto& c : candidates) {
    pending.push_back(std::async(std::launch::async, [&c, &data, &opts] {
      return fit_qmle(c, data, opts);
    }));
  }
  for (std::size_t m = 0; m < pending.size(); ++m) {
    try {
      cs.fits.push_back(pending[m].get());
      cs.candidate_index.push_back(m);
    } catch (const StatisticalError& e) {
      cs.warnings.push_back(candidates[m].label() + " excluded: " + e.what());
    }
  }
  assemble(cs);
  return cs;
}

ConfidenceSet build_local_mcs(const std::vector<ParamFamily>& candidates, const Dataset& data,
                              const Interval& region, double alpha, const OptimizerOptions& opts) {
  if (!(ecdf_measure(data, region) > 0.0)) {
    throw InsufficientDataError("region " + to_string(region) + " holds no observations");
  }
  std::vector<WeightedFamily> wrapped;
  wrapped.reserve(candidates.size());
  for (const auto& c : candidates) wrapped.emplace_back(c, WeightSpec::indicator(region));
  return build_mcs(wrapped, data, alpha, opts);
}

ConfidenceSet confidence_set_from_fits(std::vector<FittedModel> fits, double alpha) {
  ConfidenceSet cs;
  cs.alpha = alpha;
  if (!fits.empty()) {
    cs.weight = fits.front().wf.weight();
    if (cs.weight.kind == WeightKind::IndicatorRegion) cs.region = cs.weight.region;
  }
  for (std::size_t m = 0; m < fits.size(); ++m) {
    cs.candidates.push_back(fits[m].wf);
    cs.candidate_index.push_back(m);
  }
  cs.fits = std::move(fits);
  assemble(cs);
  return cs;
}

}  // namespace wmcs
