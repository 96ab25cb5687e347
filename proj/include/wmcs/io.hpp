#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wmcs/harness.hpp"

namespace wmcs {

using Json = nlohmann::json;

// Reads newline-delimited numbers, or a CSV column selected by header name
// when `column` is set. Blank lines and lines starting with '#' are skipped.
// Throws ParseError naming the offending line, or for an empty input.
Dataset ingest(const std::filesystem::path& path, const std::optional<std::string>& column = {});
Dataset ingest_text(const std::string& text, const std::optional<std::string>& column = {});

// Model descriptors:
//   {"family": "lognormal", "params": {"mu": 2, "sigma2": 0.5},
//    "weight": {"kind": "length_biased"}}
// "params" may be omitted (defaults are used); "weight" defaults to identity.
// Indicator weights carry "region": [lower, upper] with null for an infinite end.
WeightedFamily parse_model(const Json& j);
std::vector<WeightedFamily> parse_models(const Json& j);
Json to_json(const WeightedFamily& wf);
Json to_json(const WeightSpec& w);
Json to_json(const Interval& iv);
Interval interval_from_json(const Json& j);

std::vector<double> default_params(FamilyId id);

Json to_json(const FittedModel& fm);
Json to_json(const PairStatistic& s);
Json to_json(const ConfidenceSet& cs);
Json to_json(const MixtureCandidate& mc);
Json to_json(const MixtureSet& ms);
Json to_json(const LevelSummary& ls);
Json to_json(const Example1Summary& s);
Json to_json(const Example2Summary& s);

// A mixture candidate rebuilt from its JSON form (region-restricted
// components plus weight). Used by the distances subcommand.
struct MixtureDescriptor {
  WeightedFamily f;
  WeightedFamily g;
  double alpha_opt;
  DensityHandle density() const;
  std::string label() const;
};
std::vector<MixtureDescriptor> parse_mixture_candidates(const Json& j);

// Fixed four-decimal rendering used by every human-readable table.
std::string fixed4(double v);

// "hypothesis,statistic,conclusion" rows, one per tested model.
std::string confidence_set_csv(const ConfidenceSet& cs);

// "combining_models,alpha_opt,hellinger,l2,half_sq_hellinger,sq_l2".
std::string mixture_csv(const std::vector<MixtureCandidate>& candidates);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace wmcs
