#include "wmcs/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "wmcs/errors.hpp"

namespace wmcs {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::optional<double> parse_number(const std::string& s) {
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const char* first = s.data();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json outcome_json(const ConfidenceSet& cs, const TestOutcome& o) {
  Json row;
  const std::size_t original = cs.candidate_index[o.model_index];
  row["model"] = cs.candidates[original].label();
  row["candidate_index"] = original;
  row["min_t"] = o.min_t;
  row["critical"] = o.critical;
  row["accepted"] = o.accepted;
  Json t_row = Json::array();
  for (const auto& s : o.t_row) {
    Json js = to_json(s);
    js["against"] = cs.candidates[cs.candidate_index[s.j]].label();
    t_row.push_back(js);
  }
  row["t_row"] = t_row;
  return row;
}

}  // namespace

Dataset ingest_text(const std::string& text, const std::optional<std::string>& column) {
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  std::optional<std::size_t> col_index;
  std::vector<double> values;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (column) {
      const auto cells = split_csv(line);
      if (!col_index) {
        for (std::size_t c = 0; c < cells.size(); ++c) {
          if (cells[c] == *column) col_index = c;
        }
        if (!col_index) throw ParseError("column '" + *column + "' not found in header", line_no);
        continue;
      }
      if (*col_index >= cells.size()) throw ParseError("row has no column '" + *column + "'", line_no);
      const auto v = parse_number(cells[*col_index]);
      if (!v) throw ParseError("cannot parse '" + cells[*col_index] + "' as a number", line_no);
      values.push_back(*v);
    } else {
      const auto v = parse_number(line);
      if (!v) throw ParseError("cannot parse '" + line + "' as a number", line_no);
      values.push_back(*v);
    }
  }
  if (values.empty()) throw ParseError("input holds no observations");
  return Dataset(std::move(values));
}

Dataset ingest(const std::filesystem::path& path, const std::optional<std::string>& column) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return ingest_text(buf.str(), column);
}

std::vector<double> default_params(FamilyId id) {
  switch (id) {
    case FamilyId::TwoComponentMixture: {
      const auto p = example2_truth().params();
      return {p.begin(), p.end()};
    }
    case FamilyId::Gamma:
    case FamilyId::Weibull: return {1.0, 1.0};
    default: return {0.0, 1.0};
  }
}

Interval interval_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw ParseError("region must be a two-element array");
  Interval iv;
  iv.lower = j[0].is_null() ? -kInf : j[0].get<double>();
  iv.upper = j[1].is_null() ? kInf : j[1].get<double>();
  if (!(iv.upper > iv.lower)) throw ParseError("region upper bound must exceed the lower bound");
  return iv;
}

Json to_json(const Interval& iv) { return Json::array({number_or_null(iv.lower), number_or_null(iv.upper)}); }

Json to_json(const WeightSpec& w) {
  Json j;
  j["kind"] = std::string(weight_kind_name(w.kind));
  if (w.kind == WeightKind::IndicatorRegion) j["region"] = to_json(w.region);
  return j;
}

WeightedFamily parse_model(const Json& j) {
  if (!j.is_object() || !j.contains("family")) throw ParseError("model descriptor needs a 'family'");
  const FamilyId id = family_from_name(j.at("family").get<std::string>());
  auto params = default_params(id);
  if (j.contains("params")) {
    const auto names = param_names(id);
    const auto& jp = j.at("params");
    for (std::size_t k = 0; k < names.size(); ++k) {
      const std::string key(names[k]);
      if (jp.contains(key)) params[k] = jp.at(key).get<double>();
    }
    for (const auto& [key, _] : jp.items()) {
      bool known = false;
      for (auto n : names) known = known || n == key;
      if (!known) throw ParseError("unknown parameter '" + key + "' for " + std::string(family_name(id)));
    }
  }
  WeightSpec weight;
  if (j.contains("weight")) {
    const auto& jw = j.at("weight");
    const auto kind = weight_kind_from_name(jw.at("kind").get<std::string>());
    if (kind == WeightKind::LengthBiased) weight = WeightSpec::length_biased();
    if (kind == WeightKind::IndicatorRegion) {
      if (!jw.contains("region")) throw ParseError("indicator_region weight needs a 'region'");
      weight = WeightSpec::indicator(interval_from_json(jw.at("region")));
    }
  }
  return WeightedFamily(ParamFamily(id, std::move(params)), weight);
}

std::vector<WeightedFamily> parse_models(const Json& j) {
  const Json& list = j.is_object() && j.contains("models") ? j.at("models") : j;
  if (!list.is_array()) throw ParseError("model list must be a JSON array");
  std::vector<WeightedFamily> out;
  for (const auto& m : list) out.push_back(parse_model(m));
  return out;
}

Json to_json(const WeightedFamily& wf) {
  Json j;
  j["family"] = std::string(wf.base().name());
  Json params = Json::object();
  const auto names = param_names(wf.base().id());
  for (std::size_t k = 0; k < names.size(); ++k) params[std::string(names[k])] = wf.base().params()[k];
  j["params"] = params;
  j["weight"] = to_json(wf.weight());
  return j;
}

Json to_json(const FittedModel& fm) {
  Json j = to_json(fm.wf);
  j["label"] = fm.wf.label();
  j["loglik_total"] = fm.loglik_total;
  j["mean_loglik"] = fm.mean_loglik;
  j["norm_constant"] = fm.norm_constant;
  j["effective_n"] = fm.effective_n;
  j["converged"] = fm.converged;
  j["n_restarts_used"] = fm.n_restarts_used;
  return j;
}

Json to_json(const PairStatistic& s) {
  return Json{{"i", s.i},           {"j", s.j},         {"lr_total", s.lr_total},
              {"penalty", s.penalty}, {"a_hat", s.a_hat}, {"t_value", s.t_value},
              {"mean_lr", s.mean_lr}};
}

Json to_json(const ConfidenceSet& cs) {
  Json j;
  j["alpha"] = cs.alpha;
  j["weight"] = to_json(cs.weight);
  j["region"] = cs.region ? to_json(*cs.region) : Json(nullptr);
  Json members = Json::array();
  for (std::size_t m : cs.members) members.push_back(cs.candidates[m].label());
  j["members"] = members;
  Json table = Json::array();
  for (const auto& o : cs.outcomes) table.push_back(outcome_json(cs, o));
  j["table"] = table;
  Json fits = Json::array();
  for (const auto& f : cs.fits) fits.push_back(to_json(f));
  j["fits"] = fits;
  j["warnings"] = cs.warnings;
  return j;
}

Json to_json(const MixtureCandidate& mc) {
  Json j;
  j["label"] = mc.label();
  j["f"] = to_json(mc.f_component.wf);
  j["g"] = to_json(mc.g_component.wf);
  j["alpha_opt"] = mc.alpha_opt;
  j["psi_at_opt"] = mc.psi_at_opt;
  j["hellinger"] = mc.hellinger ? Json(*mc.hellinger) : Json(nullptr);
  j["l2"] = mc.l2 ? Json(*mc.l2) : Json(nullptr);
  return j;
}

Json to_json(const MixtureSet& ms) {
  Json j;
  j["alpha"] = ms.alpha;
  j["beta"] = ms.beta;
  j["partition"] = ms.partition_point;
  j["local_sets"] = {{"A", to_json(ms.local_a)}, {"B", to_json(ms.local_b)}};
  Json cands = Json::array();
  for (const auto& c : ms.candidates) cands.push_back(to_json(c));
  j["candidates"] = cands;
  j["distance_convention"] =
      "hellinger = sqrt(int (sqrt f - sqrt g)^2), no 1/sqrt(2) factor; l2 = sqrt(int (f - g)^2)";
  j["warnings"] = ms.warnings;
  return j;
}

Json to_json(const LevelSummary& ls) {
  Json j;
  j["n"] = ls.n;
  j["replications"] = ls.replications;
  j["failed"] = ls.failed;
  j["critical"] = ls.critical;
  Json hyps = Json::array();
  for (const auto& h : ls.hypotheses) {
    hyps.push_back({{"family", h.family},
                    {"mean_statistic", h.mean_statistic},
                    {"accept_frequency", h.accept_frequency},
                    {"accepted", h.accepted}});
  }
  j["hypotheses"] = hyps;
  j["confidence_set"] = ls.confidence_set;
  j["most_frequent_set"] = ls.most_frequent_set;
  j["most_frequent_share"] = ls.most_frequent_share;
  return j;
}

namespace {

Json config_json(const ExperimentConfig& c) {
  Json j;
  j["experiment"] = std::string(experiment_name(c.experiment));
  j["sample_sizes"] = c.sample_sizes;
  j["replications"] = c.replications;
  j["alpha"] = c.alpha;
  j["beta"] = c.beta ? Json(*c.beta) : Json(nullptr);
  j["seed"] = c.seed;
  j["optimizer"] = {{"max_iter", c.optimizer.max_iter},
                    {"tol", c.optimizer.tol},
                    {"restarts", c.optimizer.restarts},
                    {"seed", c.optimizer.seed}};
  return j;
}

}  // namespace

Json to_json(const Example1Summary& s) {
  Json j;
  j["config"] = config_json(s.config);
  Json levels = Json::array();
  for (const auto& l : s.levels) levels.push_back(to_json(l));
  j["levels"] = levels;
  return j;
}

Json to_json(const Example2Summary& s) {
  Json j;
  j["config"] = config_json(s.config);
  j["n"] = s.n;
  j["beta"] = s.beta;
  j["partition"] = s.partition_point;
  j["empirical_mass_a"] = s.empirical_mass_a;
  j["replicated"] = {{"A", to_json(s.region_a)}, {"B", to_json(s.region_b)}};
  j["sample_local_sets"] = {{"A", to_json(s.sample_local_a)}, {"B", to_json(s.sample_local_b)}};
  Json mix = Json::array();
  for (const auto& m : s.mixtures) {
    Json mj = to_json(m);
    if (m.hellinger) mj["half_sq_hellinger"] = 0.5 * *m.hellinger * *m.hellinger;
    if (m.l2) mj["sq_l2"] = *m.l2 * *m.l2;
    mix.push_back(mj);
  }
  j["candidates"] = mix;
  j["distance_convention"] =
      "hellinger = sqrt(int (sqrt f - sqrt g)^2), no 1/sqrt(2) factor; l2 = sqrt(int (f - g)^2); "
      "half_sq_hellinger = hellinger^2 / 2; sq_l2 = l2^2";
  return j;
}

DensityHandle MixtureDescriptor::density() const {
  return make_mixture_density(make_truncated_density(f.base(), f.weight().region),
                              make_truncated_density(g.base(), g.weight().region), alpha_opt);
}

std::string MixtureDescriptor::label() const {
  return std::string(f.base().name()) + "+" + std::string(g.base().name());
}

std::vector<MixtureDescriptor> parse_mixture_candidates(const Json& j) {
  if (!j.contains("candidates")) throw ParseError("mixture document has no 'candidates'");
  std::vector<MixtureDescriptor> out;
  for (const auto& c : j.at("candidates")) {
    auto f = parse_model(c.at("f"));
    auto g = parse_model(c.at("g"));
    if (f.weight().kind != WeightKind::IndicatorRegion || g.weight().kind != WeightKind::IndicatorRegion) {
      throw ParseError("mixture components must carry indicator_region weights");
    }
    out.push_back({std::move(f), std::move(g), c.at("alpha_opt").get<double>()});
  }
  return out;
}

std::string fixed4(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(4);
  os << v;
  return os.str();
}

std::string confidence_set_csv(const ConfidenceSet& cs) {
  std::ostringstream os;
  os << "hypothesis,statistic,conclusion\n";
  for (const auto& o : cs.outcomes) {
    const std::string name = cs.candidates[cs.candidate_index[o.model_index]].label();
    os << "H0: " << name << ',' << fixed4(o.min_t) << ',' << (o.accepted ? "accepted" : "rejected") << '\n';
  }
  return os.str();
}

std::string mixture_csv(const std::vector<MixtureCandidate>& candidates) {
  std::ostringstream os;
  os << "combining_models,alpha_opt,hellinger,l2,half_sq_hellinger,sq_l2\n";
  for (const auto& c : candidates) {
    os << c.label() << ',' << fixed4(c.alpha_opt) << ',';
    if (c.hellinger && c.l2) {
      os << fixed4(*c.hellinger) << ',' << fixed4(*c.l2) << ',' << fixed4(0.5 * *c.hellinger * *c.hellinger)
         << ',' << fixed4(*c.l2 * *c.l2);
    } else {
      os << ",,,";
    }
    os << '\n';
  }
  return os.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path.string());
  out << text;
  if (!out) throw UsageError("failed writing " + path.string());
}

}  // namespace wmcs
