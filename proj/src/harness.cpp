#include "wmcs/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <sstream>
#include <thread>

#include "wmcs/errors.hpp"
#include "wmcs/io.hpp"
#include "wmcs/random.hpp"

namespace wmcs {
namespace {

constexpr double kHistWidth = 0.5;
constexpr std::size_t kGridPoints = 401;

// One replication's outcome, indexed by the caller's candidate order.
using RunOne = std::function<ConfidenceSet(const Dataset&)>;

ReplicationRecord run_replication(const WeightedFamily& truth, std::size_t n, std::uint64_t seed,
                                  std::size_t rep, std::size_t k, const RunOne& run) {
  ReplicationRecord rec;
  rec.rep_index = rep;
  rec.min_statistics.assign(k, 0.0);
  rec.accepted.assign(k, false);
  try {
    const Dataset data(sample(truth, n, derive_seed(seed, n, rep)));
    const ConfidenceSet cs = run(data);
    if (cs.fits.size() != k) {
      rec.failed = true;
      return rec;
    }
    for (const auto& o : cs.outcomes) {
      const std::size_t c = cs.candidate_index[o.model_index];
      rec.min_statistics[c] = o.min_t;
      rec.accepted[c] = o.accepted;
    }
  } catch (const StatisticalError&) {
    rec.failed = true;
  }
  return rec;
}

// Runs replications on a small thread pool. Every record is stored at its
// replication index, so the aggregate does not depend on scheduling.
std::vector<ReplicationRecord> replicate(const WeightedFamily& truth, std::size_t n,
                                         const ExperimentConfig& cfg, std::size_t k,
                                         const RunOne& run) {
  std::vector<ReplicationRecord> records(cfg.replications);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t r = next++; r < cfg.replications; r = next++) {
      records[r] = run_replication(truth, n, cfg.seed, r, k, run);
    }
  };
  const unsigned w = std::max(1u, std::min<unsigned>(cfg.workers ? cfg.workers : default_workers(),
                                                     static_cast<unsigned>(cfg.replications)));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < w; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return records;
}

LevelSummary summarize(const std::vector<ReplicationRecord>& records, const std::vector<std::string>& names,
                       std::size_t n, double level) {
  const std::size_t k = names.size();
  LevelSummary ls;
  ls.n = n;
  ls.critical = critical_value(level, k);
  std::vector<double> sum(k, 0.0);
  std::vector<std::size_t> acc(k, 0);
  std::map<std::vector<bool>, std::size_t> set_counts;
  for (const auto& r : records) {
    if (r.failed) {
      ++ls.failed;
      continue;
    }
    ++ls.replications;
    for (std::size_t c = 0; c < k; ++c) {
      sum[c] += r.min_statistics[c];
      acc[c] += r.accepted[c] ? 1 : 0;
    }
    ++set_counts[r.accepted];
  }
  if (ls.replications == 0) throw InsufficientDataError("every replication failed to fit");
  const double reps = static_cast<double>(ls.replications);
  for (std::size_t c = 0; c < k; ++c) {
    HypothesisSummary h;
    h.family = names[c];
    h.mean_statistic = sum[c] / reps;
    h.accept_frequency = static_cast<double>(acc[c]) / reps;
    h.accepted = h.mean_statistic >= -ls.critical;
    if (h.accepted) ls.confidence_set.push_back(names[c]);
    ls.hypotheses.push_back(h);
  }
  // Ties go to the lexicographically first pattern.
  const std::vector<bool>* best = nullptr;
  std::size_t best_count = 0;
  for (const auto& [pattern, count] : set_counts) {
    if (count > best_count) {
      best = &pattern;
      best_count = count;
    }
  }
  for (std::size_t c = 0; c < k; ++c) {
    if ((*best)[c]) ls.most_frequent_set.push_back(names[c]);
  }
  ls.most_frequent_share = static_cast<double>(best_count) / reps;
  return ls;
}

std::string join(const std::vector<std::string>& xs, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += sep;
    out += xs[i];
  }
  return out;
}

std::string hypothesis_table(const LevelSummary& ls) {
  std::ostringstream os;
  os << "hypothesis,statistic,conclusion,accept_frequency\n";
  for (const auto& h : ls.hypotheses) {
    os << "H0: " << h.family << ',' << fixed4(h.mean_statistic) << ','
       << (h.accepted ? "accepted" : "rejected") << ',' << fixed4(h.accept_frequency) << '\n';
  }
  return os.str();
}

std::vector<std::string> family_names(const std::vector<ParamFamily>& fams) {
  std::vector<std::string> out;
  for (const auto& f : fams) out.emplace_back(f.name());
  return out;
}

std::vector<ParamFamily> example1_candidates() {
  return {ParamFamily(FamilyId::Lognormal, {2.0, 0.5}), ParamFamily(FamilyId::Gamma, {4.0, 2.0}),
          ParamFamily(FamilyId::Weibull, {2.0, 10.0})};
}

WeightedFamily example1_truth() {
  return WeightedFamily(ParamFamily(FamilyId::Lognormal, {2.0, 0.5}), WeightSpec::length_biased());
}

// Fits of the named families on the displayed sample, in list order.
std::vector<FittedModel> member_fits_by_name(const ConfidenceSet& cs, const std::vector<std::string>& names) {
  std::vector<FittedModel> out;
  for (const auto& name : names) {
    for (const auto& f : cs.fits) {
      if (f.wf.base().name() == name) out.push_back(f);
    }
  }
  return out;
}

}  // namespace

std::string_view experiment_name(ExperimentId id) {
  switch (id) {
    case ExperimentId::Example1: return "example1";
    case ExperimentId::Example2: return "example2";
    case ExperimentId::Custom: return "custom";
  }
  return "custom";
}

ExperimentId experiment_from_name(std::string_view name) {
  if (name == "example1") return ExperimentId::Example1;
  if (name == "example2") return ExperimentId::Example2;
  if (name == "custom") return ExperimentId::Custom;
  throw UsageError("unknown experiment '" + std::string(name) + "'");
}

void ExperimentConfig::validate() const {
  if (replications < 1) throw DomainError("replications must be at least 1");
  for (auto n : sample_sizes) {
    if (n < 10) throw DomainError("sample sizes must be at least 10");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
  if (beta && !(*beta > 0.0 && *beta < 1.0)) throw DomainError("beta must lie in (0, 1)");
}

unsigned default_workers() {
  if (const char* env = std::getenv("WMCS_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<ParamFamily> example2_candidates_a() {
  return {ParamFamily(FamilyId::Normal, {0.0, 1.0}), ParamFamily(FamilyId::Cauchy, {0.0, 1.0}),
          ParamFamily(FamilyId::Logistic, {0.0, 1.0}), ParamFamily(FamilyId::Laplace, {0.0, 1.0})};
}

std::vector<ParamFamily> example2_candidates_b() {
  return {ParamFamily(FamilyId::Gamma, {1.0, 1.0}), ParamFamily(FamilyId::Weibull, {1.0, 1.0}),
          ParamFamily(FamilyId::Lognormal, {0.0, 1.0})};
}

Example1Summary run_example1(const ExperimentConfig& cfg) {
  cfg.validate();
  Example1Summary s;
  s.config = cfg;
  if (s.config.sample_sizes.empty()) s.config.sample_sizes = {50, 200, 300};
  std::vector<WeightedFamily> cands;
  for (const auto& f : example1_candidates()) cands.emplace_back(f, WeightSpec::length_biased());
  const auto names = family_names(example1_candidates());
  const RunOne run = [&](const Dataset& d) { return build_mcs(cands, d, cfg.alpha, cfg.optimizer); };
  for (std::size_t n : s.config.sample_sizes) {
    const auto records = replicate(example1_truth(), n, s.config, cands.size(), run);
    s.levels.push_back(summarize(records, names, n, cfg.alpha));
  }
  return s;
}

Example2Summary run_example2(const ExperimentConfig& cfg) {
  cfg.validate();
  Example2Summary s;
  s.config = cfg;
  s.n = cfg.sample_sizes.empty() ? 1000 : cfg.sample_sizes.front();
  s.config.sample_sizes = {s.n};
  s.beta = cfg.beta.value_or(0.025);
  const double budget = beta_budget(cfg.alpha, 2);
  if (s.beta > budget * (1.0 + 1e-12)) throw DomainError("beta must lie in (0, 1 - sqrt(1 - alpha)]");
  s.partition_point = 0.0;
  const Interval region_a = Interval::at_most(s.partition_point);
  const Interval region_b = Interval::above(s.partition_point);
  const auto cand_a = example2_candidates_a();
  const auto cand_b = example2_candidates_b();
  const WeightedFamily truth(example2_truth(), WeightSpec::identity());

  const RunOne run_a = [&](const Dataset& d) {
    return build_local_mcs(cand_a, d, region_a, s.beta, cfg.optimizer);
  };
  const RunOne run_b = [&](const Dataset& d) {
    return build_local_mcs(cand_b, d, region_b, s.beta, cfg.optimizer);
  };
  s.region_a = summarize(replicate(truth, s.n, s.config, cand_a.size(), run_a), family_names(cand_a), s.n, s.beta);
  s.region_b = summarize(replicate(truth, s.n, s.config, cand_b.size(), run_b), family_names(cand_b), s.n, s.beta);

  // The displayed sample is replication 0.
  const Dataset data(sample(truth, s.n, derive_seed(cfg.seed, s.n, 0)));
  s.empirical_mass_a = ecdf_measure(data, region_a);
  s.sample_local_a = build_local_mcs(cand_a, data, region_a, s.beta, cfg.optimizer);
  s.sample_local_b = build_local_mcs(cand_b, data, region_b, s.beta, cfg.optimizer);

  const auto reference = make_density(example2_truth());
  const auto fits_a = member_fits_by_name(s.sample_local_a, s.region_a.confidence_set);
  const auto fits_b = member_fits_by_name(s.sample_local_b, s.region_b.confidence_set);
  s.mixtures = combine_local_fits(fits_a, fits_b, data, &reference);

  const auto xs = data.sorted();
  const double lo = std::floor(xs.front() / kHistWidth) * kHistWidth;
  const double hi = std::floor(xs.back() / kHistWidth) * kHistWidth + kHistWidth;
  const auto bins = static_cast<std::size_t>(std::llround((hi - lo) / kHistWidth));
  s.histogram.resize(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    s.histogram[b].lower = lo + kHistWidth * static_cast<double>(b);
    s.histogram[b].upper = lo + kHistWidth * static_cast<double>(b + 1);
  }
  for (double x : xs) {
    auto b = static_cast<std::size_t>(std::floor((x - lo) / kHistWidth));
    s.histogram[std::min(b, bins - 1)].count++;
  }

  std::vector<DensityHandle> curves{reference};
  s.density_labels = {"truth"};
  for (const auto& m : s.mixtures) {
    curves.push_back(m.density());
    s.density_labels.push_back(m.label());
  }
  s.density_grid = density_grid(curves, lo, hi, kGridPoints);
  return s;
}

void write_outputs(const Example1Summary& s, const std::filesystem::path& dir) {
  std::ostringstream t1;
  t1 << "n,hypothesis,statistic,conclusion,accept_frequency\n";
  for (const auto& l : s.levels) {
    for (const auto& h : l.hypotheses) {
      t1 << l.n << ",H0: " << h.family << ',' << fixed4(h.mean_statistic) << ','
         << (h.accepted ? "accepted" : "rejected") << ',' << fixed4(h.accept_frequency) << '\n';
    }
  }
  std::ostringstream t2;
  t2 << "n,confidence_set,most_frequent_set,most_frequent_share,replications,failed\n";
  for (const auto& l : s.levels) {
    t2 << l.n << ",{" << join(l.confidence_set, ";") << "},{" << join(l.most_frequent_set, ";") << "},"
       << fixed4(l.most_frequent_share) << ',' << l.replications << ',' << l.failed << '\n';
  }
  write_text(dir / "table1.csv", t1.str());
  write_text(dir / "table2.csv", t2.str());
  write_text(dir / "summary.json", to_json(s).dump(2) + "\n");
}

void write_outputs(const Example2Summary& s, const std::filesystem::path& dir) {
  write_text(dir / "table3.csv", hypothesis_table(s.region_a));
  write_text(dir / "table4.csv", hypothesis_table(s.region_b));
  write_text(dir / "table5.csv", mixture_csv(s.mixtures));
  std::ostringstream hist;
  hist << "lower,upper,count\n";
  for (const auto& b : s.histogram) hist << fixed4(b.lower) << ',' << fixed4(b.upper) << ',' << b.count << '\n';
  write_text(dir / "fig1_hist.csv", hist.str());
  std::ostringstream grid;
  grid << "x," << join(s.density_labels, ",") << '\n';
  grid.precision(10);
  for (const auto& row : s.density_grid) {
    for (std::size_t c = 0; c < row.size(); ++c) grid << (c ? "," : "") << row[c];
    grid << '\n';
  }
  write_text(dir / "fig1_densities.csv", grid.str());
  write_text(dir / "summary.json", to_json(s).dump(2) + "\n");
}

}  // namespace wmcs
