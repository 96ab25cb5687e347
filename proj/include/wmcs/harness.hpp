#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "wmcs/mixture.hpp"

namespace wmcs {

enum class ExperimentId { Example1, Example2, Custom };

std::string_view experiment_name(ExperimentId id);
ExperimentId experiment_from_name(std::string_view name);

struct ExperimentConfig {
  ExperimentId experiment = ExperimentId::Example1;
  std::vector<std::size_t> sample_sizes;  // empty: experiment default
  std::size_t replications = 1000;
  double alpha = 0.05;
  std::optional<double> beta;  // Example 2 local level; default 0.025
  std::uint64_t seed = 20140101;
  std::filesystem::path output_dir = ".";
  unsigned workers = 0;  // 0: hardware concurrency
  OptimizerOptions optimizer;

  // Throws DomainError when replications < 1 or a sample size is below 10.
  void validate() const;
};

// Replication-level aggregate for one null hypothesis H0_i.
struct HypothesisSummary {
  std::string family;
  double mean_statistic = 0.0;    // mean over replications of min_j t_ij
  double accept_frequency = 0.0;  // share of replications accepting H0_i
  bool accepted = false;          // decision rule applied to mean_statistic
};

struct LevelSummary {
  std::size_t n = 0;
  std::size_t replications = 0;  // replications that produced a decision
  std::size_t failed = 0;        // replications dropped after a fitting error
  double critical = 0.0;
  std::vector<HypothesisSummary> hypotheses;
  std::vector<std::string> confidence_set;       // from the mean statistics
  std::vector<std::string> most_frequent_set;    // most common per-replication set
  double most_frequent_share = 0.0;
};

struct Example1Summary {
  ExperimentConfig config;
  std::vector<LevelSummary> levels;  // one per sample size
};

// Per-candidate statistics for one replication, used by the replication
// record and the determinism checks.
struct ReplicationRecord {
  std::size_t rep_index = 0;
  std::vector<double> min_statistics;
  std::vector<bool> accepted;
  bool failed = false;
};

// Length-biased LN(2, 0.5) truth; length-biased lognormal, gamma and Weibull
// candidates; alpha-level tests for each n.
Example1Summary run_example1(const ExperimentConfig& cfg);

struct HistogramBin {
  double lower = 0.0;
  double upper = 0.0;
  std::size_t count = 0;
};

struct Example2Summary {
  ExperimentConfig config;
  std::size_t n = 0;
  double beta = 0.025;
  double partition_point = 0.0;
  double empirical_mass_a = 0.0;        // P_hat(X <= 0) on the displayed sample
  LevelSummary region_a;                // replicated local tests on A
  LevelSummary region_b;                // replicated local tests on A'
  ConfidenceSet sample_local_a;         // single displayed sample
  ConfidenceSet sample_local_b;
  std::vector<MixtureCandidate> mixtures;  // aggregated members, displayed-sample fits
  std::vector<HistogramBin> histogram;
  std::vector<std::string> density_labels;
  std::vector<std::vector<double>> density_grid;  // x, truth, mixtures...
};

// Bimodal truth; normal/cauchy/logistic/laplace on A = (-inf, 0] and
// gamma/weibull/lognormal on A' = (0, inf) at level beta; mixture weights and
// distances to the truth on the first simulated sample.
Example2Summary run_example2(const ExperimentConfig& cfg);

// Candidate lists of the second study.
std::vector<ParamFamily> example2_candidates_a();
std::vector<ParamFamily> example2_candidates_b();

// Writes table1.csv, table2.csv and summary.json.
void write_outputs(const Example1Summary& s, const std::filesystem::path& dir);
// Writes table3.csv, table4.csv, table5.csv, fig1_hist.csv, fig1_densities.csv
// and summary.json.
void write_outputs(const Example2Summary& s, const std::filesystem::path& dir);

// Worker count: WMCS_WORKERS when set, otherwise hardware concurrency.
unsigned default_workers();

}  // namespace wmcs
