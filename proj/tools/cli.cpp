#include "cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "wmcs/errors.hpp"
#include "wmcs/io.hpp"

namespace wmcs {
namespace {

struct Options {
  std::string input;
  std::optional<std::string> column;
  std::string models;
  std::string models_a;
  std::string models_b;
  double alpha = 0.05;
  std::optional<double> beta;
  std::optional<double> region_lower;
  std::optional<double> region_upper;
  double partition = 0.0;
  std::string reference;
  std::string format = "json";
  std::string output;
  OptimizerOptions optimizer;
  std::string experiment = "example1";
  std::size_t replications = 1000;
  std::vector<std::size_t> sizes;
  std::string output_dir = ".";
  unsigned workers = 0;
  std::size_t grid_points = 0;
  double grid_lower = -10.0;
  double grid_upper = 12.0;
};

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void emit(const Options& o, std::ostream& out, const std::string& text) {
  if (o.output.empty()) {
    out << text;
  } else {
    write_text(o.output, text);
  }
}

std::vector<ParamFamily> base_families(const std::vector<WeightedFamily>& wfs) {
  std::vector<ParamFamily> out;
  for (const auto& wf : wfs) out.push_back(wf.base());
  return out;
}

std::optional<DensityHandle> load_reference(const std::string& ref) {
  if (ref.empty()) return std::nullopt;
  if (ref == "example2") return make_density(example2_truth());
  const auto wf = parse_model(read_json(ref));
  if (wf.weight().kind == WeightKind::IndicatorRegion) {
    return make_truncated_density(wf.base(), wf.weight().region);
  }
  return make_density(wf);
}

std::string fits_csv(const std::vector<FittedModel>& fits) {
  std::ostringstream os;
  os << "model,params,loglik_total,mean_loglik,effective_n,converged\n";
  for (const auto& f : fits) {
    os << f.wf.label() << ',';
    const auto names = param_names(f.wf.base().id());
    for (std::size_t k = 0; k < names.size(); ++k) {
      os << (k ? ";" : "") << names[k] << '=' << fixed4(f.theta_hat()[k]);
    }
    os << ',' << fixed4(f.loglik_total) << ',' << fixed4(f.mean_loglik) << ',' << f.effective_n << ','
       << (f.converged ? "true" : "false") << '\n';
  }
  return os.str();
}

void run_fit(const Options& o, std::ostream& out, std::ostream& err) {
  const Dataset data = ingest(o.input, o.column);
  err << "read " << data.size() << " observations\n";
  std::vector<FittedModel> fits;
  for (const auto& wf : parse_models(read_json(o.models))) fits.push_back(fit_qmle(wf, data, o.optimizer));
  if (o.format == "csv") {
    emit(o, out, fits_csv(fits));
  } else {
    Json j = Json::array();
    for (const auto& f : fits) j.push_back(to_json(f));
    emit(o, out, j.dump(2) + "\n");
  }
}

void emit_set(const Options& o, std::ostream& out, const ConfidenceSet& cs) {
  emit(o, out, o.format == "csv" ? confidence_set_csv(cs) : to_json(cs).dump(2) + "\n");
}

void run_mcs(const Options& o, std::ostream& out, std::ostream& err) {
  const Dataset data = ingest(o.input, o.column);
  err << "read " << data.size() << " observations\n";
  const auto cs = build_mcs(parse_models(read_json(o.models)), data, o.alpha, o.optimizer);
  for (const auto& w : cs.warnings) err << "warning: " << w << '\n';
  emit_set(o, out, cs);
}

void run_local_mcs(const Options& o, std::ostream& out, std::ostream& err) {
  if (!o.region_lower && !o.region_upper) throw UsageError("local-mcs needs --region-lower or --region-upper");
  Interval region{o.region_lower.value_or(-kInf), o.region_upper.value_or(kInf)};
  if (!(region.upper > region.lower)) throw DomainError("region upper bound must exceed the lower bound");
  const Dataset data = ingest(o.input, o.column);
  err << "read " << data.size() << " observations\n";
  const double level = o.beta.value_or(o.alpha);
  const auto cs = build_local_mcs(base_families(parse_models(read_json(o.models))), data, region, level,
                                  o.optimizer);
  for (const auto& w : cs.warnings) err << "warning: " << w << '\n';
  emit_set(o, out, cs);
}

void run_mixture_mcs(const Options& o, std::ostream& out, std::ostream& err) {
  const Dataset data = ingest(o.input, o.column);
  err << "read " << data.size() << " observations\n";
  const auto cand_a = o.models_a.empty() ? example2_candidates_a()
                                         : base_families(parse_models(read_json(o.models_a)));
  const auto cand_b = o.models_b.empty() ? example2_candidates_b()
                                         : base_families(parse_models(read_json(o.models_b)));
  const auto ref = load_reference(o.reference);
  const auto ms = build_mixture_set(cand_a, cand_b, data, o.partition, o.alpha, o.beta,
                                    ref ? &*ref : nullptr, o.optimizer);
  for (const auto& w : ms.warnings) err << "warning: " << w << '\n';
  emit(o, out, o.format == "csv" ? mixture_csv(ms.candidates) : to_json(ms).dump(2) + "\n");
}

void run_distances(const Options& o, std::ostream& out) {
  const auto mixtures = parse_mixture_candidates(read_json(o.input));
  if (o.grid_points > 0) {
    std::vector<DensityHandle> curves;
    std::ostringstream os;
    os << "x";
    if (const auto ref = load_reference(o.reference)) {
      curves.push_back(*ref);
      os << ",reference";
    }
    for (const auto& m : mixtures) {
      curves.push_back(m.density());
      os << ',' << m.label();
    }
    os << '\n';
    os.precision(10);
    for (const auto& row : density_grid(curves, o.grid_lower, o.grid_upper, o.grid_points)) {
      for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << row[c];
      os << '\n';
    }
    emit(o, out, os.str());
    return;
  }
  const auto ref = load_reference(o.reference);
  if (!ref) throw UsageError("distances needs --reference");
  std::ostringstream os;
  os << "combining_models,alpha_opt,hellinger,l2,half_sq_hellinger,sq_l2\n";
  for (const auto& m : mixtures) {
    const auto d = m.density();
    const double h = hellinger(d, *ref);
    const double l = l2_distance(d, *ref);
    os << m.label() << ',' << fixed4(m.alpha_opt) << ',' << fixed4(h) << ',' << fixed4(l) << ','
       << fixed4(0.5 * h * h) << ',' << fixed4(l * l) << '\n';
  }
  emit(o, out, os.str());
}

void run_simulate(const Options& o, std::ostream& err) {
  ExperimentConfig cfg;
  cfg.experiment = experiment_from_name(o.experiment);
  cfg.sample_sizes = o.sizes;
  cfg.replications = o.replications;
  cfg.alpha = o.alpha;
  cfg.beta = o.beta;
  cfg.seed = o.optimizer.seed;
  cfg.output_dir = o.output_dir;
  cfg.workers = o.workers;
  cfg.optimizer = o.optimizer;
  switch (cfg.experiment) {
    case ExperimentId::Example1: {
      const auto s = run_example1(cfg);
      write_outputs(s, cfg.output_dir);
      for (const auto& l : s.levels) {
        if (l.failed) err << "n=" << l.n << ": " << l.failed << " replications failed to fit\n";
      }
      break;
    }
    case ExperimentId::Example2: {
      const auto s = run_example2(cfg);
      write_outputs(s, cfg.output_dir);
      break;
    }
    case ExperimentId::Custom:
      throw UsageError("simulate supports example1 and example2");
  }
  err << "wrote outputs to " << cfg.output_dir.string() << '\n';
}

void add_optimizer_flags(CLI::App* sub, Options& o) {
  sub->add_option("--seed", o.optimizer.seed, "Random seed");
  sub->add_option("--max-iter", o.optimizer.max_iter, "Simplex iterations per start")->check(CLI::PositiveNumber);
  sub->add_option("--tol", o.optimizer.tol, "Relative objective tolerance")->check(CLI::PositiveNumber);
  sub->add_option("--restarts", o.optimizer.restarts, "Perturbed restarts")->check(CLI::NonNegativeNumber);
}

void add_output_flags(CLI::App* sub, Options& o) {
  sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--output", o.output, "Output file (default: standard output)");
}

void add_input_flags(CLI::App* sub, Options& o) {
  sub->add_option("--input", o.input, "Data file")->required();
  sub->add_option("--column", o.column, "CSV column holding the data");
}

}  // namespace

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Weighted, local and mixture model confidence sets"};
  app.require_subcommand(1);
  Options o;
  auto level = [&](CLI::App* sub) {
    sub->add_option("--alpha", o.alpha, "Significance level")->check(CLI::Range(0.0, 1.0));
  };

  auto* fit = app.add_subcommand("fit", "Fit each model by quasi-maximum likelihood");
  add_input_flags(fit, o);
  fit->add_option("--models", o.models, "JSON model list")->required();
  add_optimizer_flags(fit, o);
  add_output_flags(fit, o);

  auto* mcs = app.add_subcommand("mcs", "Model confidence set");
  add_input_flags(mcs, o);
  mcs->add_option("--models", o.models, "JSON model list")->required();
  level(mcs);
  add_optimizer_flags(mcs, o);
  add_output_flags(mcs, o);

  auto* local = app.add_subcommand("local-mcs", "Local model confidence set on a region");
  add_input_flags(local, o);
  local->add_option("--models", o.models, "JSON model list")->required();
  level(local);
  local->add_option("--beta", o.beta, "Level used on the region (default: --alpha)");
  local->add_option("--region-lower", o.region_lower, "Open lower end of the region");
  local->add_option("--region-upper", o.region_upper, "Closed upper end of the region");
  add_optimizer_flags(local, o);
  add_output_flags(local, o);

  auto* mix = app.add_subcommand("mixture-mcs", "Two-partition mixture confidence set");
  add_input_flags(mix, o);
  mix->add_option("--models-a", o.models_a, "JSON model list for (-inf, c]");
  mix->add_option("--models-b", o.models_b, "JSON model list for (c, inf)");
  mix->add_option("--partition", o.partition, "Partition point c");
  level(mix);
  mix->add_option("--beta", o.beta, "Per-partition level");
  mix->add_option("--reference", o.reference, "Reference density: JSON model file or 'example2'");
  add_optimizer_flags(mix, o);
  add_output_flags(mix, o);

  auto* dist = app.add_subcommand("distances", "Distances of saved mixtures to a reference density");
  dist->add_option("--input", o.input, "JSON written by mixture-mcs")->required();
  dist->add_option("--reference", o.reference, "Reference density: JSON model file or 'example2'");
  dist->add_option("--grid-points", o.grid_points, "Emit density curves on this many grid points");
  dist->add_option("--grid-lower", o.grid_lower, "Grid lower end");
  dist->add_option("--grid-upper", o.grid_upper, "Grid upper end");
  dist->add_option("--output", o.output, "Output file (default: standard output)");

  auto* sim = app.add_subcommand("simulate", "Run a simulation study");
  sim->add_option("--experiment", o.experiment, "example1 or example2");
  sim->add_option("--replications", o.replications, "Replications per sample size")->check(CLI::PositiveNumber);
  sim->add_option("--sizes", o.sizes, "Sample sizes")->delimiter(',');
  level(sim);
  sim->add_option("--beta", o.beta, "Local level for example2");
  sim->add_option("--output-dir", o.output_dir, "Directory for tables and summary.json");
  sim->add_option("--workers", o.workers, "Worker threads (default: WMCS_WORKERS or all cores)");
  add_optimizer_flags(sim, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    if (*fit) run_fit(o, out, err);
    else if (*mcs) run_mcs(o, out, err);
    else if (*local) run_local_mcs(o, out, err);
    else if (*mix) run_mixture_mcs(o, out, err);
    else if (*dist) run_distances(o, out);
    else if (*sim) run_simulate(o, err);
  } catch (const StatisticalError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace wmcs
